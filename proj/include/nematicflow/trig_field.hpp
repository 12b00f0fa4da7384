#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nematicflow/constitutive.hpp"

namespace nematicflow {

// a (1 + b sin(ωt)) cos(k·x + φ)
struct TrigTerm {
  double amplitude = 0.0;
  Vec3 k = Vec3::Zero();
  double phase = 0.0;
  double time_amplitude = 0.0;
  double omega = 0.0;
};

// Value and the derivatives the forcings need, from one pass over the terms.
struct TrigDerivatives {
  double value = 0.0, value_t = 0.0;
  Vec3 grad = Vec3::Zero(), grad_t = Vec3::Zero(), grad_lap = Vec3::Zero();
  Mat3 hess = Mat3::Zero();
};

// Constant plus a finite sum of plane waves; all derivatives are exact.
struct TrigSeries {
  double constant = 0.0;
  std::vector<TrigTerm> terms;

  // ∂^alpha in space, then time_order (0 or 1) derivatives in t.
  double eval(const Vec3& x, double t, std::array<int, 3> alpha = {0, 0, 0}, int time_order = 0) const;
  double operator()(const Vec3& x, double t) const { return eval(x, t); }
  TrigDerivatives derivatives(const Vec3& x, double t) const;
};

// Pointwise derivatives of (u, d, θ) needed to assemble residual forcings.
struct Jet {
  Vec3 u = Vec3::Zero(), u_t = Vec3::Zero(), lap_u = Vec3::Zero();
  Mat3 grad_u = Mat3::Zero();  // (i, j) = ∂_j u_i
  Vec3 d = Vec3::Zero(), d_t = Vec3::Zero();
  Mat3 grad_d = Mat3::Zero();  // (i, k) = ∂_k d_i
  std::array<Mat3, 3> hess_d{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};  // [i](j, k) = ∂_j∂_k d_i
  Mat3 grad_lap_d = Mat3::Zero();  // (i, j) = ∂_j Δd_i
  double theta = 0.0, theta_t = 0.0;
  Vec3 grad_theta = Vec3::Zero();
  Mat3 hess_theta = Mat3::Zero();
};

// Planar fields: u = (∂_y ψ, -∂_x ψ, 0) from a stream function, so div u = 0
// exactly; d and θ componentwise.
struct ManufacturedFields {
  TrigSeries psi;
  std::array<TrigSeries, 3> d;
  TrigSeries theta;

  double u(int comp, const Vec3& x, double t) const;
  Jet jet(const Vec3& x, double t) const;
  // Same quantities from point values of u, d and θ only, by nested fourth-order central
  // differences with step h.
  Jet fd_jet(const Vec3& x, double t, double h = 1e-3) const;
};

// Smooth 2π-periodic fields with |d| in [0.5, 1.5] and θ >= 1; phases drawn
// from the seed. amplitude 0 gives u = 0, d = (1, 0, 0), θ = 2.
ManufacturedFields make_manufactured_fields(std::uint64_t seed, double amplitude = 1.0);

}  // namespace nematicflow
