#pragma once

#include <Eigen/Dense>
#include <vector>

namespace nematicflow {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Gradient conventions: grad_d(i, k) = ∂_k d_i, grad_u(i, j) = ∂_j u_i.
// In 2D the third column of a gradient is zero.

struct PotentialSpec {
  enum class Kind { quartic, table };
  Kind kind = Kind::quartic;
  // table: F(d) = phi(|d|^2) with phi interpolated by a natural cubic spline
  // through samples phi(k * s_step), continued as a quadratic beyond the last knot.
  double s_step = 0.0;
  std::vector<double> samples;

  bool operator==(const PotentialSpec&) const = default;
};

class Potential {
 public:
  Potential() = default;
  explicit Potential(PotentialSpec spec);

  double value(const Vec3& d) const { return phi(d.squaredNorm()); }
  Vec3 gradient(const Vec3& d) const { return 2.0 * dphi(d.squaredNorm()) * d; }
  // Jacobian of the gradient, 2 phi' I + 4 phi'' d d^T.
  Mat3 jacobian(const Vec3& d) const;

  double phi(double s) const;
  double dphi(double s) const;
  double d2phi(double s) const;
  // Upper bound on the spectral norm of the Jacobian over |d| <= radius.
  double lipschitz_bound(double radius) const;

  const PotentialSpec& spec() const { return spec_; }

 private:
  // Returns knot index and local offset for a table lookup.
  void locate(double s, int& k, double& t) const;

  PotentialSpec spec_;
  std::vector<double> m_;  // spline second derivatives at knots
};

// Scalar coefficient of temperature: a constant, or an affine profile
// passed through a tanh saturation into (lo, hi).
struct Coefficient {
  enum class Kind { constant, saturating };
  Kind kind = Kind::constant;
  double value = 0.0;
  double slope = 0.0;
  double theta_ref = 1.0;
  double lo = 0.0;
  double hi = 0.0;

  static Coefficient constant(double v) { return {Kind::constant, v, 0.0, 1.0, v, v}; }
  double operator()(double theta) const;
  bool is_constant() const { return kind == Kind::constant; }
  bool operator==(const Coefficient&) const = default;
};

// g_direction(x) = amplitude * cos(wavenumber * x_axis + phase); other components zero.
struct BodyForce {
  int direction = 0;
  int axis = 1;
  double amplitude = 0.0;
  double wavenumber = 0.0;
  double phase = 0.0;

  bool zero() const { return amplitude == 0.0; }
  double operator()(int comp, const Vec3& x) const;
  bool operator==(const BodyForce&) const = default;
};

struct PhysParams {
  double lambda = 1.0;
  double eta = 1.0;
  double gamma = 1.0;
  Coefficient mu = Coefficient::constant(0.1);
  Coefficient k = Coefficient::constant(0.1);
  Coefficient h = Coefficient::constant(0.0);
  double mu_lo = 1e-3;
  double mu_hi = 1e3;
  double k_lo = 1e-3;
  double k_hi = 1e3;
  PotentialSpec potential;
  double D0 = 1.0;
  BodyForce g;
  double reg_weight = 0.0;
  double reg_r = 3.2;
  bool stretching = true;
  // Upper end of the temperature range sampled when checking coefficient bounds.
  double theta_max = 100.0;

  // Throws HypothesisViolation naming the offending key.
  void validate() const;
  bool operator==(const PhysParams&) const = default;
};

// Pointwise constitutive relations.
double potential_F(const Potential& F, const Vec3& d);
Vec3 potential_f(const Potential& F, const Vec3& d);

double free_energy_density(const PhysParams& p, const Potential& F, const Vec3& d, const Mat3& grad_d,
                           double theta);
double entropy_density(double theta);
double internal_energy_density(const PhysParams& p, const Potential& F, const Vec3& d,
                               const Mat3& grad_d, double theta);

Mat3 strain_rate(const Mat3& grad_u);
Mat3 dissipative_stress(const PhysParams& p, double theta, const Mat3& grad_u);
// (∇d ⊙ ∇d)_ij = Σ_k ∂_i d_k ∂_j d_k, symmetric positive semidefinite.
Mat3 gradient_gram(const Mat3& grad_d);
Mat3 elastic_stress(const PhysParams& p, const Potential& F, const Vec3& d, const Mat3& grad_d,
                    const Vec3& lap_d);

struct HeatFlux {
  Vec3 q;
  Vec3 Q;  // q / theta
};
HeatFlux dissipative_heat_flux(const PhysParams& p, double theta, const Vec3& grad_theta, const Vec3& d);

// (q_nd)_k = -λ Σ_ij ∂_k d_i ∂_j u_i d_j.
Vec3 nondissipative_energy_flux(double lambda, const Mat3& grad_d, const Mat3& grad_u, const Vec3& d);

struct Microforces {
  Vec3 Bnd;
  Vec3 Bd;
  Mat3 Hnd;
};
Microforces director_microforces(const PhysParams& p, const Potential& F, const Vec3& d,
                                 const Mat3& grad_d, const Vec3& Dd_Dt);

// (1/theta)(S : eps(u) + Bd . Dd/Dt - Q . grad theta).
double entropy_production_density(double theta, const Mat3& S, const Mat3& grad_u, const Vec3& Bd,
                                  const Vec3& Dd_Dt, const Vec3& Q, const Vec3& grad_theta);

// Dd/Dt = d_t + u·∇d - d·∇u, with (d·∇u)_i = Σ_j d_j ∂_j u_i.
Vec3 material_director_derivative(const Vec3& d_t, const Vec3& u, const Vec3& d, const Mat3& grad_d,
                                  const Mat3& grad_u);

}  // namespace nematicflow
