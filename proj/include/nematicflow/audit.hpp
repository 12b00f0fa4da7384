#pragma once

#include <array>
#include <limits>
#include <string>

#include "nematicflow/constitutive.hpp"
#include "nematicflow/dynamics.hpp"

namespace nematicflow {

// Concave, non-decreasing weights for the entropy inequality.
struct HFunction {
  enum class Kind { identity, log, power };
  Kind kind = Kind::identity;
  double exponent = 1.0 / 3.0;  // power kind: (1 + θ)^exponent, exponent in (0, 1)

  static HFunction identity() { return {}; }
  static HFunction log() { return {Kind::log, 0.0}; }
  static HFunction power(double e) { return {Kind::power, e}; }

  double value(double theta) const;
  double d1(double theta) const;
  double d2(double theta) const;
  std::string name() const;

  // H' >= 0 and H'' <= 0 on log-spaced samples of (lo, hi).
  bool admissible(double lo = 1e-6, double hi = 1e6, int samples = 2000) const;
};

// The shipped family, in CSV column order.
std::array<HFunction, 3> standard_h_family();

struct EnergyComponents {
  double kinetic = 0.0;
  double thermal = 0.0;
  double elastic_gradient = 0.0;
  double elastic_potential = 0.0;
  double total() const { return kinetic + thermal + elastic_gradient + elastic_potential; }
};

EnergyComponents energy_components(const State& s, const PhysParams& params, const Potential& F);
double entropy_total(const ScalarField& theta);
// The isothermal Lyapunov functional ½‖u‖² + λ/2‖∇d‖² + λ∫F(d).
double lyapunov_functional(const State& s, const PhysParams& params, const Potential& F);

struct EnergyBudget {
  EnergyComponents prev;
  EnergyComponents next;
  double delta = 0.0;          // E(next) - E(prev)
  double boundary_flux = 0.0;  // energy leaving through walls
  double external_work = 0.0;
  double residual = 0.0;       // delta - boundary_flux - external_work
  double thermal_delta = 0.0;  // thermal sub-ledger: Σθ change
  double thermal_sources = 0.0;  // dt Σ (sources + forcing) vol - dt Σ advection vol
};

EnergyBudget energy_budget(const State& prev, const State& next, const StageData& stage,
                           const PhysParams& params, const Potential& F);

// Integrated discrete residual of the entropy inequality for one step; >= 0
// by concavity when conduction is implicit.
double entropy_residual(const State& prev, const State& next, const StageData& stage, const HFunction& H);

// Clausius-Duhem production over the step: dt Σ (sources/θ + heat-flux term).
double entropy_production(const State& next, const StageData& stage);

struct AprioriTrackers {
  double u_L2 = 0.0;
  double theta_L1 = 0.0;
  double d_H1 = 0.0;
  double F_L1 = 0.0;
  double grad_u_L2_cum = 0.0;   // ∫ ‖ε(u)‖² dt
  double rotdiss_L2_cum = 0.0;  // ∫ ‖Δd - f(d)‖² dt
};

void apriori_trackers(const State& s, const StageData* stage, const Potential& F, AprioriTrackers& acc);

struct TrackerCeilings {
  double u_L2 = std::numeric_limits<double>::infinity();
  double theta_L1 = std::numeric_limits<double>::infinity();
  double d_H1 = std::numeric_limits<double>::infinity();
  double F_L1 = std::numeric_limits<double>::infinity();
  double grad_u_L2_cum = std::numeric_limits<double>::infinity();
  double rotdiss_L2_cum = std::numeric_limits<double>::infinity();
  bool operator==(const TrackerCeilings&) const = default;
};

struct AuditOptions {
  double tol_entropy_rate = 1e-8;  // tol_entropy = rate * volume * steps
  double power_exponent = 1.0 / 3.0;
  TrackerCeilings ceilings;
  bool operator==(const AuditOptions&) const = default;
};

struct AuditReport {
  long step = 0;
  double t = 0.0;
  double energy_total = 0.0;
  double energy_drift = 0.0;  // (E - E0 - cumulative work) / |E0|
  double energy_residual = 0.0;
  double kinetic = 0.0;
  double thermal = 0.0;
  double elastic_gradient = 0.0;
  double elastic_potential = 0.0;
  double lyapunov = 0.0;
  double entropy_total = 0.0;
  double entropy_production = 0.0;
  std::array<double, 3> entropy_residual{};  // identity, log, power
  AprioriTrackers apriori;
  double wall_stress_residual = 0.0;
  double min_theta = 0.0;
  double max_abs_d = 0.0;
  double max_div_u = 0.0;
  double tol_entropy = 0.0;

  bool entropy_violation = false;  // some residual < -tol_entropy
  bool entropy_decrease = false;   // Σs dropped by more than tol_entropy
  bool stretch_flag = false;       // max|d| > 1
  bool tracker_exceeded = false;
  bool source_sign_violation = false;
};

// Owns the reference energy and the cumulative accumulators of one run.
class Auditor {
 public:
  Auditor(const Grid& grid, const PhysParams& params, AuditOptions options = {});

  // Sets the reference state; the returned report describes it at step `step`.
  AuditReport reset(const State& s, long step = 0);
  AuditReport record(const State& prev, const State& next, const StageData& stage);

  const AuditReport& last() const { return last_; }
  double reference_energy() const { return e0_; }

 private:
  AuditReport describe(const State& s) const;

  Grid grid_;
  PhysParams params_;
  Potential F_;
  AuditOptions options_;
  std::array<HFunction, 3> family_;
  double e0_ = 0.0;
  double work_cum_ = 0.0;
  long steps_ = 0;
  long ref_step_ = 0;
  AprioriTrackers acc_;
  AuditReport last_;
};

double max_director_norm(const VectorField& d);

}  // namespace nematicflow
