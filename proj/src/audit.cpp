#include "nematicflow/audit.hpp"

#include <algorithm>
#include <cmath>

#include "nematicflow/error.hpp"

namespace nematicflow {

double HFunction::value(double theta) const {
  switch (kind) {
    case Kind::identity: return theta;
    case Kind::log: return std::log(theta);
    case Kind::power: return std::pow(1.0 + theta, exponent);
  }
  return 0.0;
}

double HFunction::d1(double theta) const {
  switch (kind) {
    case Kind::identity: return 1.0;
    case Kind::log: return 1.0 / theta;
    case Kind::power: return exponent * std::pow(1.0 + theta, exponent - 1.0);
  }
  return 0.0;
}

double HFunction::d2(double theta) const {
  switch (kind) {
    case Kind::identity: return 0.0;
    case Kind::log: return -1.0 / (theta * theta);
    case Kind::power: return exponent * (exponent - 1.0) * std::pow(1.0 + theta, exponent - 2.0);
  }
  return 0.0;
}

std::string HFunction::name() const {
  switch (kind) {
    case Kind::identity: return "identity";
    case Kind::log: return "log";
    case Kind::power: return "power";
  }
  return "";
}

bool HFunction::admissible(double lo, double hi, int samples) const {
  if (kind == Kind::power && !(exponent > 0.0 && exponent < 1.0)) return false;
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i <= samples; ++i) {
    const double theta = std::exp(a + (b - a) * i / samples);
    if (!(d1(theta) >= 0.0) || !(d2(theta) <= 0.0) || !std::isfinite(value(theta))) return false;
  }
  return true;
}

std::array<HFunction, 3> standard_h_family() {
  return {HFunction::identity(), HFunction::log(), HFunction::power(1.0 / 3.0)};
}

EnergyComponents energy_components(const State& s, const PhysParams& params, const Potential& F) {
  EnergyComponents e;
  e.kinetic = kinetic_energy(s.u);
  e.thermal = integrate(s.theta);
  e.elastic_gradient = elastic_gradient_energy(s.d, params.lambda);
  e.elastic_potential = elastic_potential_energy(s.d, F, params.lambda);
  return e;
}

double entropy_total(const ScalarField& theta) {
  double s = 0.0;
  for (double v : theta.values()) {
    if (!(v > 0.0)) throw Error(ErrorKind::NonpositiveTemperature, "theta = " + std::to_string(v));
    s += 1.0 + std::log(v);
  }
  return s * theta.grid().cell_volume();
}

double lyapunov_functional(const State& s, const PhysParams& params, const Potential& F) {
  return kinetic_energy(s.u) + elastic_gradient_energy(s.d, params.lambda) +
         elastic_potential_energy(s.d, F, params.lambda);
}

EnergyBudget energy_budget(const State& prev, const State& next, const StageData& stage,
                           const PhysParams& params, const Potential& F) {
  const Grid& g = prev.u.grid();
  require_same_grid(g, next.u.grid());
  EnergyBudget b;
  b.prev = energy_components(prev, params, F);
  b.next = energy_components(next, params, F);
  b.delta = b.next.total() - b.prev.total();
  b.boundary_flux = stage.boundary_flux;
  b.external_work = stage.external_work;
  b.residual = b.delta - b.boundary_flux - b.external_work;
  b.thermal_delta = b.next.thermal - b.prev.thermal;
  if (!stage.temperature_frozen) {
    double src = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) {
      src += stage.heat_source[c] + stage.theta_forcing[c] - stage.theta_advection[c];
    }
    b.thermal_sources = stage.dt * src * g.cell_volume();
  }
  return b;
}

namespace {

void require_positive(const ScalarField& theta) {
  for (double v : theta.values()) {
    if (!(v > 0.0)) throw Error(ErrorKind::NonpositiveTemperature, "theta = " + std::to_string(v));
  }
}

ScalarField map_theta(const ScalarField& theta, double (HFunction::*fn)(double) const, const HFunction& H) {
  ScalarField out(theta.grid());
  for (std::size_t c = 0; c < theta.grid().size(); ++c) out[c] = (H.*fn)(theta[c]);
  return out;
}

}  // namespace

double entropy_residual(const State& prev, const State& next, const StageData& stage, const HFunction& H) {
  const Grid& g = prev.theta.grid();
  require_same_grid(g, next.theta.grid());
  require_positive(prev.theta);
  require_positive(next.theta);
  if (stage.temperature_frozen) return 0.0;
  const ScalarField h1 = map_theta(next.theta, &HFunction::d1, H);
  double cells = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    cells += H.value(next.theta[c]) - H.value(prev.theta[c]) +
             stage.dt * h1[c] * (stage.theta_advection[c] - stage.heat_source[c] - stage.theta_forcing[c]);
  }
  const double faces = inner(gradient(h1), stage.heat_flux);
  return cells * g.cell_volume() - stage.dt * faces;
}

double entropy_production(const State& next, const StageData& stage) {
  if (stage.temperature_frozen) return 0.0;
  const Grid& g = next.theta.grid();
  require_positive(next.theta);
  ScalarField inv(g);
  double src = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    inv[c] = 1.0 / next.theta[c];
    src += stage.heat_source[c] * inv[c];
  }
  return stage.dt * (src * g.cell_volume() - inner(gradient(inv), stage.heat_flux));
}

double max_director_norm(const VectorField& d) {
  double m = 0.0;
  for (std::size_t c = 0; c < d.grid().size(); ++c) {
    double s = 0.0;
    for (int i = 0; i < d.components(); ++i) s += d[i][c] * d[i][c];
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

void apriori_trackers(const State& s, const StageData* stage, const Potential& F, AprioriTrackers& acc) {
  const Grid& g = s.u.grid();
  acc.u_L2 = std::sqrt(inner(s.u, s.u));
  double l1 = 0.0;
  for (double v : s.theta.values()) l1 += std::abs(v);
  acc.theta_L1 = l1 * g.cell_volume();
  acc.d_H1 = std::sqrt(inner(s.d, s.d) + 2.0 * elastic_gradient_energy(s.d, 1.0));
  acc.F_L1 = elastic_potential_energy(s.d, F, 1.0);
  if (stage != nullptr) {
    acc.grad_u_L2_cum += stage->dt * stage->strain_sq_integral;
    acc.rotdiss_L2_cum += stage->dt * stage->molecular_sq_integral;
  }
}

Auditor::Auditor(const Grid& grid, const PhysParams& params, AuditOptions options)
    : grid_(grid),
      params_(params),
      F_(params.potential),
      options_(options),
      family_{HFunction::identity(), HFunction::log(), HFunction::power(options.power_exponent)} {
  for (const HFunction& H : family_) {
    if (!H.admissible()) {
      throw Error(ErrorKind::InvalidArgument, "H function '" + H.name() + "' is not concave and non-decreasing");
    }
  }
}

AuditReport Auditor::describe(const State& s) const {
  AuditReport r;
  r.t = s.t;
  const EnergyComponents e = energy_components(s, params_, F_);
  r.energy_total = e.total();
  r.kinetic = e.kinetic;
  r.thermal = e.thermal;
  r.elastic_gradient = e.elastic_gradient;
  r.elastic_potential = e.elastic_potential;
  r.lyapunov = e.kinetic + e.elastic_gradient + e.elastic_potential;
  r.entropy_total = entropy_total(s.theta);
  r.min_theta = *std::min_element(s.theta.values().begin(), s.theta.values().end());
  r.max_abs_d = max_director_norm(s.d);
  r.max_div_u = max_abs(divergence(s.u));
  r.stretch_flag = r.max_abs_d > 1.0;
  return r;
}

AuditReport Auditor::reset(const State& s, long step) {
  AuditReport r = describe(s);
  e0_ = r.energy_total;
  work_cum_ = 0.0;
  steps_ = 0;
  ref_step_ = step;
  acc_ = AprioriTrackers{};
  apriori_trackers(s, nullptr, F_, acc_);
  r.step = step;
  r.apriori = acc_;
  last_ = r;
  return r;
}

AuditReport Auditor::record(const State& prev, const State& next, const StageData& stage) {
  require_same_grid(grid_, next.u.grid());
  AuditReport r = describe(next);
  ++steps_;
  r.step = ref_step_ + steps_;
  const EnergyBudget b = energy_budget(prev, next, stage, params_, F_);
  work_cum_ += b.external_work + b.boundary_flux;
  r.energy_residual = b.residual;
  r.energy_drift = (r.energy_total - e0_ - work_cum_) / std::max(std::abs(e0_), 1e-300);
  r.entropy_production = entropy_production(next, stage);
  r.tol_entropy = options_.tol_entropy_rate * grid_.volume() * static_cast<double>(steps_);
  for (std::size_t k = 0; k < family_.size(); ++k) {
    r.entropy_residual[k] = entropy_residual(prev, next, stage, family_[k]);
    r.entropy_violation = r.entropy_violation || r.entropy_residual[k] < -r.tol_entropy;
  }
  r.entropy_decrease = !stage.temperature_frozen && r.entropy_total < last_.entropy_total - r.tol_entropy;
  apriori_trackers(next, &stage, F_, acc_);
  r.apriori = acc_;
  const TrackerCeilings& c = options_.ceilings;
  r.tracker_exceeded = acc_.u_L2 > c.u_L2 || acc_.theta_L1 > c.theta_L1 || acc_.d_H1 > c.d_H1 ||
                       acc_.F_L1 > c.F_L1 || acc_.grad_u_L2_cum > c.grad_u_L2_cum ||
                       acc_.rotdiss_L2_cum > c.rotdiss_L2_cum;
  r.wall_stress_residual = stage.wall_stress_residual;
  if (!stage.temperature_frozen) {
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (stage.viscous_heating[i] < 0.0 || stage.director_heating[i] < 0.0 ||
          stage.regularizer_heating[i] < 0.0) {
        r.source_sign_violation = true;
        break;
      }
    }
  }
  last_ = r;
  return r;
}

}  // namespace nematicflow
