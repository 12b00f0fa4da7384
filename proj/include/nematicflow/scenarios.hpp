#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nematicflow/dynamics.hpp"
#include "nematicflow/trig_field.hpp"

namespace nematicflow {

struct ExactSolution {
  std::function<double(int, const Vec3&, double)> u;
  std::function<double(int, const Vec3&, double)> d;
  std::function<double(const Vec3&, double)> theta;
};

struct Scenario {
  std::string name;
  Grid grid;
  State state;
  PhysParams params;
  StepControls controls;
  double t_end = 1.0;
  Forcing forcing;
  std::optional<ExactSolution> exact;
  std::uint64_t seed = 1;
};

// Zero or empty entries keep the scenario defaults. knobs are
// scenario-specific scalars (nu, U, G, tilt, bump, h, amplitude).
struct ScenarioOptions {
  int cells = 0;  // along x; other axes keep the scenario's aspect ratio
  double dt = 0.0;
  std::uint64_t seed = 1;
  std::map<std::string, double> knobs;
  // Base parameters before scenario-specific settings (defaults otherwise).
  // Manufactured forcings are assembled from the final parameters.
  std::optional<PhysParams> physics;

  bool operator==(const ScenarioOptions&) const = default;
};

// Uniform unit d along x, u = 0, θ = theta0 (knob "theta0", default 1).
Scenario scenario_equilibrium(const ScenarioOptions& options = {});
// Periodic [0, 2π]^2 vortex array u = (sin x cos y, -cos x sin y), μ = 2ν,
// stretching off.
Scenario scenario_taylor_green(double nu, const ScenarioOptions& options = {});
// [0, 2] x [0, 1], periodic in x, slip walls in y. u = (U cos πy, 0),
// d = (sin α, cos α, 0) with α = tilt sin(πx), body force G cos(πy) e_x.
Scenario scenario_shear_stretch(const ScenarioOptions& options = {});
// Periodic [0, 2π]^2 with smooth exact fields and residual forcings.
// order_check selects the short horizon used by refinement ladders.
Scenario scenario_manufactured(bool order_check, const ScenarioOptions& options = {});
// Periodic [0, 2π]^2: shear U sin y, tilted director, Gaussian θ bump, h > 0.
Scenario scenario_mixed(const ScenarioOptions& options = {});

std::vector<std::string> scenario_names();
// Dispatches on name; throws InvalidArgument for unknown names.
Scenario make_scenario(const std::string& name, const ScenarioOptions& options = {});

// Throws HypothesisViolation unless div u <= tol_div, min θ > 0 and F(d) is
// finite everywhere.
void check_admissible(const State& state, const PhysParams& params, double tol_div);

struct ManufacturedForcing {
  Vec3 u = Vec3::Zero();
  Vec3 d = Vec3::Zero();
  double theta = 0.0;
};
// Residuals of the three strong-form equations at a jet. Requires constant
// μ, k, h and no regularizer.
ManufacturedForcing manufactured_forcing(const Jet& jet, const PhysParams& params, const Potential& F);

// Samples exact fields at time t; u is sampled on faces and projected.
State sample_exact(const Grid& grid, const ExactSolution& exact, double t, double tol_div = 1e-10);

struct FieldErrors {
  double u = 0.0, d = 0.0, theta = 0.0;
};
// Discrete L² norms of state - exact(t).
FieldErrors solution_error(const State& state, const ExactSolution& exact, double t);
// Discrete L² norms of a - b.
FieldErrors field_difference(const State& a, const State& b);

}  // namespace nematicflow
