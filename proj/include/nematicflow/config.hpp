#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nematicflow/audit.hpp"
#include "nematicflow/scenarios.hpp"

namespace nematicflow {

// Physics keys present in the config; absent keys keep the scenario value.
struct PhysicsOverrides {
  std::optional<double> lambda, eta, gamma;
  std::optional<double> mu, mu_slope, mu_theta_ref;
  std::optional<double> k, k_slope, k_theta_ref;
  std::optional<double> h, h_slope, h_theta_ref;
  std::optional<double> mu_lo, mu_hi, k_lo, k_hi;
  std::optional<double> D0, reg_weight, reg_r, theta_max;
  std::optional<int> g_direction, g_axis;
  std::optional<double> g_amplitude, g_wavenumber, g_phase;
  std::optional<bool> stretching;
  std::optional<std::string> potential;  // quartic | table
  std::optional<double> potential_step;
  std::optional<std::vector<double>> potential_samples;

  void apply(PhysParams& p) const;
  bool operator==(const PhysicsOverrides&) const = default;
};

struct ControlOverrides {
  std::optional<double> dt, cfl_safety, tol_div, tol_newton, blowup_guard;
  std::optional<AdvectionScheme> advection;
  std::optional<DiffusionTreatment> diffusion;
  std::optional<int> time_order, max_iters;
  std::optional<bool> freeze_temperature;
  std::optional<SolverKind> solver;

  void apply(StepControls& c) const;
  bool operator==(const ControlOverrides&) const = default;
};

struct RunConfig {
  std::string scenario = "equilibrium";
  std::optional<double> t_end;  // scenario default when absent
  int cells = 0;                // scenario default when 0
  std::string output_dir = "nematicflow_out";
  int snapshot_every = 0;       // steps; 0 disables
  int checkpoint_every = 0;     // steps; 0 disables
  std::uint64_t seed = 1;
  int threads = 1;
  int ladder_levels = 3;
  double ladder_dt_power = 0.0;  // dt ∝ h^power on the space ladder; 0 picks 2 with an exact solution, else 1
  PhysicsOverrides physics;
  ControlOverrides controls;
  std::map<std::string, double> knobs;
  AuditOptions audit;

  bool operator==(const RunConfig&) const = default;
};

// Parses and validates. Throws ParseError for malformed text and
// HypothesisViolation when the resolved parameters break a model bound.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

// Scenario with every override applied; validates parameters and the
// initial state. scenario/cells/seed may be overridden by the caller first.
Scenario resolve_scenario(const RunConfig& config);

std::string to_string(AdvectionScheme s);
std::string to_string(DiffusionTreatment d);
std::string to_string(SolverKind s);

}  // namespace nematicflow
