#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nematicflow/config.hpp"

namespace nematicflow {

struct RunOptions {
  std::optional<std::filesystem::path> restart;  // checkpoint to resume from
  std::ostream* log = nullptr;                   // progress lines; null for silence
};

struct RunOutcome {
  int exit_code = 0;
  long steps = 0;     // steps taken by this invocation
  long last_step = 0; // global step index reached
  double t = 0.0;
  std::string error_kind;  // empty on success
  std::string message;
  // Flags accumulated over the run.
  long entropy_violations = 0;
  long entropy_decreases = 0;
  long stretch_flags = 0;
  long tracker_exceedances = 0;
  double max_abs_d = 0.0;
  double max_abs_drift = 0.0;
};

// Runs config.scenario to t_end inside config.output_dir:
//   audit.csv (one row per step), snap_NNNNNNNN.vtk and ckpt_NNNNNNNN.nemf at
//   their cadences, final.nemf, config.ini, and failure.json on a numerical or
//   IO failure. The step count is round(t_end / dt); a restart continues from
//   round(t / dt) with the audit reference reset to the restart state.
RunOutcome run(const RunConfig& config, const RunOptions& options = {});

struct LadderLevel {
  int cells = 0;
  double dt = 0.0;
  FieldErrors error;       // vs exact, or vs the next finer level for self-convergence
  double drift = 0.0;      // |energy_drift| at t_end
  double seconds = 0.0;
};

struct LadderResult {
  std::string kind;  // "space", "time" or "drift"
  std::vector<LadderLevel> levels;
  // log2 ratios between consecutive error entries.
  std::vector<FieldErrors> orders;
  // drift[i] / drift[i + 1] for the drift ladder.
  std::vector<double> drift_ratios;
};

// Space ladder against the exact solution with dt ∝ h^p, cells doubling.
LadderResult space_ladder(const RunConfig& config);
// Time ladder at fixed cells, dt halving; self-convergence differences.
LadderResult time_ladder(const RunConfig& config);
// dt and spacing halved together; reports the energy drift ratio.
LadderResult drift_ladder(const RunConfig& config);
// Runs the ladders that apply to the scenario and prints a table.
int run_convergence(const RunConfig& config, std::ostream& out);

struct CheckpointComparison {
  EnergyComponents a, b;
  double energy_delta = 0.0;
  double energy_relative = 0.0;
  double entropy_a = 0.0, entropy_b = 0.0;
  double lyapunov_a = 0.0, lyapunov_b = 0.0;
  double max_abs_d_b = 0.0;
  double min_theta_b = 0.0;
  double max_div_u_b = 0.0;
};

// Budget between two states of the same grid; parameters come from config.
CheckpointComparison compare_checkpoints(const State& a, const State& b, const PhysParams& params);
int run_audit(const std::filesystem::path& a, const std::filesystem::path& b,
              const std::optional<RunConfig>& config, std::ostream& out);

}  // namespace nematicflow
