#include "nematicflow/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "nematicflow/error.hpp"
#include "nematicflow/io.hpp"
#include "nematicflow/parallel.hpp"

namespace nematicflow {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string numbered(const char* stem, long step, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%08ld.%s", stem, step, ext);
  return buf;
}

long step_count(double t, double dt) { return std::lround(t / dt); }

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace

RunOutcome run(const RunConfig& config, const RunOptions& options) {
  RunOutcome outcome;
  const fs::path dir = config.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    outcome.exit_code = exit_code(ErrorKind::IoError);
    outcome.error_kind = std::string(to_string(ErrorKind::IoError));
    outcome.message = "cannot create " + dir.string() + ": " + ec.message();
    return outcome;
  }

  long n = 0;
  double t = 0.0;
  std::ofstream csv;
  const auto fail = [&](std::string kind, const std::string& message, int code) {
    if (csv.is_open()) csv.flush();
    outcome.exit_code = code;
    outcome.error_kind = std::move(kind);
    outcome.message = message;
    outcome.last_step = n;
    outcome.t = t;
    nlohmann::json j;
    j["step"] = n + 1;  // the step being attempted
    j["t"] = t;
    j["error"] = outcome.error_kind;
    j["message"] = message;
    j["exit_code"] = code;
    try {
      write_json(dir / "failure.json", j);
    } catch (const Error&) {
      // Nothing more useful to do; the exit code still reports the failure.
    }
    if (options.log) *options.log << outcome.error_kind << ": " << message << "\n";
  };

  try {
    set_thread_count(config.threads);
    Scenario sc = resolve_scenario(config);
    {
      std::ofstream cfg(dir / "config.ini", std::ios::trunc);
      if (!cfg) throw Error(ErrorKind::IoError, "cannot open " + (dir / "config.ini").string() + " for writing");
      cfg << serialize_config(config);
    }
    const double dt = sc.controls.dt;
    const long total = step_count(sc.t_end, dt);

    State state = std::move(sc.state);
    if (options.restart) {
      State loaded = load_checkpoint(*options.restart);
      require_same_grid(loaded.theta.grid(), sc.grid);
      state = std::move(loaded);
      n = step_count(state.t, dt);
    }
    t = state.t;

    Integrator integrator(sc.grid, sc.params, sc.controls, sc.forcing);
    Auditor auditor(sc.grid, sc.params, config.audit);
    const AuditReport initial = auditor.reset(state, n);
    outcome.max_abs_d = initial.max_abs_d;

    const fs::path csv_path = dir / "audit.csv";
    csv.open(csv_path, std::ios::trunc);
    if (!csv) throw Error(ErrorKind::IoError, "cannot open " + csv_path.string() + " for writing");
    write_audit_header(csv);

    if (config.snapshot_every > 0 && !options.restart) write_snapshot(state, dir / numbered("snap", n, "vtk"));
    const long log_every = std::max(1L, total / 10);
    const auto t0 = Clock::now();

    while (n < total) {
      StepResult r = integrator.step(state);
      const AuditReport& rep = auditor.record(state, r.state, r.stage);
      write_audit_row(rep, csv);
      outcome.entropy_violations += rep.entropy_violation;
      outcome.entropy_decreases += rep.entropy_decrease;
      outcome.stretch_flags += rep.stretch_flag;
      outcome.tracker_exceedances += rep.tracker_exceeded;
      outcome.max_abs_d = std::max(outcome.max_abs_d, rep.max_abs_d);
      outcome.max_abs_drift = std::max(outcome.max_abs_drift, std::abs(rep.energy_drift));
      state = std::move(r.state);
      ++n;
      ++outcome.steps;
      t = state.t;
      if (!csv) throw Error(ErrorKind::IoError, "write failed for " + csv_path.string());
      if (config.snapshot_every > 0 && n % config.snapshot_every == 0) {
        write_snapshot(state, dir / numbered("snap", n, "vtk"));
      }
      if (config.checkpoint_every > 0 && n % config.checkpoint_every == 0) {
        save_checkpoint(state, dir / numbered("ckpt", n, "nemf"));
      }
      if (options.log && n % log_every == 0) {
        char line[160];
        std::snprintf(line, sizeof line, "step %ld/%ld t=%.6g drift=%.3e max|d|=%.6f min(theta)=%.6g  %.1fs\n", n,
                      total, t, rep.energy_drift, rep.max_abs_d, rep.min_theta, seconds_since(t0));
        *options.log << line;
      }
    }
    csv.flush();
    if (!csv) throw Error(ErrorKind::IoError, "write failed for " + csv_path.string());
    save_checkpoint(state, dir / "final.nemf");

    nlohmann::json summary;
    summary["steps"] = outcome.steps;
    summary["last_step"] = n;
    summary["t"] = t;
    summary["entropy_violations"] = outcome.entropy_violations;
    summary["entropy_decreases"] = outcome.entropy_decreases;
    summary["stretch_flags"] = outcome.stretch_flags;
    summary["tracker_exceedances"] = outcome.tracker_exceedances;
    summary["max_abs_d"] = outcome.max_abs_d;
    summary["max_abs_drift"] = outcome.max_abs_drift;
    write_json(dir / "summary.json", summary);
    outcome.last_step = n;
    outcome.t = t;
  } catch (const Error& e) {
    fail(std::string(to_string(e.kind())), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    fail("InternalError", e.what(), 3);
  }
  return outcome;
}

namespace {

struct LevelRun {
  State state;
  double drift = 0.0;
  double seconds = 0.0;
  std::optional<ExactSolution> exact;
};

LevelRun run_level(const RunConfig& config) {
  const auto t0 = Clock::now();
  Scenario sc = resolve_scenario(config);
  Integrator integrator(sc.grid, sc.params, sc.controls, sc.forcing);
  Auditor auditor(sc.grid, sc.params, config.audit);
  auditor.reset(sc.state);
  const long total = step_count(sc.t_end, sc.controls.dt);
  State state = std::move(sc.state);
  for (long k = 0; k < total; ++k) {
    StepResult r = integrator.step(state);
    auditor.record(state, r.state, r.stage);
    state = std::move(r.state);
  }
  return {std::move(state), std::abs(auditor.last().energy_drift), seconds_since(t0), std::move(sc.exact)};
}

FieldErrors log2_ratio(const FieldErrors& a, const FieldErrors& b) {
  return {std::log2(a.u / b.u), std::log2(a.d / b.d), std::log2(a.theta / b.theta)};
}

// Level-0 cells and dt as resolved from the config.
std::pair<int, double> base_level(const RunConfig& config) {
  const Scenario sc = resolve_scenario(config);
  return {sc.grid.cells[0], sc.controls.dt};
}

}  // namespace

LadderResult space_ladder(const RunConfig& config) {
  const auto [c0, dt0] = base_level(config);
  const double p = config.ladder_dt_power > 0.0 ? config.ladder_dt_power : 2.0;
  LadderResult res;
  res.kind = "space";
  for (int i = 0; i < config.ladder_levels; ++i) {
    RunConfig c = config;
    c.cells = c0 << i;
    c.controls.dt = dt0 / std::pow(2.0, p * i);
    LevelRun run = run_level(c);
    if (!run.exact) throw Error(ErrorKind::InvalidArgument, "space ladder needs a scenario with an exact solution");
    res.levels.push_back({c.cells, *c.controls.dt, solution_error(run.state, *run.exact, run.state.t), run.drift,
                          run.seconds});
    if (i > 0) res.orders.push_back(log2_ratio(res.levels[i - 1].error, res.levels[i].error));
  }
  return res;
}

LadderResult time_ladder(const RunConfig& config) {
  const auto [c0, dt0] = base_level(config);
  LadderResult res;
  res.kind = "time";
  State prev;
  for (int i = 0; i < config.ladder_levels; ++i) {
    RunConfig c = config;
    c.cells = c0;
    c.controls.dt = dt0 / std::pow(2.0, i);
    LevelRun run = run_level(c);
    res.levels.push_back({c0, *c.controls.dt, {}, run.drift, run.seconds});
    if (i > 0) res.levels[i - 1].error = field_difference(prev, run.state);
    if (i > 1) res.orders.push_back(log2_ratio(res.levels[i - 2].error, res.levels[i - 1].error));
    prev = std::move(run.state);
  }
  return res;
}

LadderResult drift_ladder(const RunConfig& config) {
  const auto [c0, dt0] = base_level(config);
  const double p = config.ladder_dt_power > 0.0 ? config.ladder_dt_power : 1.0;
  LadderResult res;
  res.kind = "drift";
  for (int i = 0; i < config.ladder_levels; ++i) {
    RunConfig c = config;
    c.cells = c0 << i;
    c.controls.dt = dt0 / std::pow(2.0, p * i);
    LevelRun run = run_level(c);
    res.levels.push_back({c.cells, *c.controls.dt, {}, run.drift, run.seconds});
    if (i > 0) res.drift_ratios.push_back(res.levels[i - 1].drift / run.drift);
  }
  return res;
}

int run_convergence(const RunConfig& config, std::ostream& out) {
  set_thread_count(config.threads);
  char line[200];
  const auto print_errors = [&](const LadderResult& r, const char* label) {
    out << r.kind << " ladder (" << label << ")\n";
    for (const auto& l : r.levels) {
      std::snprintf(line, sizeof line, "  cells %4d  dt %.4e  u %.4e  d %.4e  theta %.4e  %.1fs\n", l.cells, l.dt,
                    l.error.u, l.error.d, l.error.theta, l.seconds);
      out << line;
    }
    for (const auto& o : r.orders) {
      std::snprintf(line, sizeof line, "  order     u %.3f  d %.3f  theta %.3f\n", o.u, o.d, o.theta);
      out << line;
    }
  };
  const Scenario sc = resolve_scenario(config);
  if (sc.exact) {
    print_errors(space_ladder(config), "L2 error vs exact");
    print_errors(time_ladder(config), "L2 difference to next finer dt");
  } else {
    const LadderResult r = drift_ladder(config);
    out << "drift ladder (|energy drift| at t_end)\n";
    for (const auto& l : r.levels) {
      std::snprintf(line, sizeof line, "  cells %4d  dt %.4e  drift %.4e  %.1fs\n", l.cells, l.dt, l.drift, l.seconds);
      out << line;
    }
    for (double q : r.drift_ratios) {
      std::snprintf(line, sizeof line, "  ratio %.3f  order %.3f\n", q, std::log2(q));
      out << line;
    }
  }
  return 0;
}

CheckpointComparison compare_checkpoints(const State& a, const State& b, const PhysParams& params) {
  require_same_grid(a.theta.grid(), b.theta.grid());
  const Potential F(params.potential);
  CheckpointComparison c;
  c.a = energy_components(a, params, F);
  c.b = energy_components(b, params, F);
  c.energy_delta = c.b.total() - c.a.total();
  c.energy_relative = c.energy_delta / std::abs(c.a.total());
  c.entropy_a = entropy_total(a.theta);
  c.entropy_b = entropy_total(b.theta);
  c.lyapunov_a = lyapunov_functional(a, params, F);
  c.lyapunov_b = lyapunov_functional(b, params, F);
  c.max_abs_d_b = max_director_norm(b.d);
  double mn = b.theta.values().empty() ? 0.0 : b.theta[0];
  for (double v : b.theta.values()) mn = std::min(mn, v);
  c.min_theta_b = mn;
  c.max_div_u_b = max_abs(divergence(b.u));
  return c;
}

int run_audit(const fs::path& pa, const fs::path& pb, const std::optional<RunConfig>& config, std::ostream& out) {
  const State a = load_checkpoint(pa);
  const State b = load_checkpoint(pb);
  const PhysParams params = config ? resolve_scenario(*config).params : PhysParams{};
  const CheckpointComparison c = compare_checkpoints(a, b, params);
  char line[200];
  const auto row = [&](const char* name, double x, double y) {
    std::snprintf(line, sizeof line, "%-18s %.17g -> %.17g\n", name, x, y);
    out << line;
  };
  std::snprintf(line, sizeof line, "t                  %.17g -> %.17g\n", a.t, b.t);
  out << line;
  row("kinetic", c.a.kinetic, c.b.kinetic);
  row("thermal", c.a.thermal, c.b.thermal);
  row("elastic_gradient", c.a.elastic_gradient, c.b.elastic_gradient);
  row("elastic_potential", c.a.elastic_potential, c.b.elastic_potential);
  row("energy_total", c.a.total(), c.b.total());
  row("entropy_total", c.entropy_a, c.entropy_b);
  row("lyapunov", c.lyapunov_a, c.lyapunov_b);
  std::snprintf(line, sizeof line, "energy change      %.6e (relative %.6e)\n", c.energy_delta, c.energy_relative);
  out << line;
  std::snprintf(line, sizeof line, "entropy change     %.6e%s\n", c.entropy_b - c.entropy_a,
                c.entropy_b < c.entropy_a ? "  DECREASE" : "");
  out << line;
  std::snprintf(line, sizeof line, "B: max|d| %.6f  min(theta) %.6g  max|div u| %.3e%s\n", c.max_abs_d_b,
                c.min_theta_b, c.max_div_u_b, c.max_abs_d_b > 1.0 ? "  STRETCHED" : "");
  out << line;
  return 0;
}

}  // namespace nematicflow
