#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nematicflow/config.hpp"
#include "nematicflow/error.hpp"
#include "nematicflow/runner.hpp"

namespace nf = nematicflow;

namespace {

int threads_from_env(int fallback) {
  const char* env = std::getenv("NEMATICFLOW_THREADS");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024) {
    throw nf::Error(nf::ErrorKind::InvalidArgument, std::string("NEMATICFLOW_THREADS must be a positive integer, got '") +
                                                        env + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-isothermal nematic liquid crystal flow simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> scenario, out_dir, restart;
  std::optional<double> until;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  auto* run = app.add_subcommand("run", "Run a scenario to t_end");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--scenario", scenario, "Scenario name");
  run->add_option("--until", until, "End time");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--threads", threads, "Worker threads (NEMATICFLOW_THREADS overrides)");
  run->add_option("--restart", restart, "Resume from a checkpoint")->check(CLI::ExistingFile);

  std::string conv_config;
  auto* conv = app.add_subcommand("convergence", "Run the refinement ladder and print observed orders");
  conv->add_option("config", conv_config, "Config file")->required()->check(CLI::ExistingFile);

  std::string ckpt_a, ckpt_b;
  std::optional<std::string> audit_config;
  auto* audit = app.add_subcommand("audit", "Energy and entropy budget between two checkpoints");
  audit->add_option("a", ckpt_a, "Earlier checkpoint")->required();
  audit->add_option("b", ckpt_b, "Later checkpoint")->required();
  audit->add_option("--config", audit_config, "Config supplying the physical parameters")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      nf::RunConfig cfg = nf::load_config(config_path);
      if (scenario) cfg.scenario = *scenario;
      if (until) cfg.t_end = *until;
      if (out_dir) cfg.output_dir = *out_dir;
      if (seed) cfg.seed = *seed;
      if (threads) cfg.threads = *threads;
      cfg.threads = threads_from_env(cfg.threads);
      nf::resolve_scenario(cfg);  // revalidate after command-line overrides
      nf::RunOptions opts;
      if (restart) opts.restart = *restart;
      opts.log = &std::cerr;
      const nf::RunOutcome r = nf::run(cfg, opts);
      if (r.exit_code == 0) {
        std::cout << "completed " << r.steps << " steps, t = " << r.t << "\n";
        if (r.entropy_violations || r.entropy_decreases) {
          std::cout << "entropy audit: " << r.entropy_violations << " residual violations, " << r.entropy_decreases
                    << " decreases\n";
        }
        if (r.stretch_flags) std::cout << "stretching: max|d| reached " << r.max_abs_d << "\n";
      }
      return r.exit_code;
    }
    if (*conv) {
      nf::RunConfig cfg = nf::load_config(conv_config);
      cfg.threads = threads_from_env(cfg.threads);
      return nf::run_convergence(cfg, std::cout);
    }
    if (*audit) {
      std::optional<nf::RunConfig> cfg;
      if (audit_config) cfg = nf::load_config(*audit_config);
      return nf::run_audit(ckpt_a, ckpt_b, cfg, std::cout);
    }
  } catch (const nf::Error& e) {
    std::cerr << e.what() << "\n";
    return nf::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
