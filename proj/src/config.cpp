#include "nematicflow/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "nematicflow/error.hpp"

namespace nematicflow {

std::string to_string(AdvectionScheme s) {
  switch (s) {
    case AdvectionScheme::centered: return "centered";
    case AdvectionScheme::limited_upwind: return "limited_upwind";
    case AdvectionScheme::upwind: return "upwind";
  }
  return "";
}

std::string to_string(DiffusionTreatment d) { return d == DiffusionTreatment::implicit ? "implicit" : "explicit"; }

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::automatic: return "automatic";
    case SolverKind::spectral: return "spectral";
    case SolverKind::pcg: return "pcg";
  }
  return "";
}

void PhysicsOverrides::apply(PhysParams& p) const {
  if (lambda) p.lambda = *lambda;
  if (eta) p.eta = *eta;
  if (gamma) {
    p.gamma = *gamma;
  } else if (lambda || eta) {
    p.gamma = p.lambda / p.eta;
  }
  if (mu_lo) p.mu_lo = *mu_lo;
  if (mu_hi) p.mu_hi = *mu_hi;
  if (k_lo) p.k_lo = *k_lo;
  if (k_hi) p.k_hi = *k_hi;
  const auto coef = [](Coefficient& c, const std::optional<double>& value, const std::optional<double>& slope,
                       const std::optional<double>& ref, double lo, double hi) {
    if (!value && !slope && !ref) return;
    const double v = value ? *value : c.value;
    const double s = slope ? *slope : (c.is_constant() ? 0.0 : c.slope);
    if (s == 0.0) {
      c = Coefficient::constant(v);
    } else {
      c = Coefficient{Coefficient::Kind::saturating, v, s, ref ? *ref : c.theta_ref, lo, hi};
    }
  };
  coef(p.mu, mu, mu_slope, mu_theta_ref, p.mu_lo, p.mu_hi);
  coef(p.k, k, k_slope, k_theta_ref, p.k_lo, p.k_hi);
  coef(p.h, h, h_slope, h_theta_ref, 0.0, p.k_hi);
  if (D0) p.D0 = *D0;
  if (reg_weight) p.reg_weight = *reg_weight;
  if (reg_r) p.reg_r = *reg_r;
  if (theta_max) p.theta_max = *theta_max;
  if (g_direction) p.g.direction = *g_direction;
  if (g_axis) p.g.axis = *g_axis;
  if (g_amplitude) p.g.amplitude = *g_amplitude;
  if (g_wavenumber) p.g.wavenumber = *g_wavenumber;
  if (g_phase) p.g.phase = *g_phase;
  if (stretching) p.stretching = *stretching;
  if (potential) {
    p.potential.kind = *potential == "table" ? PotentialSpec::Kind::table : PotentialSpec::Kind::quartic;
  }
  if (potential_step) p.potential.s_step = *potential_step;
  if (potential_samples) p.potential.samples = *potential_samples;
}

void ControlOverrides::apply(StepControls& c) const {
  if (dt) c.dt = *dt;
  if (cfl_safety) c.cfl_safety = *cfl_safety;
  if (tol_div) c.tol_div = *tol_div;
  if (tol_newton) c.tol_newton = *tol_newton;
  if (blowup_guard) c.blowup_guard = *blowup_guard;
  if (advection) c.advection = *advection;
  if (diffusion) c.diffusion = *diffusion;
  if (time_order) c.time_order = *time_order;
  if (max_iters) c.max_iters = *max_iters;
  if (freeze_temperature) c.freeze_temperature = *freeze_temperature;
  if (solver) c.solver = *solver;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Values are parsed into T or throw std::invalid_argument with a reason.
template <class T>
T parse_value(std::string_view v);

template <>
double parse_value<double>(std::string_view v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("expected a number");
  return x;
}

template <>
int parse_value<int>(std::string_view v) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("expected an integer");
  return x;
}

template <>
std::uint64_t parse_value<std::uint64_t>(std::string_view v) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("expected an unsigned integer");
  return x;
}

template <>
bool parse_value<bool>(std::string_view v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw std::invalid_argument("expected true or false");
}

template <>
std::string parse_value<std::string>(std::string_view v) {
  if (v.empty()) throw std::invalid_argument("expected a non-empty value");
  return std::string(v);
}

template <>
std::vector<double> parse_value<std::vector<double>>(std::string_view v) {
  std::vector<double> out;
  while (true) {
    const std::size_t comma = v.find(',');
    out.push_back(parse_value<double>(trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

template <>
AdvectionScheme parse_value<AdvectionScheme>(std::string_view v) {
  if (v == "centered") return AdvectionScheme::centered;
  if (v == "limited_upwind") return AdvectionScheme::limited_upwind;
  if (v == "upwind") return AdvectionScheme::upwind;
  throw std::invalid_argument("expected centered, limited_upwind or upwind");
}

template <>
DiffusionTreatment parse_value<DiffusionTreatment>(std::string_view v) {
  if (v == "implicit") return DiffusionTreatment::implicit;
  if (v == "explicit") return DiffusionTreatment::explicit_;
  throw std::invalid_argument("expected implicit or explicit");
}

template <>
SolverKind parse_value<SolverKind>(std::string_view v) {
  if (v == "automatic") return SolverKind::automatic;
  if (v == "spectral") return SolverKind::spectral;
  if (v == "pcg") return SolverKind::pcg;
  throw std::invalid_argument("expected automatic, spectral or pcg");
}

std::string format_value(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
std::string format_value(int x) { return std::to_string(x); }
std::string format_value(std::uint64_t x) { return std::to_string(x); }
std::string format_value(bool x) { return x ? "true" : "false"; }
std::string format_value(const std::string& x) { return x; }
std::string format_value(AdvectionScheme x) { return to_string(x); }
std::string format_value(DiffusionTreatment x) { return to_string(x); }
std::string format_value(SolverKind x) { return to_string(x); }
std::string format_value(const std::vector<double>& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + format_value(x[i]);
  return s;
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <class T>
Key optional_key(std::string section, std::string name, std::optional<T>& (*ref)(RunConfig&)) {
  return {std::move(section), std::move(name), [ref](RunConfig& c, std::string_view v) { ref(c) = parse_value<T>(v); },
          [ref](const RunConfig& c) -> std::optional<std::string> {
            const auto& o = ref(const_cast<RunConfig&>(c));
            if (!o) return std::nullopt;
            return format_value(*o);
          }};
}

template <class T>
Key plain_key(std::string section, std::string name, T& (*ref)(RunConfig&)) {
  return {std::move(section), std::move(name), [ref](RunConfig& c, std::string_view v) { ref(c) = parse_value<T>(v); },
          [ref](const RunConfig& c) -> std::optional<std::string> {
            return format_value(ref(const_cast<RunConfig&>(c)));
          }};
}

#define NF_OPT(section, name, T, expr) \
  optional_key<T>(section, name, [](RunConfig& c) -> std::optional<T>& { return expr; })
#define NF_PLAIN(section, name, T, expr) plain_key<T>(section, name, [](RunConfig& c) -> T& { return expr; })

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      NF_PLAIN("run", "scenario", std::string, c.scenario),
      NF_OPT("run", "t_end", double, c.t_end),
      NF_PLAIN("run", "output_dir", std::string, c.output_dir),
      NF_PLAIN("run", "snapshot_every", int, c.snapshot_every),
      NF_PLAIN("run", "checkpoint_every", int, c.checkpoint_every),
      NF_PLAIN("run", "seed", std::uint64_t, c.seed),
      NF_PLAIN("run", "threads", int, c.threads),
      NF_PLAIN("run", "ladder_levels", int, c.ladder_levels),
      NF_PLAIN("run", "ladder_dt_power", double, c.ladder_dt_power),
      NF_PLAIN("grid", "cells", int, c.cells),
      NF_OPT("physics", "lambda", double, c.physics.lambda),
      NF_OPT("physics", "eta", double, c.physics.eta),
      NF_OPT("physics", "gamma", double, c.physics.gamma),
      NF_OPT("physics", "mu", double, c.physics.mu),
      NF_OPT("physics", "mu_slope", double, c.physics.mu_slope),
      NF_OPT("physics", "mu_theta_ref", double, c.physics.mu_theta_ref),
      NF_OPT("physics", "k", double, c.physics.k),
      NF_OPT("physics", "k_slope", double, c.physics.k_slope),
      NF_OPT("physics", "k_theta_ref", double, c.physics.k_theta_ref),
      NF_OPT("physics", "h", double, c.physics.h),
      NF_OPT("physics", "h_slope", double, c.physics.h_slope),
      NF_OPT("physics", "h_theta_ref", double, c.physics.h_theta_ref),
      NF_OPT("physics", "mu_lo", double, c.physics.mu_lo),
      NF_OPT("physics", "mu_hi", double, c.physics.mu_hi),
      NF_OPT("physics", "k_lo", double, c.physics.k_lo),
      NF_OPT("physics", "k_hi", double, c.physics.k_hi),
      NF_OPT("physics", "D0", double, c.physics.D0),
      NF_OPT("physics", "reg_weight", double, c.physics.reg_weight),
      NF_OPT("physics", "reg_r", double, c.physics.reg_r),
      NF_OPT("physics", "theta_max", double, c.physics.theta_max),
      NF_OPT("physics", "g_direction", int, c.physics.g_direction),
      NF_OPT("physics", "g_axis", int, c.physics.g_axis),
      NF_OPT("physics", "g_amplitude", double, c.physics.g_amplitude),
      NF_OPT("physics", "g_wavenumber", double, c.physics.g_wavenumber),
      NF_OPT("physics", "g_phase", double, c.physics.g_phase),
      NF_OPT("physics", "stretching", bool, c.physics.stretching),
      NF_OPT("physics", "potential", std::string, c.physics.potential),
      NF_OPT("physics", "potential_step", double, c.physics.potential_step),
      NF_OPT("physics", "potential_samples", std::vector<double>, c.physics.potential_samples),
      NF_OPT("controls", "dt", double, c.controls.dt),
      NF_OPT("controls", "advection", AdvectionScheme, c.controls.advection),
      NF_OPT("controls", "diffusion", DiffusionTreatment, c.controls.diffusion),
      NF_OPT("controls", "time_order", int, c.controls.time_order),
      NF_OPT("controls", "cfl_safety", double, c.controls.cfl_safety),
      NF_OPT("controls", "tol_div", double, c.controls.tol_div),
      NF_OPT("controls", "tol_newton", double, c.controls.tol_newton),
      NF_OPT("controls", "max_iters", int, c.controls.max_iters),
      NF_OPT("controls", "blowup_guard", double, c.controls.blowup_guard),
      NF_OPT("controls", "freeze_temperature", bool, c.controls.freeze_temperature),
      NF_OPT("controls", "solver", SolverKind, c.controls.solver),
      NF_PLAIN("audit", "tol_entropy_rate", double, c.audit.tol_entropy_rate),
      NF_PLAIN("audit", "power_exponent", double, c.audit.power_exponent),
      NF_PLAIN("audit", "ceiling_u_L2", double, c.audit.ceilings.u_L2),
      NF_PLAIN("audit", "ceiling_theta_L1", double, c.audit.ceilings.theta_L1),
      NF_PLAIN("audit", "ceiling_d_H1", double, c.audit.ceilings.d_H1),
      NF_PLAIN("audit", "ceiling_F_L1", double, c.audit.ceilings.F_L1),
      NF_PLAIN("audit", "ceiling_grad_u_L2_cum", double, c.audit.ceilings.grad_u_L2_cum),
      NF_PLAIN("audit", "ceiling_rotdiss_L2_cum", double, c.audit.ceilings.rotdiss_L2_cum),
  };
  return table;
}

#undef NF_OPT
#undef NF_PLAIN

const std::vector<std::string>& sections() {
  static const std::vector<std::string> s = {"run", "grid", "physics", "controls", "scenario", "audit"};
  return s;
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  }
  return true;
}

void require(bool ok, const char* key, const char* bound) {
  if (!ok) throw HypothesisViolation(key, bound);
}

void validate_run(const RunConfig& c) {
  require(!c.t_end || *c.t_end > 0.0, "t_end", "t_end > 0");
  require(c.cells == 0 || c.cells >= 4, "cells", "at least 4 cells per axis");
  require(c.snapshot_every >= 0, "snapshot_every", "snapshot_every >= 0");
  require(c.checkpoint_every >= 0, "checkpoint_every", "checkpoint_every >= 0");
  require(c.threads >= 1, "threads", "threads >= 1");
  require(c.ladder_levels >= 2, "ladder_levels", "ladder_levels >= 2");
  require(c.ladder_dt_power >= 0.0, "ladder_dt_power", "ladder_dt_power >= 0");
  require(c.audit.tol_entropy_rate > 0.0, "tol_entropy_rate", "tol_entropy_rate > 0");
  require(c.audit.power_exponent > 0.0 && c.audit.power_exponent < 1.0, "power_exponent",
          "power exponent in (0, 1) so that (1 + theta)^e is concave and non-decreasing");
  const auto& k = c.controls;
  require(!k.dt || *k.dt > 0.0, "dt", "dt > 0");
  require(!k.cfl_safety || (*k.cfl_safety > 0.0 && *k.cfl_safety <= 1.0), "cfl_safety", "cfl_safety in (0, 1]");
  require(!k.tol_div || *k.tol_div > 0.0, "tol_div", "tol_div > 0");
  require(!k.tol_newton || *k.tol_newton > 0.0, "tol_newton", "tol_newton > 0");
  require(!k.max_iters || *k.max_iters > 0, "max_iters", "max_iters > 0");
  require(!k.time_order || *k.time_order == 1 || *k.time_order == 2, "time_order", "time_order in {1, 2}");
  require(!k.blowup_guard || *k.blowup_guard > 1.0, "blowup_guard", "blowup_guard > 1");
  const auto& p = c.physics;
  require(!p.potential || *p.potential == "quartic" || *p.potential == "table", "potential",
          "potential in {quartic, table}");
}

}  // namespace

Scenario resolve_scenario(const RunConfig& c) {
  validate_run(c);
  ScenarioOptions o;
  o.cells = c.cells;
  o.seed = c.seed;
  o.knobs = c.knobs;
  if (c.controls.dt) o.dt = *c.controls.dt;
  Scenario s = make_scenario(c.scenario, o);
  if (c.physics != PhysicsOverrides{}) {
    // Rebuild on the overridden parameters so that scenarios which derive
    // forcings from them see the final values; keys the config leaves out
    // keep the scenario's own settings.
    o.physics = s.params;
    c.physics.apply(*o.physics);
    s = make_scenario(c.scenario, o);
  }
  c.controls.apply(s.controls);
  if (c.t_end) s.t_end = *c.t_end;
  s.params.validate();
  check_admissible(s.state, s.params, s.controls.tol_div);
  return s;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (std::find(sections().begin(), sections().end(), section) == sections().end()) {
        throw ParseError(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) throw ParseError(line_no, "key '" + key + "' outside any section");
    if (!valid_identifier(key)) throw ParseError(line_no, "invalid key '" + key + "'");
    if (!seen.insert(section + "." + key).second) {
      throw ParseError(line_no, "duplicate key '" + key + "' in [" + section + "]");
    }
    try {
      if (section == "scenario") {
        c.knobs[key] = parse_value<double>(value);
        continue;
      }
      const auto it = std::find_if(keys().begin(), keys().end(),
                                   [&](const Key& k) { return k.section == section && k.name == key; });
      if (it == keys().end()) throw ParseError(line_no, "unknown key '" + key + "' in [" + section + "]");
      it->set(c, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, "bad value for '" + key + "': " + e.what());
    }
  }
  resolve_scenario(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  for (const std::string& section : sections()) {
    std::string body;
    if (section == "scenario") {
      for (const auto& [k, v] : c.knobs) body += k + " = " + format_value(v) + "\n";
    } else {
      for (const Key& k : keys()) {
        if (k.section != section) continue;
        if (const auto v = k.get(c)) body += k.name + " = " + *v + "\n";
      }
    }
    if (body.empty()) continue;
    if (!out.empty()) out += "\n";
    out += "[" + section + "]\n" + body;
  }
  return out;
}

}  // namespace nematicflow
