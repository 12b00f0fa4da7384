#include "nematicflow/scenarios.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "nematicflow/error.hpp"
#include "stencil.hpp"

namespace nematicflow {

namespace {

constexpr double kPi = std::numbers::pi;

double knob(const ScenarioOptions& o, const std::string& key, double fallback) {
  const auto it = o.knobs.find(key);
  return it == o.knobs.end() ? fallback : it->second;
}

Grid box2(int nx, int ny, double lx, double ly, Boundary bx, Boundary by) {
  const int cells[2] = {nx, ny};
  const double lengths[2] = {lx, ly};
  const Boundary bc[2] = {bx, by};
  return Grid::make(2, cells, lengths, bc);
}

Vec3 cell_point(const Grid& g, std::size_t c) {
  const auto p = g.coords(c);
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < g.ndim; ++a) x[a] = g.cell_center(a, p[a]);
  return x;
}

Vec3 face_point(const Grid& g, int comp, std::size_t c) {
  Vec3 x = cell_point(g, c);
  x[comp] = g.face_position(comp, g.coords(c)[comp]);
  return x;
}

Scenario base(std::string name, const Grid& g, const ScenarioOptions& o, double dt, double t_end) {
  Scenario s;
  s.name = std::move(name);
  s.grid = g;
  s.state = make_state(g);
  if (o.physics) s.params = *o.physics;
  s.controls.dt = o.dt > 0.0 ? o.dt : dt;
  s.t_end = t_end;
  s.seed = o.seed;
  return s;
}

}  // namespace

Scenario scenario_equilibrium(const ScenarioOptions& o) {
  const int n = o.cells > 0 ? o.cells : 16;
  Scenario s = base("equilibrium", box2(n, n, 1.0, 1.0, Boundary::periodic, Boundary::periodic), o, 1e-3, 0.1);
  s.state = make_state(s.grid, knob(o, "theta0", 1.0));
  return s;
}

Scenario scenario_taylor_green(double nu, const ScenarioOptions& o) {
  if (!(nu > 0.0)) throw Error(ErrorKind::InvalidArgument, "taylor_green requires nu > 0");
  const int n = o.cells > 0 ? o.cells : 128;
  Scenario s = base("taylor_green", box2(n, n, 2 * kPi, 2 * kPi, Boundary::periodic, Boundary::periodic), o,
                    5e-3, 1.0);
  // div(μ ε(u)) = (μ/2) Δu for solenoidal u, so the kinematic viscosity is μ/2.
  s.params.mu = Coefficient::constant(2.0 * nu);
  s.params.h = Coefficient::constant(0.0);
  // Without stretching the uniform director is transported unchanged and
  // exerts no force, leaving the Navier-Stokes block on its own.
  s.params.stretching = false;
  const Grid& g = s.grid;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Vec3 xu = face_point(g, 0, c), xv = face_point(g, 1, c);
    s.state.u[0][c] = std::sin(xu[0]) * std::cos(xu[1]);
    s.state.u[1][c] = -std::cos(xv[0]) * std::sin(xv[1]);
  }
  s.exact = ExactSolution{
      [nu](int comp, const Vec3& x, double t) {
        const double decay = std::exp(-2.0 * nu * t);
        if (comp == 0) return std::sin(x[0]) * std::cos(x[1]) * decay;
        if (comp == 1) return -std::cos(x[0]) * std::sin(x[1]) * decay;
        return 0.0;
      },
      nullptr, nullptr};
  return s;
}

Scenario scenario_shear_stretch(const ScenarioOptions& o) {
  const int nx = o.cells > 0 ? o.cells : 32;
  Scenario s = base("shear_stretch", box2(nx, nx / 2, 2.0, 1.0, Boundary::periodic, Boundary::slip_wall), o,
                    1e-3, 10.0);
  const double U = knob(o, "U", 1.0), G = knob(o, "G", 0.0), tilt = knob(o, "tilt", 0.3);
  if (!o.physics || o.knobs.contains("G")) s.params.g = BodyForce{0, 1, G, kPi, 0.0};
  const Grid& g = s.grid;
  for (std::size_t c = 0; c < g.size(); ++c) {
    s.state.u[0][c] = U * std::cos(kPi * face_point(g, 0, c)[1]);
    const double alpha = tilt * std::sin(2.0 * kPi * cell_point(g, c)[0] / g.length(0));
    s.state.d[0][c] = std::sin(alpha);
    s.state.d[1][c] = std::cos(alpha);
    s.state.d[2][c] = 0.0;
  }
  return s;
}

Scenario scenario_mixed(const ScenarioOptions& o) {
  const int n = o.cells > 0 ? o.cells : 16;
  Scenario s = base("mixed", box2(n, n, 2 * kPi, 2 * kPi, Boundary::periodic, Boundary::periodic), o, 1e-3, 0.5);
  const double U = knob(o, "U", 1.0), tilt = knob(o, "tilt", 0.5), bump = knob(o, "bump", 0.5);
  if (!o.physics || o.knobs.contains("h")) s.params.h = Coefficient::constant(knob(o, "h", 0.05));
  const Grid& g = s.grid;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Vec3 x = cell_point(g, c);
    s.state.u[0][c] = U * std::sin(face_point(g, 0, c)[1]);
    const double a = tilt * std::sin(x[0]) * std::cos(x[1]);
    s.state.d[0][c] = std::cos(a);
    s.state.d[1][c] = std::sin(a);
    const double r2 = (x[0] - kPi) * (x[0] - kPi) + (x[1] - kPi) * (x[1] - kPi);
    s.state.theta[c] = 1.0 + bump * std::exp(-r2);
  }
  return s;
}

ManufacturedForcing manufactured_forcing(const Jet& j, const PhysParams& p, const Potential& F) {
  if (!p.mu.is_constant() || !p.k.is_constant() || !p.h.is_constant() || p.reg_weight != 0.0) {
    throw Error(ErrorKind::InvalidArgument, "manufactured forcing needs constant mu, k, h and no regularizer");
  }
  const double mu = p.mu.value, k = p.k.value, h = p.h.value;
  Vec3 lap_d;
  for (int i = 0; i < 3; ++i) lap_d[i] = j.hess_d[i].trace();
  const Vec3 w = lap_d - F.gradient(j.d);
  const Mat3 J = F.jacobian(j.d);
  const double div_d = j.grad_d.trace();
  // (i, m) = ∂_m w_i
  const Mat3 grad_w = j.grad_lap_d - J * j.grad_d;

  ManufacturedForcing out;
  out.u = j.u_t + j.grad_u * j.u - 0.5 * mu * j.lap_u + p.lambda * j.grad_d.transpose() * w;
  if (p.stretching) out.u += p.lambda * (grad_w * j.d + w * div_d);

  out.d = j.d_t + j.grad_d * j.u - p.gamma * w;
  if (p.stretching) out.d -= j.grad_u * j.d;

  // div q with q = -k∇θ - h (d·∇θ) d
  const double d_grad_theta = j.d.dot(j.grad_theta);
  const Vec3 grad_of_dgt = j.grad_d.transpose() * j.grad_theta + j.hess_theta * j.d;
  const double div_q = -k * j.hess_theta.trace() - h * (grad_of_dgt.dot(j.d) + d_grad_theta * div_d);
  const Mat3 eps = strain_rate(j.grad_u);
  const double source = mu * (eps.array() * eps.array()).sum() + p.lambda * p.gamma * w.squaredNorm();
  out.theta = j.theta_t + j.u.dot(j.grad_theta) + div_q - source;
  return out;
}

namespace {

// Caches the last jet per thread: the director forcing asks for three
// components at the same point in a row.
struct ForcingCache {
  std::uint64_t owner = 0;
  Vec3 x = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  double t = std::numeric_limits<double>::quiet_NaN();
  ManufacturedForcing value;
};

std::uint64_t next_forcing_id() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

struct ManufacturedData {
  ManufacturedFields fields;
  PhysParams params;
  Potential F;
  std::uint64_t id = next_forcing_id();

  const ManufacturedForcing& at(const Vec3& x, double t) const {
    thread_local ForcingCache cache;
    if (cache.owner != id || cache.t != t || cache.x != x) {
      cache.value = manufactured_forcing(fields.jet(x, t), params, F);
      cache.owner = id;
      cache.x = x;
      cache.t = t;
    }
    return cache.value;
  }
};

}  // namespace

Scenario scenario_manufactured(bool order_check, const ScenarioOptions& o) {
  const int n = o.cells > 0 ? o.cells : 32;
  const double dt = 0.02 * (16.0 / n) * (16.0 / n);
  Scenario s = base("manufactured", box2(n, n, 2 * kPi, 2 * kPi, Boundary::periodic, Boundary::periodic), o, dt,
                    order_check ? 0.5 : 2.0);
  const auto set = [&](Coefficient& c, const char* key, double fallback) {
    if (!o.physics || o.knobs.contains(key)) c = Coefficient::constant(knob(o, key, fallback));
  };
  set(s.params.mu, "mu", 0.1);
  set(s.params.k, "k", 0.1);
  set(s.params.h, "h", 0.05);
  auto data = std::make_shared<const ManufacturedData>(
      ManufacturedData{make_manufactured_fields(o.seed, knob(o, "amplitude", 1.0)), s.params,
                       Potential(s.params.potential)});
  const ManufacturedFields* f = &data->fields;
  s.exact = ExactSolution{
      [data, f](int comp, const Vec3& x, double t) { return f->u(comp, x, t); },
      [data, f](int comp, const Vec3& x, double t) { return f->d[comp](x, t); },
      [data, f](const Vec3& x, double t) { return f->theta(x, t); }};
  s.forcing.u = [data](int comp, const Vec3& x, double t) { return data->at(x, t).u[comp]; };
  s.forcing.d = [data](int comp, const Vec3& x, double t) { return data->at(x, t).d[comp]; };
  s.forcing.theta = [data](const Vec3& x, double t) { return data->at(x, t).theta; };
  s.state = sample_exact(s.grid, *s.exact, 0.0, s.controls.tol_div);
  return s;
}

std::vector<std::string> scenario_names() {
  return {"equilibrium", "taylor_green", "shear_stretch", "manufactured", "mixed"};
}

Scenario make_scenario(const std::string& name, const ScenarioOptions& o) {
  if (name == "equilibrium") return scenario_equilibrium(o);
  if (name == "taylor_green") return scenario_taylor_green(knob(o, "nu", 0.05), o);
  if (name == "shear_stretch") return scenario_shear_stretch(o);
  if (name == "manufactured") return scenario_manufactured(knob(o, "order_check", 0.0) != 0.0, o);
  if (name == "mixed") return scenario_mixed(o);
  throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + name + "'");
}

void check_admissible(const State& s, const PhysParams& params, double tol_div) {
  const double div = max_abs(divergence(s.u));
  if (!(div <= tol_div)) throw HypothesisViolation("u0", "div u0 = 0 (max |div u0| <= tol_div)");
  for (double v : s.theta.values()) {
    if (!(v > 0.0)) throw HypothesisViolation("theta0", "ess inf theta0 > 0");
  }
  const Potential F(params.potential);
  for (std::size_t c = 0; c < s.d.grid().size(); ++c) {
    if (!std::isfinite(F.value(Vec3(s.d[0][c], s.d[1][c], s.d[2][c])))) {
      throw HypothesisViolation("d0", "F(d0) finite");
    }
  }
  if (!all_finite(s.u) || !all_finite(s.d)) throw HypothesisViolation("state", "finite initial fields");
}

State sample_exact(const Grid& g, const ExactSolution& exact, double t, double tol_div) {
  State s = make_state(g);
  s.t = t;
  if (exact.u) {
    VectorField u = VectorField::face(g);
    for (int a = 0; a < g.ndim; ++a) {
      for (std::size_t c = 0; c < g.size(); ++c) {
        if (!detail::pinned_face(g, a, g.coords(c))) u[a][c] = exact.u(a, face_point(g, a, c), t);
      }
    }
    s.u = project(u, tol_div).velocity;
  }
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Vec3 x = cell_point(g, c);
    if (exact.d) {
      for (int i = 0; i < 3; ++i) s.d[i][c] = exact.d(i, x, t);
    }
    if (exact.theta) s.theta[c] = exact.theta(x, t);
  }
  return s;
}

namespace {

double l2(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (int i = 0; i < a.components(); ++i) {
    for (std::size_t c = 0; c < a[i].size(); ++c) s += (a[i][c] - b[i][c]) * (a[i][c] - b[i][c]);
  }
  return std::sqrt(s * a.grid().cell_volume());
}

double l2(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return std::sqrt(s * a.grid().cell_volume());
}

}  // namespace

FieldErrors field_difference(const State& a, const State& b) {
  require_same_grid(a.u.grid(), b.u.grid());
  return {l2(a.u, b.u), l2(a.d, b.d), l2(a.theta, b.theta)};
}

FieldErrors solution_error(const State& state, const ExactSolution& exact, double t) {
  const Grid& g = state.u.grid();
  State ref = state;
  if (exact.u) {
    for (int a = 0; a < g.ndim; ++a) {
      for (std::size_t c = 0; c < g.size(); ++c) {
        ref.u[a][c] = detail::pinned_face(g, a, g.coords(c)) ? 0.0 : exact.u(a, face_point(g, a, c), t);
      }
    }
  }
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Vec3 x = cell_point(g, c);
    if (exact.d) {
      for (int i = 0; i < 3; ++i) ref.d[i][c] = exact.d(i, x, t);
    }
    if (exact.theta) ref.theta[c] = exact.theta(x, t);
  }
  return field_difference(state, ref);
}

}  // namespace nematicflow
