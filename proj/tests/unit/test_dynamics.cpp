#include <doctest.h>

#include "helpers.hpp"
#include "nematicflow/audit.hpp"
#include "nematicflow/error.hpp"
#include "nematicflow/parallel.hpp"
#include "nematicflow/scenarios.hpp"

using namespace testing;

namespace {

State run_steps(Integrator& I, State s, int n) {
  for (int k = 0; k < n; ++k) s = I.step(s).state;
  return s;
}

double max_state_diff(const State& a, const State& b) {
  double m = 0.0;
  for (int c = 0; c < a.u.components(); ++c) m = std::max(m, max_diff(a.u[c], b.u[c]));
  for (int c = 0; c < 3; ++c) m = std::max(m, max_diff(a.d[c], b.d[c]));
  return std::max(m, max_diff(a.theta.values(), b.theta.values()));
}

}  // namespace

TEST_CASE("make_state defaults") {
  const State s = make_state(grid2(8, 8), 2.0);
  CHECK(s.t == 0.0);
  CHECK(max_abs(s.u) == 0.0);
  CHECK(s.d[0][5] == 1.0);
  CHECK(s.d[1][5] == 0.0);
  CHECK(s.theta[3] == 2.0);
  CHECK(s.u.location() == Location::face);
  CHECK(s.d.components() == 3);
}

TEST_CASE("equilibrium is a fixed point") {
  for (int order : {1, 2}) {
    Scenario sc = scenario_equilibrium();
    sc.controls.time_order = order;
    Integrator I(sc.grid, sc.params, sc.controls);
    const State end = run_steps(I, sc.state, 1000);
    CHECK(max_state_diff(end, sc.state) < 1e-13);
    CHECK(end.t == doctest::Approx(1.0));
  }
}

TEST_CASE("temperature blob relaxes like backward-Euler heat flow") {
  Scenario sc = scenario_equilibrium();
  const Grid& g = sc.grid;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const auto q = g.coords(c);
    const double x = g.cell_center(0, q[0]) - 0.5, y = g.cell_center(1, q[1]) - 0.5;
    sc.state.theta[c] *= 1.0 + 0.01 * std::exp(-40.0 * (x * x + y * y));
  }
  Integrator I(sc.grid, sc.params, sc.controls);
  const double k = sc.params.k(1.0), dt = sc.controls.dt;
  ShiftedLaplacianSolver heat(g, {Location::cell, 0}, {SolverKind::pcg, 1e-15, 10000});
  State s = sc.state;
  const double total0 = integrate(s.theta);
  double spread0 = 0.0;
  for (double v : s.theta.values()) spread0 = std::max(spread0, v - 1.0);
  for (int n = 0; n < 20; ++n) {
    Array expect(g.size(), 1.0);
    heat.solve(1.0, -dt * k, s.theta.values(), expect, ErrorKind::HelmholtzNotConverged);
    s = I.step(s).state;
    CHECK(max_diff(s.theta.values(), expect) < 1e-12);
  }
  CHECK(integrate(s.theta) == doctest::Approx(total0).epsilon(1e-13));
  double spread = 0.0;
  for (double v : s.theta.values()) spread = std::max(spread, v - 1.0);
  CHECK(spread < spread0);
  CHECK(max_abs(s.u) < 1e-14);
}

TEST_CASE("step leaves its input untouched and keeps div u small") {
  ScenarioOptions o;
  o.cells = 16;
  Scenario sc = scenario_mixed(o);
  const State before = sc.state;
  Integrator I(sc.grid, sc.params, sc.controls);
  const StepResult r = I.step(sc.state);
  CHECK(sc.state == before);
  CHECK(max_abs(divergence(r.state.u)) <= sc.controls.tol_div);
  CHECK(r.stage.max_div_u <= sc.controls.tol_div);
  CHECK(r.state.t == doctest::Approx(sc.controls.dt));
  CHECK(r.stage.dt == sc.controls.dt);
}

TEST_CASE("free step wrapper matches the integrator") {
  ScenarioOptions o;
  o.cells = 16;
  Scenario sc = scenario_mixed(o);
  Integrator I(sc.grid, sc.params, sc.controls);
  CHECK(step(sc.state, sc.controls, sc.params) == I.step(sc.state).state);
}

TEST_CASE("slip walls keep the normal velocity zero") {
  Scenario sc = scenario_shear_stretch();
  Integrator I(sc.grid, sc.params, sc.controls);
  const State s = run_steps(I, sc.state, 20);
  for (int i = 0; i < sc.grid.cells[0]; ++i) CHECK(s.u[1][sc.grid.index(i, 0, 0)] == 0.0);
  CHECK(max_abs(divergence(s.u)) <= sc.controls.tol_div);
}

TEST_CASE("taylor-green decay on a coarse grid") {
  ScenarioOptions o;
  o.cells = 32;
  const double nu = 0.1;
  Scenario sc = scenario_taylor_green(nu, o);
  Integrator I(sc.grid, sc.params, sc.controls);
  const double e0 = kinetic_energy(sc.state.u);
  const State s = run_steps(I, sc.state, 40);
  CHECK(kinetic_energy(s.u) / e0 == doctest::Approx(std::exp(-4 * nu * s.t)).epsilon(2e-3));
  CHECK(max_abs(s.theta) > 1.0);  // dissipated energy appears as heat
}

TEST_CASE("first-order split building blocks") {
  ScenarioOptions o;
  o.cells = 16;
  Scenario sc = scenario_mixed(o);
  sc.controls.time_order = 1;
  Integrator I(sc.grid, sc.params, sc.controls);
  const VectorField d1 = I.step_director(sc.state);
  const auto [u1, phi] = I.step_momentum(sc.state, d1);
  CHECK(max_abs(divergence(u1)) <= sc.controls.tol_div);
  const StepResult r = I.step(sc.state);
  for (int c = 0; c < 3; ++c) CHECK(max_diff(r.state.d[c], d1[c]) == 0.0);
  for (int c = 0; c < 2; ++c) CHECK(max_diff(r.state.u[c], u1[c]) == 0.0);
  const ScalarField th = I.step_temperature(sc.state, r.state.u, r.state.d, r.stage.heat_source);
  CHECK(max_diff(th.values(), r.state.theta.values()) < 1e-12);
}

TEST_CASE("stable_dt is positive and shrinks with speed") {
  ScenarioOptions slow, fast;
  slow.knobs["U"] = 0.5;
  fast.knobs["U"] = 4.0;
  Scenario a = scenario_shear_stretch(slow), b = scenario_shear_stretch(fast);
  Integrator Ia(a.grid, a.params, a.controls), Ib(b.grid, b.params, b.controls);
  const double da = Ia.stable_dt(a.state), db = Ib.stable_dt(b.state);
  CHECK(da > 0.0);
  CHECK(db > 0.0);
  CHECK(db < da);
}

TEST_CASE("huge time steps fail loudly") {
  Scenario sc = scenario_shear_stretch();
  sc.controls.dt = 5.0;
  sc.params.g.amplitude = 50.0;
  Integrator I(sc.grid, sc.params, sc.controls);
  State s = sc.state;
  bool failed = false;
  try {
    for (int k = 0; k < 200; ++k) s = I.step(s).state;
  } catch (const Error& e) {
    failed = true;
    CHECK((e.kind() == ErrorKind::FieldBlowup || e.kind() == ErrorKind::TemperaturePositivityLost ||
           e.kind() == ErrorKind::HelmholtzNotConverged || e.kind() == ErrorKind::PoissonNotConverged));
  }
  CHECK(failed);
}

TEST_CASE("nonpositive temperature input is rejected") {
  Scenario sc = scenario_equilibrium();
  sc.state.theta[3] = 0.0;
  Integrator I(sc.grid, sc.params, sc.controls);
  try {
    I.step(sc.state);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::NonpositiveTemperature || e.kind() == ErrorKind::TemperaturePositivityLost));
  }
}

TEST_CASE("results do not depend on the thread count") {
  ScenarioOptions o;
  o.cells = 128;
  Scenario sc = scenario_mixed(o);
  Integrator I(sc.grid, sc.params, sc.controls);
  set_thread_count(1);
  const State a = run_steps(I, sc.state, 3);
  set_thread_count(4);
  const State b = run_steps(I, sc.state, 3);
  set_thread_count(1);
  CHECK(a == b);
}

TEST_CASE("grid material derivative") {
  const Grid g = grid2(8, 8);
  const State s = make_state(g);
  const VectorField zero = VectorField::cell(g, 3);
  CHECK(max_abs(material_director_derivative(s, zero)) == 0.0);
}
