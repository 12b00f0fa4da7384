#include <doctest.h>

#include "helpers.hpp"
#include "nematicflow/audit.hpp"
#include "nematicflow/scenarios.hpp"

using namespace testing;

TEST_CASE("entropy weight family is concave and non-decreasing") {
  for (const HFunction& H : standard_h_family()) {
    CHECK(H.admissible());
    for (double th : {1e-3, 0.5, 1.0, 7.0, 300.0}) {
      const double e = 1e-5 * th;
      CHECK(H.d1(th) == doctest::Approx((H.value(th + e) - H.value(th - e)) / (2 * e)).epsilon(1e-6));
      CHECK(H.d2(th) == doctest::Approx((H.d1(th + e) - H.d1(th - e)) / (2 * e)).epsilon(1e-5));
    }
  }
  CHECK(HFunction::log().value(1.0) == 0.0);
  CHECK(HFunction::power(1.0 / 3.0).value(7.0) == doctest::Approx(2.0));
  CHECK_FALSE(HFunction::power(2.0).admissible());
  const auto fam = standard_h_family();
  CHECK(fam[0].kind == HFunction::Kind::identity);
  CHECK(fam[1].kind == HFunction::Kind::log);
  CHECK(fam[2].kind == HFunction::Kind::power);
}

TEST_CASE("equilibrium audit: no drift, no production") {
  Scenario sc = scenario_equilibrium();
  Integrator I(sc.grid, sc.params, sc.controls);
  Auditor A(sc.grid, sc.params);
  const AuditReport r0 = A.reset(sc.state);
  CHECK(r0.energy_total == doctest::Approx(sc.grid.volume()));
  State s = sc.state;
  for (int k = 0; k < 100; ++k) {
    StepResult r = I.step(s);
    const AuditReport& rep = A.record(s, r.state, r.stage);
    CHECK(std::abs(rep.energy_drift) < 1e-14);
    CHECK(std::abs(rep.entropy_production) < 1e-14);
    for (double v : rep.entropy_residual) CHECK(std::abs(v) < 1e-14);
    CHECK_FALSE(rep.stretch_flag);
    CHECK_FALSE(rep.entropy_violation);
    s = std::move(r.state);
  }
  CHECK(A.last().step == 100);
}

TEST_CASE("energy components add up and the identity residual matches the thermal ledger") {
  ScenarioOptions o;
  o.cells = 16;
  Scenario sc = scenario_mixed(o);
  const Potential F(sc.params.potential);
  Integrator I(sc.grid, sc.params, sc.controls);
  Auditor A(sc.grid, sc.params);
  A.reset(sc.state);
  State s = sc.state;
  for (int k = 0; k < 20; ++k) {
    StepResult r = I.step(s);
    const AuditReport& rep = A.record(s, r.state, r.stage);
    CHECK(rep.energy_total == rep.kinetic + rep.thermal + rep.elastic_gradient + rep.elastic_potential);
    CHECK(rep.lyapunov == doctest::Approx(rep.kinetic + rep.elastic_gradient + rep.elastic_potential));
    const EnergyBudget b = energy_budget(s, r.state, r.stage, sc.params, F);
    CHECK(std::abs(rep.entropy_residual[0] - (b.thermal_delta - b.thermal_sources)) <= 1e-12 * (1 + std::abs(b.thermal_delta)));
    CHECK(b.residual == doctest::Approx(b.delta - b.boundary_flux - b.external_work));
    for (double v : rep.entropy_residual) CHECK(v >= -rep.tol_entropy);
    CHECK_FALSE(rep.entropy_decrease);
    CHECK_FALSE(rep.source_sign_violation);
    CHECK(rep.entropy_production >= 0.0);
    CHECK(std::abs(rep.energy_drift) < 1e-6);
    s = std::move(r.state);
  }
  const EnergyComponents c = energy_components(s, sc.params, F);
  CHECK(c.kinetic == doctest::Approx(kinetic_energy(s.u)));
  CHECK(c.thermal == doctest::Approx(integrate(s.theta)));
  CHECK(entropy_total(s.theta) > 0.0);
}

TEST_CASE("stretch flag and tracker ceilings") {
  Scenario sc = scenario_equilibrium();
  AuditOptions opts;
  opts.ceilings.u_L2 = -1.0;
  Auditor A(sc.grid, sc.params, opts);
  A.reset(sc.state);
  State next = sc.state;
  next.d[0][4] = 1.2;
  StageData stage;
  {
    Integrator I(sc.grid, sc.params, sc.controls);
    stage = I.step(sc.state).stage;
  }
  const AuditReport rep = A.record(sc.state, next, stage);
  CHECK(rep.stretch_flag);
  CHECK(rep.max_abs_d == doctest::Approx(1.2));
  CHECK(rep.tracker_exceeded);
  CHECK(max_director_norm(next.d) == doctest::Approx(1.2));
}

TEST_CASE("a-priori trackers on a known state") {
  const Grid g = grid2(8, 8, Boundary::periodic, 2.0, 1.0);
  State s = make_state(g, 3.0);
  const Potential F{PotentialSpec{}};
  AprioriTrackers acc;
  apriori_trackers(s, nullptr, F, acc);
  CHECK(acc.u_L2 == 0.0);
  CHECK(acc.theta_L1 == doctest::Approx(6.0));
  CHECK(acc.d_H1 == doctest::Approx(std::sqrt(2.0)));
  CHECK(acc.F_L1 == 0.0);
  CHECK(acc.grad_u_L2_cum == 0.0);
}

TEST_CASE("frozen temperature skips the entropy ledger") {
  Scenario sc = scenario_shear_stretch();
  sc.controls.freeze_temperature = true;
  Integrator I(sc.grid, sc.params, sc.controls);
  Auditor A(sc.grid, sc.params);
  A.reset(sc.state);
  const Potential F(sc.params.potential);
  State s = sc.state;
  double prev = lyapunov_functional(s, sc.params, F);
  for (int k = 0; k < 50; ++k) {
    StepResult r = I.step(s);
    const AuditReport& rep = A.record(s, r.state, r.stage);
    CHECK(r.stage.temperature_frozen);
    CHECK(r.state.theta == s.theta);
    for (double v : rep.entropy_residual) CHECK(v == 0.0);
    CHECK(rep.lyapunov <= prev + 1e-10 * prev);
    prev = rep.lyapunov;
    s = std::move(r.state);
  }
}
