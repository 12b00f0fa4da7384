#include <doctest.h>

#include "helpers.hpp"
#include "nematicflow/solvers.hpp"

using namespace testing;

namespace {

double residual(const Grid& g, Layout layout, double alpha, double beta, const Array& x, const Array& rhs) {
  Array y(x.size());
  apply_shifted_laplacian(g, layout, alpha, beta, x, y);
  return max_diff(y, rhs);
}

}  // namespace

TEST_CASE("shifted laplacian solves agree between transform and pcg") {
  std::mt19937_64 rng(21);
  for (const Grid& g : {grid2(16, 12), grid2(12, 16, Boundary::slip_wall), grid3(8, Boundary::slip_wall)}) {
    std::vector<Layout> layouts = {{Location::cell, 0}};
    for (int a = 0; a < g.ndim; ++a) layouts.push_back({Location::face, a});
    for (const Layout& layout : layouts) {
      Array rhs = random_scalar(g, rng).values();
      if (layout.location == Location::face && g.is_wall(layout.component)) {
        // The wall entries are identity rows; keep them consistent with a zero solution.
        for (std::size_t c = 0; c < g.size(); ++c) {
          if (g.coords(c)[layout.component] == 0) rhs[c] = 0.0;
        }
      }
      ShiftedLaplacianSolver fast(g, layout, {SolverKind::spectral, 1e-13, 5000});
      ShiftedLaplacianSolver slow(g, layout, {SolverKind::pcg, 1e-13, 5000});
      CHECK(fast.uses_transform());
      CHECK_FALSE(slow.uses_transform());
      Array x1(g.size(), 0.0), x2(g.size(), 0.0);
      fast.solve(1.0, -0.01, rhs, x1, ErrorKind::HelmholtzNotConverged);
      slow.solve(1.0, -0.01, rhs, x2, ErrorKind::HelmholtzNotConverged);
      CHECK(residual(g, layout, 1.0, -0.01, x1, rhs) < 1e-10);
      CHECK(max_diff(x1, x2) < 1e-10);
    }
  }
}

TEST_CASE("singular poisson returns the mean-zero solution") {
  std::mt19937_64 rng(4);
  const Grid g = grid2(16, 16, Boundary::slip_wall);
  Array rhs = random_scalar(g, rng).values();
  double mean = 0.0;
  for (double v : rhs) mean += v;
  mean /= static_cast<double>(rhs.size());
  for (double& v : rhs) v -= mean;
  ShiftedLaplacianSolver s(g, {Location::cell, 0});
  Array x(g.size(), 0.0);
  s.solve(0.0, 1.0, rhs, x, ErrorKind::PoissonNotConverged);
  CHECK(residual(g, {Location::cell, 0}, 0.0, 1.0, x, rhs) < 1e-9);
  double xm = 0.0;
  for (double v : x) xm += v;
  CHECK(std::abs(xm) / static_cast<double>(x.size()) < 1e-12);
}

TEST_CASE("pcg reports non-convergence") {
  std::mt19937_64 rng(8);
  const Grid g = grid2(32, 32);
  const Array rhs = random_scalar(g, rng).values();
  ShiftedLaplacianSolver s(g, {Location::cell, 0}, {SolverKind::pcg, 1e-14, 2});
  Array x(g.size(), 0.0);
  try {
    s.solve(1.0, -1.0, rhs, x, ErrorKind::HelmholtzNotConverged);
    FAIL("expected SolverNotConverged");
  } catch (const SolverNotConverged& e) {
    CHECK(e.kind() == ErrorKind::HelmholtzNotConverged);
    CHECK(e.iterations() == 2);
  }
}

TEST_CASE("variable diffusion with constant kappa matches the transform solve") {
  std::mt19937_64 rng(17);
  const Grid g = grid2(16, 16, Boundary::slip_wall);
  const Array rhs = random_scalar(g, rng, 0.5, 1.5).values();
  const double dt = 0.01, k = 0.3;
  VectorField kappa = VectorField::face(g);
  for (int a = 0; a < 2; ++a) std::fill(kappa[a].begin(), kappa[a].end(), k);
  Array x = rhs;
  solve_variable_diffusion(g, dt, kappa, rhs, x, {SolverKind::pcg, 1e-14, 5000});
  ShiftedLaplacianSolver s(g, {Location::cell, 0});
  Array y(g.size(), 0.0);
  s.solve(1.0, -dt * k, rhs, y, ErrorKind::HelmholtzNotConverged);
  CHECK(max_diff(x, y) < 1e-11);
}

TEST_CASE("projection removes divergence and is idempotent") {
  std::mt19937_64 rng(31);
  for (const Grid& g : {grid2(16, 16), grid2(16, 16, Boundary::slip_wall), grid3(8, Boundary::slip_wall)}) {
    const VectorField u = random_faces(g, rng);
    const Projection p = project(u);
    CHECK(p.max_divergence <= 1e-10);
    CHECK(max_abs(divergence(p.velocity)) <= 1e-10);
    const Projection q = project(p.velocity);
    for (int c = 0; c < g.ndim; ++c) CHECK(max_diff(q.velocity[c], p.velocity[c]) < 1e-10);
    // The removed part is orthogonal to the solenoidal result.
    VectorField removed = u;
    for (int c = 0; c < g.ndim; ++c) {
      for (std::size_t i = 0; i < g.size(); ++i) removed[c][i] -= p.velocity[c][i];
    }
    CHECK(std::abs(inner(removed, p.velocity)) < 1e-10);
    CHECK(inner(p.velocity, p.velocity) <= inner(u, u));
  }
}
