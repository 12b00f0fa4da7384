#include <doctest.h>

#include "helpers.hpp"
#include "nematicflow/error.hpp"

using namespace testing;

TEST_CASE("grid construction and indexing") {
  const Grid g = grid2(8, 6, Boundary::slip_wall, 2.0, 3.0);
  CHECK(g.spacing[0] == doctest::Approx(0.25));
  CHECK(g.spacing[1] == doctest::Approx(0.5));
  CHECK(g.size() == 48);
  CHECK(g.volume() == doctest::Approx(6.0));
  CHECK(g.is_wall(1));
  CHECK_FALSE(g.is_wall(0));
  CHECK_FALSE(g.fully_periodic());
  for (std::size_t c = 0; c < g.size(); ++c) {
    const auto q = g.coords(c);
    CHECK(g.index(q[0], q[1], q[2]) == c);
  }
  CHECK(g.index(1, 0, 0) == 1);  // x fastest
  CHECK(g.index(0, 1, 0) == 8);

  const int few[2] = {3, 8};
  const double len[2] = {1.0, 1.0};
  const Boundary bc[2] = {Boundary::periodic, Boundary::periodic};
  CHECK_THROWS_AS(Grid::make(2, few, len, bc), Error);
  const int ok[2] = {8, 8};
  const double bad[2] = {1.0, -1.0};
  CHECK_THROWS_AS(Grid::make(2, ok, bad, bc), Error);
  CHECK_THROWS_AS(Grid::make(4, ok, len, bc), Error);
}

TEST_CASE("fields on different grids are rejected") {
  try {
    require_same_grid(grid2(8, 8), grid2(8, 16));
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
}

TEST_CASE("divergence is the negative adjoint of gradient") {
  std::mt19937_64 rng(7);
  for (const Grid& g : {grid2(8, 12), grid2(12, 8, Boundary::slip_wall), grid3(6), grid3(6, Boundary::slip_wall)}) {
    const ScalarField f = random_scalar(g, rng);
    const VectorField v = random_faces(g, rng);
    const double lhs = inner(gradient(f), v);
    const double rhs = -inner(f, divergence(v));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("gradient vanishes on wall faces") {
  std::mt19937_64 rng(3);
  const Grid g = grid2(8, 8, Boundary::slip_wall);
  const VectorField gr = gradient(random_scalar(g, rng));
  for (int i = 0; i < 8; ++i) CHECK(gr[1][g.index(i, 0, 0)] == 0.0);
}

TEST_CASE("cell laplacian equals div grad and matches the discrete eigenvalue") {
  std::mt19937_64 rng(11);
  const Grid g = grid2(16, 16, Boundary::slip_wall);
  const ScalarField f = random_scalar(g, rng);
  CHECK(max_diff(laplacian(f).values(), divergence(gradient(f)).values()) < 1e-10);

  // Periodic plane wave: eigenvalue -(4/h^2) sin^2(pi m h / L).
  const Grid p = grid2(32, 32);
  const int m = 3;
  ScalarField w(p);
  for (std::size_t c = 0; c < p.size(); ++c) {
    w[c] = std::cos(2 * std::numbers::pi * m * p.cell_center(0, p.coords(c)[0]));
  }
  const double h = p.spacing[0];
  const double s = std::sin(std::numbers::pi * m * h);
  const double lam = -4.0 / (h * h) * s * s;
  const ScalarField lw = laplacian(w);
  for (std::size_t c = 0; c < p.size(); ++c) CHECK(lw[c] == doctest::Approx(lam * w[c]).epsilon(1e-10));
}

TEST_CASE("face laplacian is symmetric") {
  std::mt19937_64 rng(5);
  for (const Grid& g : {grid2(8, 10), grid2(10, 8, Boundary::slip_wall), grid3(6, Boundary::slip_wall)}) {
    const VectorField a = random_faces(g, rng), b = random_faces(g, rng);
    CHECK(inner(laplacian(a), b) == doctest::Approx(inner(a, laplacian(b))).epsilon(1e-12));
    // Negative semidefinite.
    CHECK(inner(laplacian(a), a) <= 0.0);
  }
}

TEST_CASE("conservative advection preserves the integral") {
  std::mt19937_64 rng(9);
  for (const Grid& g : {grid2(12, 12), grid2(12, 12, Boundary::slip_wall)}) {
    const ScalarField w = random_scalar(g, rng, 0.5, 2.0);
    const VectorField u = random_faces(g, rng);
    for (auto scheme : {AdvectionScheme::centered, AdvectionScheme::upwind, AdvectionScheme::limited_upwind}) {
      CHECK(std::abs(integrate(advect_conservative(w, u, scheme))) < 1e-12);
    }
  }
}

TEST_CASE("advection of a constant vanishes") {
  std::mt19937_64 rng(13);
  const Grid g = grid2(10, 10, Boundary::slip_wall);
  const ScalarField one(g, 2.5);
  const VectorField u = random_faces(g, rng);
  for (auto scheme : {AdvectionScheme::centered, AdvectionScheme::upwind, AdvectionScheme::limited_upwind}) {
    CHECK(max_abs(advect(one, u, scheme)) < 1e-13);
  }
}

TEST_CASE("velocity gradient converges at second order") {
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const Grid g = grid2(n, n);
    VectorField u = VectorField::face(g);
    for (std::size_t c = 0; c < g.size(); ++c) {
      const double y = g.cell_center(1, g.coords(c)[1]);
      u[0][c] = std::sin(2 * std::numbers::pi * y);
    }
    const TensorField G = velocity_gradient(u);
    double err = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) {
      const double y = g.cell_center(1, g.coords(c)[1]);
      err = std::max(err, std::abs(G(0, 1)[c] - 2 * std::numbers::pi * std::cos(2 * std::numbers::pi * y)));
      CHECK(std::abs(G(0, 0)[c]) < 1e-12);
    }
    if (prev > 0.0) CHECK(prev / err > 3.5);
    prev = err;
  }
}

TEST_CASE("quadrature weights") {
  const Grid g = grid2(8, 4, Boundary::periodic, 2.0, 0.5);
  CHECK(integrate(ScalarField(g, 3.0)) == doctest::Approx(3.0 * 1.0));
  VectorField one = VectorField::cell(g, 3);
  for (int c = 0; c < 3; ++c) std::fill(one[c].begin(), one[c].end(), 1.0);
  CHECK(inner(one, one) == doctest::Approx(3.0));
}
