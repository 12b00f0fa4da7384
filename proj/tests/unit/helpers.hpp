#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "nematicflow/grid.hpp"

namespace testing {

using namespace nematicflow;

inline Grid grid2(int nx, int ny, Boundary by = Boundary::periodic, double lx = 1.0, double ly = 1.0) {
  const int cells[2] = {nx, ny};
  const double lengths[2] = {lx, ly};
  const Boundary bc[2] = {Boundary::periodic, by};
  return Grid::make(2, cells, lengths, bc);
}

inline Grid grid3(int n, Boundary bz = Boundary::periodic) {
  const int cells[3] = {n, n, n};
  const double lengths[3] = {1.0, 1.0, 1.0};
  const Boundary bc[3] = {Boundary::periodic, Boundary::periodic, bz};
  return Grid::make(3, cells, lengths, bc);
}

inline ScalarField random_scalar(const Grid& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  ScalarField f(g);
  for (auto& v : f.values()) v = U(rng);
  return f;
}

inline VectorField random_faces(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  VectorField v = VectorField::face(g);
  for (int c = 0; c < v.components(); ++c) {
    for (auto& x : v[c]) x = U(rng);
  }
  zero_wall_faces(v);
  return v;
}

inline VectorField random_cells(const Grid& g, int comps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  VectorField v = VectorField::cell(g, comps);
  for (int c = 0; c < comps; ++c) {
    for (auto& x : v[c]) x = U(rng);
  }
  return v;
}

inline double max_diff(const Array& a, const Array& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing
