#pragma once

#include <memory>
#include <vector>

#include "nematicflow/grid.hpp"
#include "nematicflow/solvers.hpp"

namespace nematicflow::detail {

// Direct solver for (alpha I + beta L) on a constant-coefficient layout via
// FFTW real-to-real transforms.
class TransformSolver {
 public:
  TransformSolver(const Grid& grid, Layout layout);
  ~TransformSolver();
  TransformSolver(const TransformSolver&) = delete;
  TransformSolver& operator=(const TransformSolver&) = delete;

  void solve(double alpha, double beta, const Array& rhs, Array& x);

 private:
  struct Plans;
  Grid grid_;
  Layout layout_;
  std::array<int, 3> extent_{1, 1, 1};  // transform length per axis
  std::array<int, 3> offset_{0, 0, 0};  // first stored entry used per axis
  std::vector<double> eigen_;           // eigenvalue of L per packed entry
  double norm_ = 1.0;
  std::unique_ptr<Plans> plans_;
};

}  // namespace nematicflow::detail
