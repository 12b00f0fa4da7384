#pragma once

#include <memory>

#include "nematicflow/error.hpp"
#include "nematicflow/grid.hpp"

namespace nematicflow {

// automatic picks the transform solver for constant-coefficient problems.
enum class SolverKind { automatic, spectral, pcg };

struct SolverOptions {
  SolverKind kind = SolverKind::automatic;
  double tolerance = 1e-12;  // PCG stop: max-norm residual relative to max|rhs|
  int max_iters = 5000;
};

// Unknowns of an elliptic solve: cell centres, or the faces of one velocity
// component (wall faces excluded).
struct Layout {
  Location location = Location::cell;
  int component = 0;
};

// Solves (alpha I + beta L) x = rhs where L is the stencil of laplacian() for
// the layout. With alpha = 0 the operator is singular for cell layouts and the
// mean-zero solution is returned. The transform path diagonalises L with a
// separable real transform per axis (DFT on periodic axes, DCT-II for
// Neumann cells, DST-I for wall-normal faces).
class ShiftedLaplacianSolver {
 public:
  ShiftedLaplacianSolver(const Grid& grid, Layout layout, SolverOptions options = {});
  ~ShiftedLaplacianSolver();
  ShiftedLaplacianSolver(ShiftedLaplacianSolver&&) noexcept;
  ShiftedLaplacianSolver& operator=(ShiftedLaplacianSolver&&) noexcept;

  // Returns the iteration count (0 for the transform path). abs_tol, when
  // positive, overrides the relative PCG tolerance with an absolute one.
  int solve(double alpha, double beta, const Array& rhs, Array& x, ErrorKind failure,
            double abs_tol = 0.0);
  bool uses_transform() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Applies (alpha I + beta L) for the layout; pinned wall faces map to identity.
void apply_shifted_laplacian(const Grid& grid, Layout layout, double alpha, double beta,
                             const Array& x, Array& y);

// Jacobi-preconditioned CG for (I - dt div(kappa grad)) x = rhs on cells,
// kappa sampled on faces. x holds the initial guess on entry.
int solve_variable_diffusion(const Grid& grid, double dt, const VectorField& kappa,
                             const Array& rhs, Array& x, const SolverOptions& options);

struct Projection {
  VectorField velocity;
  ScalarField potential;  // phi with u_out = u_in - grad(phi), mean zero
  double max_divergence = 0.0;
  int iterations = 0;
};

// Discrete Helmholtz projection onto div_h u = 0.
class Projector {
 public:
  explicit Projector(const Grid& grid, double tol_div = 1e-10, SolverOptions options = {});
  Projection operator()(const VectorField& u);
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  double tol_div_;
  ShiftedLaplacianSolver poisson_;
};

Projection project(const VectorField& u, double tol_div = 1e-10, SolverOptions options = {});

}  // namespace nematicflow
