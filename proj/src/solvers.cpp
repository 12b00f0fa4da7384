#include "nematicflow/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spectral.hpp"
#include "stencil.hpp"

namespace nematicflow {

using detail::cell_at;
using detail::face_value;
using detail::Pos;
using detail::shifted;

namespace {

bool pinned(const Grid& g, Layout layout, const Pos& p) {
  return layout.location == Location::face && detail::pinned_face(g, layout.component, p);
}

double neighbour(const Grid& g, Layout layout, const Array& x, const Pos& q) {
  if (layout.location == Location::face) return face_value(g, x, layout.component, q);
  return x[cell_at(g, q)];
}

// Diagonal of L at p, accounting for reflected and Dirichlet neighbours.
double laplacian_diagonal(const Grid& g, Layout layout, const Pos& p) {
  double d = 0.0;
  for (int a = 0; a < g.ndim; ++a) {
    const double inv_h2 = 1.0 / (g.spacing[a] * g.spacing[a]);
    d -= 2.0 * inv_h2;
    const bool dirichlet = layout.location == Location::face && layout.component == a;
    if (g.bc[a] == Boundary::slip_wall && !dirichlet) {
      if (p[a] == 0) d += inv_h2;
      if (p[a] == g.cells[a] - 1) d += inv_h2;
    }
  }
  return d;
}

bool singular(const Grid& g, Layout layout, double alpha) {
  if (alpha != 0.0) return false;
  return layout.location == Location::cell || g.bc[layout.component] == Boundary::periodic;
}

double max_norm(const Array& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const Array& a, const Array& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void remove_mean(Array& v) {
  double s = 0.0;
  for (double x : v) s += x;
  s /= static_cast<double>(v.size());
  for (double& x : v) x -= s;
}

// Preconditioned CG on an SPD (or semidefinite, with mean-zero data) operator.
int pcg(const std::function<void(const Array&, Array&)>& apply, const Array& diag, const Array& rhs,
        Array& x, double tol, int max_iters, bool null_mean, ErrorKind failure) {
  const std::size_t n = rhs.size();
  Array b = rhs;
  if (null_mean) remove_mean(b);
  if (x.size() != n) x.assign(n, 0.0);
  Array r(n), z(n), p(n), ap(n);
  apply(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  double res = max_norm(r);
  if (res <= tol) return 0;
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  if (null_mean) remove_mean(z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iters; ++it) {
    apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    res = max_norm(r);
    if (res <= tol) {
      if (null_mean) remove_mean(x);
      return it;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    if (null_mean) remove_mean(z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverNotConverged(failure, res, max_iters);
}

}  // namespace

void apply_shifted_laplacian(const Grid& g, Layout layout, double alpha, double beta, const Array& x,
                             Array& y) {
  y.resize(g.size());
  detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
    if (pinned(g, layout, p)) {
      y[c] = x[c];
      return;
    }
    double acc = 0.0;
    for (int a = 0; a < g.ndim; ++a) {
      const double h2 = g.spacing[a] * g.spacing[a];
      acc += (neighbour(g, layout, x, shifted(p, a, 1)) - 2.0 * x[c] +
              neighbour(g, layout, x, shifted(p, a, -1))) /
             h2;
    }
    y[c] = alpha * x[c] + beta * acc;
  });
}

struct ShiftedLaplacianSolver::Impl {
  Grid grid;
  Layout layout;
  SolverOptions options;
  std::unique_ptr<detail::TransformSolver> transform;
};

ShiftedLaplacianSolver::ShiftedLaplacianSolver(const Grid& grid, Layout layout, SolverOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->grid = grid;
  impl_->layout = layout;
  impl_->options = options;
  if (options.kind != SolverKind::pcg) {
    impl_->transform = std::make_unique<detail::TransformSolver>(grid, layout);
  }
}

ShiftedLaplacianSolver::~ShiftedLaplacianSolver() = default;
ShiftedLaplacianSolver::ShiftedLaplacianSolver(ShiftedLaplacianSolver&&) noexcept = default;
ShiftedLaplacianSolver& ShiftedLaplacianSolver::operator=(ShiftedLaplacianSolver&&) noexcept = default;

bool ShiftedLaplacianSolver::uses_transform() const { return impl_->transform != nullptr; }

int ShiftedLaplacianSolver::solve(double alpha, double beta, const Array& rhs, Array& x,
                                  ErrorKind failure, double abs_tol) {
  const Grid& g = impl_->grid;
  const Layout layout = impl_->layout;
  if (impl_->transform) {
    impl_->transform->solve(alpha, beta, rhs, x);
    return 0;
  }
  // Flip sign so the operator is positive (semi)definite.
  const double s = beta > 0.0 ? -1.0 : 1.0;
  const bool null_mean = singular(g, layout, alpha);
  Array b(rhs);
  Array diag(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Pos p = g.coords(c);
    if (pinned(g, layout, p)) {
      b[c] = 0.0;
      diag[c] = 1.0;
    } else {
      b[c] *= s;
      diag[c] = s * (alpha + beta * laplacian_diagonal(g, layout, p));
    }
  }
  const double tol = abs_tol > 0.0 ? abs_tol : impl_->options.tolerance * std::max(1.0, max_norm(b));
  auto apply = [&](const Array& in, Array& out) {
    apply_shifted_laplacian(g, layout, s * alpha, s * beta, in, out);
    for (std::size_t c = 0; c < out.size(); ++c) {
      if (pinned(g, layout, g.coords(c))) out[c] = in[c];
    }
  };
  if (x.size() != g.size()) x.assign(g.size(), 0.0);
  return pcg(apply, diag, b, x, tol, impl_->options.max_iters, null_mean, failure);
}

int solve_variable_diffusion(const Grid& g, double dt, const VectorField& kappa, const Array& rhs,
                             Array& x, const SolverOptions& options) {
  auto apply = [&](const Array& in, Array& out) {
    out.resize(g.size());
    detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
      double acc = 0.0;
      for (int a = 0; a < g.ndim; ++a) {
        const Pos up = shifted(p, a, 1);
        const double k_hi = face_value(g, kappa[a], a, up);
        const double k_lo = face_value(g, kappa[a], a, p);
        const double h2 = g.spacing[a] * g.spacing[a];
        acc += (k_hi * (in[cell_at(g, up)] - in[c]) - k_lo * (in[c] - in[cell_at(g, shifted(p, a, -1))])) / h2;
      }
      out[c] = in[c] - dt * acc;
    });
  };
  Array diag(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Pos p = g.coords(c);
    double acc = 0.0;
    for (int a = 0; a < g.ndim; ++a) {
      const double h2 = g.spacing[a] * g.spacing[a];
      acc += (face_value(g, kappa[a], a, shifted(p, a, 1)) + face_value(g, kappa[a], a, p)) / h2;
    }
    diag[c] = 1.0 + dt * acc;
  }
  const double tol = options.tolerance * std::max(1.0, max_norm(rhs));
  return pcg(apply, diag, rhs, x, tol, options.max_iters, false, ErrorKind::HelmholtzNotConverged);
}

Projector::Projector(const Grid& grid, double tol_div, SolverOptions options)
    : grid_(grid), tol_div_(tol_div), poisson_(grid, Layout{Location::cell, 0}, options) {}

Projection Projector::operator()(const VectorField& u) {
  require_same_grid(grid_, u.grid());
  Projection out;
  const ScalarField div = divergence(u);
  Array phi(grid_.size(), 0.0);
  out.iterations = poisson_.solve(0.0, 1.0, div.values(), phi, ErrorKind::PoissonNotConverged, 0.5 * tol_div_);
  out.potential = ScalarField(grid_);
  out.potential.values() = std::move(phi);
  out.velocity = u;
  const VectorField grad = gradient(out.potential);
  for (int a = 0; a < grid_.ndim; ++a) {
    for (std::size_t c = 0; c < grid_.size(); ++c) out.velocity[a][c] -= grad[a][c];
  }
  out.max_divergence = max_abs(divergence(out.velocity));
  if (out.max_divergence > tol_div_) {
    throw SolverNotConverged(ErrorKind::PoissonNotConverged, out.max_divergence, out.iterations);
  }
  return out;
}

Projection project(const VectorField& u, double tol_div, SolverOptions options) {
  Projector p(u.grid(), tol_div, options);
  return p(u);
}

}  // namespace nematicflow
