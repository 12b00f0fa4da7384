#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace nematicflow::detail {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct TransformSolver::Plans {
  double* in = nullptr;
  double* out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(in);
    fftw_free(out);
  }
};

TransformSolver::TransformSolver(const Grid& grid, Layout layout)
    : grid_(grid), layout_(layout), plans_(std::make_unique<Plans>()) {
  std::array<std::vector<double>, 3> lam;
  std::array<fftw_r2r_kind, 3> fwd{FFTW_R2HC, FFTW_R2HC, FFTW_R2HC};
  std::array<fftw_r2r_kind, 3> bwd{FFTW_HC2R, FFTW_HC2R, FFTW_HC2R};
  norm_ = 1.0;
  for (int a = 0; a < 3; ++a) {
    const int n = grid.cells[a];
    const double h = grid.spacing[a];
    const double s = 4.0 / (h * h);
    const bool active = a < grid.ndim;
    if (!active || grid.bc[a] == Boundary::periodic) {
      extent_[a] = n;
      for (int j = 0; j < n; ++j) {
        const int freq = j <= n / 2 ? j : n - j;
        const double sn = std::sin(std::numbers::pi * freq / n);
        lam[a].push_back(active ? -s * sn * sn : 0.0);
      }
      norm_ *= n;
    } else if (layout.location == Location::face && layout.component == a) {
      extent_[a] = n - 1;
      offset_[a] = 1;
      fwd[a] = FFTW_RODFT00;
      bwd[a] = FFTW_RODFT00;
      for (int j = 0; j < n - 1; ++j) {
        const double sn = std::sin(std::numbers::pi * (j + 1) / (2.0 * n));
        lam[a].push_back(-s * sn * sn);
      }
      norm_ *= 2.0 * n;
    } else {
      extent_[a] = n;
      fwd[a] = FFTW_REDFT10;
      bwd[a] = FFTW_REDFT01;
      for (int j = 0; j < n; ++j) {
        const double sn = std::sin(std::numbers::pi * j / (2.0 * n));
        lam[a].push_back(-s * sn * sn);
      }
      norm_ *= 2.0 * n;
    }
  }
  const std::size_t total = static_cast<std::size_t>(extent_[0]) * extent_[1] * extent_[2];
  eigen_.resize(total);
  for (int k = 0; k < extent_[2]; ++k) {
    for (int j = 0; j < extent_[1]; ++j) {
      for (int i = 0; i < extent_[0]; ++i) {
        eigen_[i + static_cast<std::size_t>(extent_[0]) * (j + static_cast<std::size_t>(extent_[1]) * k)] =
            lam[0][i] + lam[1][j] + lam[2][k];
      }
    }
  }

  // FFTW is row-major with the last index fastest; our x axis is fastest.
  const int rank = grid.ndim;
  std::array<int, 3> dims{};
  std::array<fftw_r2r_kind, 3> kf{}, kb{};
  for (int r = 0; r < rank; ++r) {
    const int a = rank - 1 - r;
    dims[r] = extent_[a];
    kf[r] = fwd[a];
    kb[r] = bwd[a];
  }
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->in = fftw_alloc_real(total);
  plans_->out = fftw_alloc_real(total);
  plans_->forward = fftw_plan_r2r(rank, dims.data(), plans_->in, plans_->out, kf.data(), FFTW_ESTIMATE);
  plans_->backward = fftw_plan_r2r(rank, dims.data(), plans_->out, plans_->in, kb.data(), FFTW_ESTIMATE);
}

TransformSolver::~TransformSolver() = default;

void TransformSolver::solve(double alpha, double beta, const Array& rhs, Array& x) {
  const Grid& g = grid_;
  const std::size_t total = eigen_.size();
  double* in = plans_->in;
  double* out = plans_->out;
  auto packed = [&](int i, int j, int k) {
    return static_cast<std::size_t>(i - offset_[0]) +
           static_cast<std::size_t>(extent_[0]) *
               (static_cast<std::size_t>(j - offset_[1]) +
                static_cast<std::size_t>(extent_[1]) * (k - offset_[2]));
  };
  for (int k = offset_[2]; k < g.cells[2]; ++k) {
    for (int j = offset_[1]; j < g.cells[1]; ++j) {
      for (int i = offset_[0]; i < g.cells[0]; ++i) in[packed(i, j, k)] = rhs[g.index(i, j, k)];
    }
  }
  fftw_execute(plans_->forward);
  double lam_max = 0.0;
  for (double l : eigen_) lam_max = std::max(lam_max, std::abs(l));
  const double floor = 1e-13 * (std::abs(alpha) + std::abs(beta) * lam_max);
  for (std::size_t m = 0; m < total; ++m) {
    const double c = alpha + beta * eigen_[m];
    out[m] = std::abs(c) <= floor ? 0.0 : out[m] / (c * norm_);
  }
  fftw_execute(plans_->backward);
  x.assign(g.size(), 0.0);
  for (int k = offset_[2]; k < g.cells[2]; ++k) {
    for (int j = offset_[1]; j < g.cells[1]; ++j) {
      for (int i = offset_[0]; i < g.cells[0]; ++i) x[g.index(i, j, k)] = in[packed(i, j, k)];
    }
  }
}

}  // namespace nematicflow::detail
