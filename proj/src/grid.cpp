#include "nematicflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nematicflow/error.hpp"
#include "stencil.hpp"

namespace nematicflow {

using detail::cell_at;
using detail::face_at;
using detail::face_value;
using detail::Pos;
using detail::shifted;

Grid Grid::make(int ndim, std::span<const int> cells, std::span<const double> lengths,
                std::span<const Boundary> bc) {
  if (ndim != 2 && ndim != 3) {
    throw Error(ErrorKind::InvalidArgument, "ndim must be 2 or 3, got " + std::to_string(ndim));
  }
  if (cells.size() < static_cast<std::size_t>(ndim) ||
      lengths.size() < static_cast<std::size_t>(ndim) ||
      bc.size() < static_cast<std::size_t>(ndim)) {
    throw Error(ErrorKind::InvalidArgument, "grid description shorter than ndim");
  }
  Grid g;
  g.ndim = ndim;
  for (int a = 0; a < ndim; ++a) {
    if (cells[a] < 4) {
      throw Error(ErrorKind::InvalidArgument,
                  "axis " + std::to_string(a) + " needs at least 4 cells");
    }
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw Error(ErrorKind::InvalidArgument,
                  "axis " + std::to_string(a) + " length must be positive");
    }
    g.cells[a] = cells[a];
    g.spacing[a] = lengths[a] / cells[a];
    g.bc[a] = bc[a];
  }
  return g;
}

bool Grid::fully_periodic() const {
  for (int a = 0; a < ndim; ++a) {
    if (bc[a] != Boundary::periodic) return false;
  }
  return true;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error(ErrorKind::GridMismatch, "fields live on different grids");
}

ScalarField::ScalarField(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

VectorField::VectorField(const Grid& grid, Location location, int components, double value)
    : grid_(grid), location_(location), comps_(components, Array(grid.size(), value)) {
  if (location == Location::face) {
    if (components != grid.ndim) {
      throw Error(ErrorKind::InvalidArgument, "face fields carry exactly ndim components");
    }
    zero_wall_faces(*this);
  }
}

TensorField::TensorField(const Grid& grid, int rows, int cols)
    : grid_(grid), rows_(rows), cols_(cols), comps_(rows * cols, Array(grid.size(), 0.0)) {}

namespace {

void require_face(const VectorField& v) {
  if (v.location() != Location::face) {
    throw Error(ErrorKind::InvalidArgument, "expected a face-staggered velocity field");
  }
}

void require_cell(const VectorField& v) {
  if (v.location() != Location::cell) {
    throw Error(ErrorKind::InvalidArgument, "expected a cell-centred vector field");
  }
}

Array scalar_laplacian(const Grid& g, const Array& f) {
  Array out(g.size());
  detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
    double acc = 0.0;
    for (int a = 0; a < g.ndim; ++a) {
      const double h2 = g.spacing[a] * g.spacing[a];
      acc += (f[cell_at(g, shifted(p, a, 1))] - 2.0 * f[c] + f[cell_at(g, shifted(p, a, -1))]) / h2;
    }
    out[c] = acc;
  });
  return out;
}

Array face_laplacian(const Grid& g, const Array& u, int comp) {
  Array out(g.size(), 0.0);
  detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
    if (detail::pinned_face(g, comp, p)) return;
    double acc = 0.0;
    for (int b = 0; b < g.ndim; ++b) {
      const double h2 = g.spacing[b] * g.spacing[b];
      acc += (face_value(g, u, comp, shifted(p, b, 1)) - 2.0 * u[c] +
              face_value(g, u, comp, shifted(p, b, -1))) /
             h2;
    }
    out[c] = acc;
  });
  return out;
}

Array advective(const Grid& g, const Array& w, const VectorField& u, AdvectionScheme scheme) {
  Array out(g.size());
  detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
    double acc = 0.0;
    for (int b = 0; b < g.ndim; ++b) {
      const double ulo = face_value(g, u[b], b, p);
      const double uhi = face_value(g, u[b], b, shifted(p, b, 1));
      const double wlo = w[cell_at(g, shifted(p, b, -1))];
      const double whi = w[cell_at(g, shifted(p, b, 1))];
      switch (scheme) {
        case AdvectionScheme::centered:
          acc += (uhi * (whi - w[c]) + ulo * (w[c] - wlo)) / (2.0 * g.spacing[b]);
          break;
        case AdvectionScheme::upwind:
          acc += (std::max(ulo, 0.0) * (w[c] - wlo) + std::min(uhi, 0.0) * (whi - w[c])) /
                 g.spacing[b];
          break;
        case AdvectionScheme::limited_upwind: {
          const double fhi = uhi * detail::face_state(g, w, shifted(p, b, 1), b, uhi, scheme);
          const double flo = ulo * detail::face_state(g, w, p, b, ulo, scheme);
          acc += (fhi - flo - w[c] * (uhi - ulo)) / g.spacing[b];
          break;
        }
      }
    }
    out[c] = acc;
  });
  return out;
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out = VectorField::face(g);
  for (int a = 0; a < g.ndim; ++a) {
    Array& ga = out[a];
    const double inv_h = 1.0 / g.spacing[a];
    detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
      ga[c] = detail::pinned_face(g, a, p) ? 0.0 : (f[c] - f[cell_at(g, shifted(p, a, -1))]) * inv_h;
    });
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  require_face(v);
  const Grid& g = v.grid();
  ScalarField out(g);
  detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
    double acc = 0.0;
    for (int a = 0; a < g.ndim; ++a) {
      acc += (face_value(g, v[a], a, shifted(p, a, 1)) - face_value(g, v[a], a, p)) / g.spacing[a];
    }
    out[c] = acc;
  });
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField out(f.grid());
  out.values() = scalar_laplacian(f.grid(), f.values());
  return out;
}

VectorField laplacian(const VectorField& v) {
  const Grid& g = v.grid();
  VectorField out(g, v.location(), v.components());
  for (int c = 0; c < v.components(); ++c) {
    out[c] = v.location() == Location::face ? face_laplacian(g, v[c], c) : scalar_laplacian(g, v[c]);
  }
  return out;
}

ScalarField advect(const ScalarField& w, const VectorField& u, AdvectionScheme scheme) {
  require_same_grid(w.grid(), u.grid());
  require_face(u);
  ScalarField out(w.grid());
  out.values() = advective(w.grid(), w.values(), u, scheme);
  return out;
}

VectorField advect(const VectorField& w, const VectorField& u, AdvectionScheme scheme) {
  require_same_grid(w.grid(), u.grid());
  require_face(u);
  require_cell(w);
  VectorField out(w.grid(), Location::cell, w.components());
  for (int c = 0; c < w.components(); ++c) out[c] = advective(w.grid(), w[c], u, scheme);
  return out;
}

ScalarField advect_conservative(const ScalarField& w, const VectorField& u, AdvectionScheme scheme) {
  require_same_grid(w.grid(), u.grid());
  require_face(u);
  const Grid& g = w.grid();
  // Face fluxes first so that each face value is computed once and shared.
  std::vector<Array> flux(g.ndim, Array(g.size(), 0.0));
  for (int b = 0; b < g.ndim; ++b) {
    detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
      const double v = face_value(g, u[b], b, p);
      flux[b][c] = v == 0.0 ? 0.0 : v * detail::face_state(g, w.values(), p, b, v, scheme);
    });
  }
  ScalarField out(g);
  detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
    double acc = 0.0;
    for (int b = 0; b < g.ndim; ++b) {
      acc += (face_value(g, flux[b], b, shifted(p, b, 1)) - flux[b][c]) / g.spacing[b];
    }
    out[c] = acc;
  });
  return out;
}

TensorField velocity_gradient(const VectorField& u) {
  require_face(u);
  const Grid& g = u.grid();
  TensorField out(g, g.ndim, g.ndim);
  detail::for_each_cell(g, [&](std::size_t c, const Pos& p) {
    detail::visit_velocity_gradient(g, p, [&](int i, int j, const detail::FaceRef& r, double w) {
      out(i, j)[c] += w * face_value(u[i], r);
    });
  });
  return out;
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const VectorField& v) {
  double m = 0.0;
  for (int c = 0; c < v.components(); ++c) {
    for (double x : v[c]) m = std::max(m, std::abs(x));
  }
  return m;
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

double inner(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid());
  double s = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    for (std::size_t i = 0; i < a[c].size(); ++i) s += a[c][i] * b[c][i];
  }
  return s * a.grid().cell_volume();
}

bool all_finite(const ScalarField& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

bool all_finite(const VectorField& v) {
  for (int c = 0; c < v.components(); ++c) {
    for (double x : v[c]) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

void zero_wall_faces(VectorField& v) {
  const Grid& g = v.grid();
  for (int a = 0; a < v.components() && a < g.ndim; ++a) {
    if (g.bc[a] != Boundary::slip_wall) continue;
    for (std::size_t c = 0; c < g.size(); ++c) {
      if (g.coords(c)[a] == 0) v[a][c] = 0.0;
    }
  }
}

}  // namespace nematicflow
