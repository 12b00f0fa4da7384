#pragma once

// Neighbour resolution shared by the operator kernels. Cell lookups wrap on
// periodic axes and reflect evenly at walls; face lookups additionally return
// a zero weight for the wall faces of the normal component.

#include <array>
#include <cstddef>

#include "nematicflow/grid.hpp"
#include "nematicflow/parallel.hpp"

namespace nematicflow::detail {

using Pos = std::array<int, 3>;

inline Pos shifted(Pos p, int axis, int delta) {
  p[axis] += delta;
  return p;
}

inline int resolve_cell_coord(const Grid& g, int axis, int i) {
  const int n = g.cells[axis];
  if (g.bc[axis] == Boundary::periodic) {
    if (i < 0) return i + n;
    if (i >= n) return i - n;
    return i;
  }
  if (i < 0) return -i - 1;
  if (i >= n) return 2 * n - 1 - i;
  return i;
}

inline std::size_t cell_at(const Grid& g, Pos p) {
  return g.index(resolve_cell_coord(g, 0, p[0]), resolve_cell_coord(g, 1, p[1]),
                 resolve_cell_coord(g, 2, p[2]));
}

struct FaceRef {
  std::size_t index;
  double weight;  // 0 for wall faces, whose value is identically zero
};

inline FaceRef face_at(const Grid& g, int comp, Pos p) {
  if (g.bc[comp] == Boundary::slip_wall && (p[comp] <= 0 || p[comp] >= g.cells[comp])) {
    return {0, 0.0};
  }
  const std::size_t idx = g.index(resolve_cell_coord(g, 0, p[0]), resolve_cell_coord(g, 1, p[1]),
                                  resolve_cell_coord(g, 2, p[2]));
  return {idx, 1.0};
}

inline double face_value(const Array& u, const FaceRef& r) {
  return r.weight == 0.0 ? 0.0 : u[r.index];
}

inline double face_value(const Grid& g, const Array& u, int comp, Pos p) {
  return face_value(u, face_at(g, comp, p));
}

// True for the stored face entries that sit on a wall and are held at zero.
inline bool pinned_face(const Grid& g, int comp, const Pos& p) {
  return g.bc[comp] == Boundary::slip_wall && p[comp] == 0;
}

// Off-diagonal strain-type quantities live on edges, the lower-lower corner of
// cell p in the (a, b) plane. Edges lying on a wall carry zero.
inline bool wall_edge(const Grid& g, int a, int b, const Pos& p) {
  auto on_wall = [&](int axis) {
    return g.bc[axis] == Boundary::slip_wall && (p[axis] <= 0 || p[axis] >= g.cells[axis]);
  };
  return on_wall(a) || on_wall(b);
}

inline std::size_t edge_index(const Grid& g, const Pos& p) { return cell_at(g, p); }

// Runs fn(idx, pos) over all cells; fn must only write entries owned by idx.
template <class F>
inline void for_each_cell(const Grid& g, F&& fn) {
  parallel_for(g.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) fn(idx, g.coords(idx));
  });
}

// Terms of the cell-centred velocity gradient G_ij = d_j u_i as
// fn(i, j, face, coefficient). Diagonal entries are compact differences;
// off-diagonal entries average the centred j-difference over the two i-faces.
// Forward evaluation and adjoint both go through this visitor.
template <class F>
inline void visit_velocity_gradient(const Grid& g, const Pos& p, F&& fn) {
  for (int i = 0; i < g.ndim; ++i) {
    for (int j = 0; j < g.ndim; ++j) {
      if (i == j) {
        const double c = 1.0 / g.spacing[i];
        fn(i, j, face_at(g, i, shifted(p, i, 1)), c);
        fn(i, j, face_at(g, i, p), -c);
      } else {
        const double c = 0.25 / g.spacing[j];
        for (int s = 0; s < 2; ++s) {
          const Pos q = shifted(p, i, s);
          fn(i, j, face_at(g, i, shifted(q, j, 1)), c);
          fn(i, j, face_at(g, i, shifted(q, j, -1)), -c);
        }
      }
    }
  }
}

inline double van_leer(double a, double b) {
  return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
}

// Value of cell field w on the lower b-face of cell p, transported by face
// velocity v, for the flux-form schemes.
inline double face_state(const Grid& g, const Array& w, const Pos& p, int b, double v,
                         AdvectionScheme scheme) {
  const double lo = w[cell_at(g, shifted(p, b, -1))];
  const double hi = w[cell_at(g, p)];
  switch (scheme) {
    case AdvectionScheme::centered:
      return 0.5 * (lo + hi);
    case AdvectionScheme::upwind:
      return v >= 0.0 ? lo : hi;
    case AdvectionScheme::limited_upwind:
      if (v >= 0.0) {
        const double lolo = w[cell_at(g, shifted(p, b, -2))];
        return lo + 0.5 * van_leer(lo - lolo, hi - lo);
      } else {
        const double hihi = w[cell_at(g, shifted(p, b, 1))];
        return hi + 0.5 * van_leer(hi - hihi, lo - hi);
      }
  }
  return 0.0;
}

}  // namespace nematicflow::detail
