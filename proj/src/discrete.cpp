#include "discrete.hpp"

#include <cmath>

#include "stencil.hpp"

namespace nematicflow::detail {

int pair_count(int ndim) { return ndim == 3 ? 3 : 1; }

int pair_index(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == 0) return b - 1;
  return 2;
}

namespace {

double edge_value(const Grid& g, const Array& e, int a, int b, const Pos& q) {
  return wall_edge(g, a, b, q) ? 0.0 : e[cell_at(g, q)];
}

// The four cells sharing the (a, b) edge at the lower-lower corner of cell q.
double edge_average(const Grid& g, const Array& cell, int a, int b, const Pos& q) {
  const Pos qa = shifted(q, a, -1);
  return 0.25 * (cell[cell_at(g, q)] + cell[cell_at(g, qa)] + cell[cell_at(g, shifted(q, b, -1))] +
                 cell[cell_at(g, shifted(qa, b, -1))]);
}

// Sum over the four (a, b) edges bounding cell p.
template <class F>
double sum_cell_edges(const Pos& p, int a, int b, F&& at) {
  double s = 0.0;
  for (int sa = 0; sa < 2; ++sa) {
    for (int sb = 0; sb < 2; ++sb) s += at(shifted(shifted(p, a, sa), b, sb));
  }
  return s;
}

// δ_b u_a on the (a, b) edge at q.
double edge_derivative(const Grid& g, const VectorField& u, int a, int b, const Pos& q) {
  if (wall_edge(g, a, b, q)) return 0.0;
  return (face_value(g, u[a], a, q) - face_value(g, u[a], a, shifted(q, b, -1))) / g.spacing[b];
}

// Velocity u_b averaged to the point between face q - e_b and face q of the
// a-component's control volume (see add_convection).
double transport_velocity(const Grid& g, const VectorField& u, int a, int b, const Pos& q) {
  if (a == b) return 0.5 * (face_value(g, u[a], a, shifted(q, a, -1)) + face_value(g, u[a], a, q));
  return 0.5 * (face_value(g, u[b], b, q) + face_value(g, u[b], b, shifted(q, a, -1)));
}

}  // namespace

Strain strain(const Grid& g, const VectorField& u) {
  Strain e;
  e.diag.assign(g.ndim, Array(g.size(), 0.0));
  e.off.assign(pair_count(g.ndim), Array(g.size(), 0.0));
  for (int a = 0; a < g.ndim; ++a) {
    Array& out = e.diag[a];
    for_each_cell(g, [&](std::size_t c, const Pos& p) {
      out[c] = (face_value(g, u[a], a, shifted(p, a, 1)) - face_value(g, u[a], a, p)) / g.spacing[a];
    });
  }
  for (int a = 0; a < g.ndim; ++a) {
    for (int b = a + 1; b < g.ndim; ++b) {
      Array& out = e.off[pair_index(a, b)];
      for_each_cell(g, [&](std::size_t c, const Pos& p) {
        out[c] = 0.5 * (edge_derivative(g, u, a, b, p) + edge_derivative(g, u, b, a, p));
      });
    }
  }
  return e;
}

void add_viscous_divergence(const Strain& e, const Array& mu, double scale, VectorField& out) {
  const Grid& g = out.grid();
  std::vector<Array> off_stress(e.off.size(), Array(g.size(), 0.0));
  for (int a = 0; a < g.ndim; ++a) {
    for (int b = a + 1; b < g.ndim; ++b) {
      const int k = pair_index(a, b);
      for_each_cell(g, [&](std::size_t c, const Pos& p) {
        off_stress[k][c] = edge_average(g, mu, a, b, p) * e.off[k][c];
      });
    }
  }
  for (int a = 0; a < g.ndim; ++a) {
    Array& oa = out[a];
    for_each_cell(g, [&](std::size_t c, const Pos& p) {
      if (pinned_face(g, a, p)) return;
      const std::size_t lo = cell_at(g, shifted(p, a, -1));
      double acc = (mu[c] * e.diag[a][c] - mu[lo] * e.diag[a][lo]) / g.spacing[a];
      for (int b = 0; b < g.ndim; ++b) {
        if (b == a) continue;
        const Array& s = off_stress[pair_index(a, b)];
        acc += (edge_value(g, s, a, b, shifted(p, b, 1)) - edge_value(g, s, a, b, p)) / g.spacing[b];
      }
      oa[c] += scale * acc;
    });
  }
}

namespace {

// Diagonal products at cells plus twice the quarter-sum of edge products.
template <class DiagFn, class OffFn>
Array distribute(const Grid& g, DiagFn&& diag, OffFn&& off) {
  Array out(g.size(), 0.0);
  for_each_cell(g, [&](std::size_t c, const Pos& p) {
    double acc = 0.0;
    for (int a = 0; a < g.ndim; ++a) acc += diag(a, c);
    for (int a = 0; a < g.ndim; ++a) {
      for (int b = a + 1; b < g.ndim; ++b) {
        acc += 0.5 * sum_cell_edges(p, a, b, [&](const Pos& q) { return off(a, b, q); });
      }
    }
    out[c] = acc;
  });
  return out;
}

}  // namespace

Array viscous_heating(const Grid& g, const Strain& e, const Array& mu) {
  return distribute(
      g, [&](int a, std::size_t c) { return mu[c] * e.diag[a][c] * e.diag[a][c]; },
      [&](int a, int b, const Pos& q) {
        if (wall_edge(g, a, b, q)) return 0.0;
        const double v = e.off[pair_index(a, b)][cell_at(g, q)];
        return edge_average(g, mu, a, b, q) * v * v;
      });
}

Array strain_norm_sq(const Grid& g, const Strain& e) {
  return distribute(
      g, [&](int a, std::size_t c) { return e.diag[a][c] * e.diag[a][c]; },
      [&](int a, int b, const Pos& q) {
        const double v = edge_value(g, e.off[pair_index(a, b)], a, b, q);
        return v * v;
      });
}

void add_convection(const VectorField& u, double scale, VectorField& out) {
  const Grid& g = u.grid();
  for (int a = 0; a < g.ndim; ++a) {
    Array& oa = out[a];
    for_each_cell(g, [&](std::size_t c, const Pos& p) {
      if (pinned_face(g, a, p)) return;
      double acc = 0.0;
      for (int b = 0; b < g.ndim; ++b) {
        const Pos up = shifted(p, b, 1);
        acc += (transport_velocity(g, u, a, b, up) * face_value(g, u[a], a, up) -
                transport_velocity(g, u, a, b, p) * face_value(g, u[a], a, shifted(p, b, -1))) /
               (2.0 * g.spacing[b]);
      }
      oa[c] += scale * acc;
    });
  }
}

VectorField stretching(const VectorField& u, const VectorField& d) {
  const Grid& g = u.grid();
  VectorField out(g, Location::cell, 3);
  for_each_cell(g, [&](std::size_t c, const Pos& p) {
    visit_velocity_gradient(g, p, [&](int i, int j, const FaceRef& r, double w) {
      out[i][c] += d[j][c] * w * face_value(u[i], r);
    });
  });
  return out;
}

void add_elastic_force(const VectorField& d, const VectorField& w, double lambda, bool with_stretching,
                       double scale, VectorField& out) {
  const Grid& g = d.grid();
  // Adjoint of the centred transport u·∇d.
  for (int b = 0; b < g.ndim; ++b) {
    Array& ob = out[b];
    for_each_cell(g, [&](std::size_t c, const Pos& p) {
      if (pinned_face(g, b, p)) return;
      const std::size_t lo = cell_at(g, shifted(p, b, -1));
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) acc += 0.5 * (w[i][c] + w[i][lo]) * (d[i][c] - d[i][lo]);
      ob[c] -= scale * lambda * acc / g.spacing[b];
    });
  }
  if (!with_stretching) return;
  // Adjoint of the stretching d·∇u; scattered serially.
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Pos p = g.coords(c);
    visit_velocity_gradient(g, p, [&](int i, int j, const FaceRef& r, double wt) {
      if (r.weight == 0.0) return;
      out[i][r.index] += scale * lambda * w[i][c] * d[j][c] * wt;
    });
  }
}

VectorField molecular_field(const VectorField& d, const Potential& F) {
  VectorField w = laplacian(d);
  const std::size_t n = d.grid().size();
  for (std::size_t c = 0; c < n; ++c) {
    const Vec3 f = F.gradient(Vec3(d[0][c], d[1][c], d[2][c]));
    for (int i = 0; i < 3; ++i) w[i][c] -= f[i];
  }
  return w;
}

namespace {

// |∇u|^2 per cell: squared diagonal differences plus quarter-averaged squared
// edge differences.
Array gradient_norm_sq(const VectorField& u) {
  const Grid& g = u.grid();
  Array out(g.size(), 0.0);
  for_each_cell(g, [&](std::size_t c, const Pos& p) {
    double acc = 0.0;
    for (int a = 0; a < g.ndim; ++a) {
      const double v = (face_value(g, u[a], a, shifted(p, a, 1)) - face_value(g, u[a], a, p)) / g.spacing[a];
      acc += v * v;
    }
    for (int a = 0; a < g.ndim; ++a) {
      for (int b = 0; b < g.ndim; ++b) {
        if (a == b) continue;
        acc += 0.25 * sum_cell_edges(p, a, b, [&](const Pos& q) {
                 const double v = edge_derivative(g, u, a, b, q);
                 return v * v;
               });
      }
    }
    out[c] = acc;
  });
  return out;
}

}  // namespace

void add_regularizer_force(const VectorField& u, double weight, double r, double scale, VectorField& out) {
  if (weight == 0.0) return;
  const Grid& g = u.grid();
  Array m = gradient_norm_sq(u);
  for (double& v : m) v = std::pow(v, 0.5 * (r - 2.0));
  for (int a = 0; a < g.ndim; ++a) {
    Array& oa = out[a];
    for_each_cell(g, [&](std::size_t c, const Pos& p) {
      if (pinned_face(g, a, p)) return;
      const Pos lo = shifted(p, a, -1);
      auto diag_flux = [&](const Pos& q) {
        const double v =
            (face_value(g, u[a], a, shifted(q, a, 1)) - face_value(g, u[a], a, q)) / g.spacing[a];
        return m[cell_at(g, q)] * v;
      };
      double acc = (diag_flux(p) - diag_flux(lo)) / g.spacing[a];
      for (int b = 0; b < g.ndim; ++b) {
        if (b == a) continue;
        auto edge_flux = [&](const Pos& q) {
          return edge_average(g, m, a, b, q) * edge_derivative(g, u, a, b, q);
        };
        acc += (edge_flux(shifted(p, b, 1)) - edge_flux(p)) / g.spacing[b];
      }
      oa[c] += scale * weight * acc;
    });
  }
}

Array regularizer_heating(const VectorField& u, double weight, double r) {
  const Grid& g = u.grid();
  if (weight == 0.0) return Array(g.size(), 0.0);
  Array out = gradient_norm_sq(u);
  for (double& v : out) v = weight * std::pow(v, 0.5 * r);
  return out;
}

VectorField face_average(const ScalarField& cell_values) {
  const Grid& g = cell_values.grid();
  VectorField out = VectorField::face(g);
  for (int a = 0; a < g.ndim; ++a) {
    Array& oa = out[a];
    for_each_cell(g, [&](std::size_t c, const Pos& p) {
      if (pinned_face(g, a, p)) return;
      oa[c] = 0.5 * (cell_values[c] + cell_values[cell_at(g, shifted(p, a, -1))]);
    });
  }
  return out;
}

VectorField isotropic_flux(const ScalarField& theta, const VectorField& kappa) {
  VectorField q = gradient(theta);
  for (int a = 0; a < q.components(); ++a) {
    for (std::size_t c = 0; c < q[a].size(); ++c) q[a][c] *= -kappa[a][c];
  }
  return q;
}

VectorField anisotropic_flux(const ScalarField& theta, const VectorField& d, const VectorField& h_face) {
  const Grid& g = theta.grid();
  VectorField q = VectorField::face(g);
  for (int a = 0; a < g.ndim; ++a) {
    Array& qa = q[a];
    for_each_cell(g, [&](std::size_t c, const Pos& p) {
      if (pinned_face(g, a, p) || h_face[a][c] == 0.0) return;
      const Pos pl = shifted(p, a, -1);
      const std::size_t lo = cell_at(g, pl);
      double proj = 0.0;  // d̄·∇θ at the face
      for (int b = 0; b < g.ndim; ++b) {
        double grad;
        if (b == a) {
          grad = (theta[c] - theta[lo]) / g.spacing[a];
        } else {
          grad = 0.25 *
                 (theta[cell_at(g, shifted(p, b, 1))] - theta[cell_at(g, shifted(p, b, -1))] +
                  theta[cell_at(g, shifted(pl, b, 1))] - theta[cell_at(g, shifted(pl, b, -1))]) /
                 g.spacing[b];
        }
        proj += 0.5 * (d[b][c] + d[b][lo]) * grad;
      }
      qa[c] = -h_face[a][c] * 0.5 * (d[a][c] + d[a][lo]) * proj;
    });
  }
  return q;
}

}  // namespace nematicflow::detail
