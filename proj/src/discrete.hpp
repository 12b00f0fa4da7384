#pragma once

// Discrete kernels of the coupled system. Each force kernel that couples two
// equations is the exact adjoint (in the volume-weighted inner product) of the
// corresponding director or temperature term, so that exchange terms cancel
// in the discrete energy budget.

#include <vector>

#include "nematicflow/constitutive.hpp"
#include "nematicflow/grid.hpp"

namespace nematicflow::detail {

int pair_count(int ndim);
int pair_index(int a, int b);  // a != b, order-independent

// Strain rate: diagonal entries at cells, off-diagonal entries on edges.
struct Strain {
  std::vector<Array> diag;
  std::vector<Array> off;
};
Strain strain(const Grid& g, const VectorField& u);

// out += scale * div(mu eps) with mu at cells (edge values are 4-cell averages).
void add_viscous_divergence(const Strain& e, const Array& mu, double scale, VectorField& out);
// Cell distribution of the viscous dissipation mu eps:eps; sums exactly to the
// negative of <u, div(mu eps)>.
Array viscous_heating(const Grid& g, const Strain& e, const Array& mu);
// |eps|^2 per cell, distributed the same way.
Array strain_norm_sq(const Grid& g, const Strain& e);

// out += scale * skew-symmetric convection of u by itself.
void add_convection(const VectorField& u, double scale, VectorField& out);

// Director stretching (d·∇u)_i per cell; zero for i >= ndim.
VectorField stretching(const VectorField& u, const VectorField& d);

// out += scale * elastic force whose pairing with u equals
// λ <w, -u·∇d + d·∇u> (the stretching part only when enabled).
void add_elastic_force(const VectorField& d, const VectorField& w, double lambda, bool with_stretching,
                       double scale, VectorField& out);

// w = Δ_h d - f(d).
VectorField molecular_field(const VectorField& d, const Potential& F);

// r-Laplacian regularizer: out += scale * weight * div(|∇u|^{r-2} ∇u) as the
// negative gradient of (1/r) Σ |∇u|^r, and the matching cell source |∇u|^r.
void add_regularizer_force(const VectorField& u, double weight, double r, double scale, VectorField& out);
Array regularizer_heating(const VectorField& u, double weight, double r);

// Conduction fluxes on faces. kappa lives on faces (arithmetic mean of the
// cell values); the anisotropic part uses face-averaged d and a face
// reconstruction of the full temperature gradient.
VectorField face_average(const ScalarField& cell_values);
VectorField isotropic_flux(const ScalarField& theta, const VectorField& kappa);
VectorField anisotropic_flux(const ScalarField& theta, const VectorField& d, const VectorField& h_face);

}  // namespace nematicflow::detail
