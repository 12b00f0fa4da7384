#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace nematicflow {

enum class Boundary { periodic, slip_wall };
enum class Location { cell, face };
enum class AdvectionScheme { centered, limited_upwind, upwind };

using Array = std::vector<double>;

// Uniform rectangular lattice anchored at the origin. Axes beyond ndim are
// inert (one cell, periodic) so that 2D and 3D share the same indexing.
struct Grid {
  int ndim = 2;
  std::array<int, 3> cells{1, 1, 1};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<Boundary, 3> bc{Boundary::periodic, Boundary::periodic, Boundary::periodic};

  // Validating constructor. lengths are box extents, not spacings.
  static Grid make(int ndim, std::span<const int> cells, std::span<const double> lengths,
                   std::span<const Boundary> bc);

  std::size_t size() const {
    return static_cast<std::size_t>(cells[0]) * cells[1] * cells[2];
  }
  double cell_volume() const { return spacing[0] * spacing[1] * spacing[2]; }
  double volume() const { return cell_volume() * static_cast<double>(size()); }
  double length(int axis) const { return spacing[axis] * cells[axis]; }
  bool fully_periodic() const;
  bool is_wall(int axis) const { return axis < ndim && bc[axis] == Boundary::slip_wall; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(cells[0]) * (static_cast<std::size_t>(j) +
                                                 static_cast<std::size_t>(cells[1]) * k);
  }
  std::array<int, 3> coords(std::size_t idx) const {
    const int i = static_cast<int>(idx % cells[0]);
    const std::size_t rest = idx / cells[0];
    return {i, static_cast<int>(rest % cells[1]), static_cast<int>(rest / cells[1])};
  }
  double cell_center(int axis, int i) const { return (i + 0.5) * spacing[axis]; }
  double face_position(int axis, int i) const { return i * spacing[axis]; }

  bool operator==(const Grid&) const = default;
};

// Throws GridMismatch.
void require_same_grid(const Grid& a, const Grid& b);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double value = 0.0);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  Array& values() { return values_; }
  const Array& values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  Array values_;
};

// Face fields store one array of grid.size() entries per velocity component,
// entry c of component a being the lower a-face of cell c. On a wall axis the
// lower face of the first cell is the wall itself and is held at zero.
class VectorField {
 public:
  VectorField() = default;
  VectorField(const Grid& grid, Location location, int components, double value = 0.0);

  static VectorField face(const Grid& grid) { return {grid, Location::face, grid.ndim}; }
  static VectorField cell(const Grid& grid, int components) {
    return {grid, Location::cell, components};
  }

  const Grid& grid() const { return grid_; }
  Location location() const { return location_; }
  int components() const { return static_cast<int>(comps_.size()); }
  Array& operator[](int c) { return comps_[c]; }
  const Array& operator[](int c) const { return comps_[c]; }

  bool operator==(const VectorField&) const = default;

 private:
  Grid grid_;
  Location location_ = Location::cell;
  std::vector<Array> comps_;
};

// Cell-centered rows x cols tensor samples.
class TensorField {
 public:
  TensorField() = default;
  TensorField(const Grid& grid, int rows, int cols);

  const Grid& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Array& operator()(int r, int c) { return comps_[r * cols_ + c]; }
  const Array& operator()(int r, int c) const { return comps_[r * cols_ + c]; }

 private:
  Grid grid_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Array> comps_;
};

// Face-staggered gradient of a cell field; zero on wall faces.
VectorField gradient(const ScalarField& f);
// Cell divergence of a face field; the negative adjoint of gradient.
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
// Componentwise for cell fields; for face fields the wall-consistent vector
// Laplacian (Dirichlet normal component, Neumann tangential).
VectorField laplacian(const VectorField& v);
// u.grad(w) for a cell field w and face velocity u.
ScalarField advect(const ScalarField& w, const VectorField& u,
                   AdvectionScheme scheme = AdvectionScheme::centered);
VectorField advect(const VectorField& w, const VectorField& u,
                   AdvectionScheme scheme = AdvectionScheme::centered);
// div(w u) in flux form; conserves the sum of w exactly.
ScalarField advect_conservative(const ScalarField& w, const VectorField& u,
                                AdvectionScheme scheme = AdvectionScheme::centered);
// Cell-centered samples of grad(u), entry (i, j) = d_j u_i.
TensorField velocity_gradient(const VectorField& u);

double max_abs(const ScalarField& f);
double max_abs(const VectorField& v);
// Volume-weighted sums; face fields skip the pinned wall entries (which are zero).
double integrate(const ScalarField& f);
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& v);
// Sets the pinned wall-face entries of a face field to zero.
void zero_wall_faces(VectorField& v);

}  // namespace nematicflow
