#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "nematicflow/constitutive.hpp"
#include "nematicflow/grid.hpp"
#include "nematicflow/solvers.hpp"

namespace nematicflow {

struct State {
  double t = 0.0;
  VectorField u;      // face-staggered velocity
  VectorField d;      // cell director, always 3 components
  ScalarField theta;  // cell temperature
  ScalarField p;      // cell pressure (modified: includes gradient parts of the elastic force)

  bool operator==(const State&) const = default;
};

// u = 0, d = (1, 0, 0), theta = theta0, p = 0.
State make_state(const Grid& grid, double theta0 = 1.0);

enum class DiffusionTreatment { explicit_, implicit };

struct StepControls {
  double dt = 1e-3;
  AdvectionScheme advection = AdvectionScheme::centered;
  DiffusionTreatment diffusion = DiffusionTreatment::implicit;
  // 1: IMEX Euler split (director, momentum, temperature in turn).
  // 2: IMEX midpoint for velocity and director; temperature sources from the midpoint stage.
  int time_order = 2;
  double cfl_safety = 0.5;
  double tol_div = 1e-10;
  double tol_newton = 1e-12;  // linear-solve tolerance
  int max_iters = 5000;
  double blowup_guard = 1e3;
  bool freeze_temperature = false;
  SolverKind solver = SolverKind::automatic;

  bool operator==(const StepControls&) const = default;
};

// Additive source terms evaluated at points x and time t; used by
// manufactured solutions. Empty functions mean no forcing.
struct Forcing {
  std::function<double(int, const Vec3&, double)> u;
  std::function<double(int, const Vec3&, double)> d;
  std::function<double(const Vec3&, double)> theta;
  bool empty() const { return !u && !d && !theta; }
};

// Everything the audit needs from a step, recorded from the values the scheme
// actually used.
struct StageData {
  double dt = 0.0;
  double t_stage = 0.0;
  VectorField velocity;         // stage velocity feeding the heat sources
  VectorField director;         // stage director
  VectorField molecular_field;  // w = Δd - f(d) at the stage
  ScalarField viscous_heating;  // S:∇u per cell
  ScalarField director_heating; // λγ|w|^2 per cell
  ScalarField regularizer_heating;
  ScalarField heat_source;      // sum of the three above
  ScalarField theta_forcing;    // manufactured-solution source, zero otherwise
  ScalarField theta_advection;  // div(θu) term used in the update
  VectorField heat_flux;        // conduction flux on faces used in the update
  double external_work = 0.0;   // dt Σ g·u vol plus forcing work
  double boundary_flux = 0.0;   // energy through walls; zero for the supported boundaries
  double strain_sq_integral = 0.0;     // Σ|ε(u)|^2 vol at the stage
  double molecular_sq_integral = 0.0;  // Σ|w|^2 vol at the stage
  double wall_stress_residual = 0.0;
  double max_div_u = 0.0;
  double cfl = 0.0;
  bool temperature_frozen = false;
};

struct StepResult {
  State state;
  StageData stage;
};

// Owns the solvers and scratch for one grid and parameter set. Not shareable
// between threads; independent integrators are.
class Integrator {
 public:
  Integrator(const Grid& grid, const PhysParams& params, const StepControls& controls,
             Forcing forcing = {});
  ~Integrator();
  Integrator(Integrator&&) noexcept;
  Integrator& operator=(Integrator&&) noexcept;

  // One full step; the input is never modified.
  StepResult step(const State& state);

  // First-order split building blocks (time_order = 1 sequence).
  VectorField step_director(const State& state);
  std::pair<VectorField, ScalarField> step_momentum(const State& state, const VectorField& new_director);
  ScalarField step_temperature(const State& state, const VectorField& u, const VectorField& d,
                               const ScalarField& heat_source);

  // Largest dt allowed by advective CFL, explicit diffusion and the Lipschitz
  // bound of f on the current |d| range.
  double stable_dt(const State& state) const;

  const Grid& grid() const;
  const PhysParams& params() const;
  const StepControls& controls() const;
  const Potential& potential() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience wrapper that builds a temporary Integrator.
State step(const State& state, const StepControls& controls, const PhysParams& params);

// Dd/Dt on the grid given a caller-supplied d_t: d_t + u·∇d - d·∇u.
VectorField material_director_derivative(const State& state, const VectorField& d_t,
                                         AdvectionScheme scheme = AdvectionScheme::centered);

// Discrete energy pieces shared by the dynamics and the audit.
double kinetic_energy(const VectorField& u);
double elastic_gradient_energy(const VectorField& d, double lambda);
double elastic_potential_energy(const VectorField& d, const Potential& F, double lambda);

}  // namespace nematicflow
