#include "nematicflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "discrete.hpp"
#include "nematicflow/error.hpp"
#include "stencil.hpp"

namespace nematicflow {

using detail::Pos;

State make_state(const Grid& grid, double theta0) {
  State s;
  s.u = VectorField::face(grid);
  s.d = VectorField::cell(grid, 3);
  std::fill(s.d[0].begin(), s.d[0].end(), 1.0);
  s.theta = ScalarField(grid, theta0);
  s.p = ScalarField(grid);
  return s;
}

namespace {

Vec3 cell_point(const Grid& g, const Pos& p) {
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < g.ndim; ++a) x[a] = g.cell_center(a, p[a]);
  return x;
}

Vec3 face_point(const Grid& g, int comp, const Pos& p) {
  Vec3 x = cell_point(g, p);
  x[comp] = g.face_position(comp, p[comp]);
  return x;
}

void axpy(double a, const VectorField& x, VectorField& y) {
  for (int c = 0; c < y.components(); ++c) {
    for (std::size_t i = 0; i < y[c].size(); ++i) y[c][i] += a * x[c][i];
  }
}

VectorField combine(const VectorField& base, double a, const VectorField& x) {
  VectorField out = base;
  axpy(a, x, out);
  return out;
}

double max_norm3(const VectorField& d) {
  double m = 0.0;
  for (std::size_t c = 0; c < d.grid().size(); ++c) {
    m = std::max(m, std::sqrt(d[0][c] * d[0][c] + d[1][c] * d[1][c] + d[2][c] * d[2][c]));
  }
  return m;
}

}  // namespace

double kinetic_energy(const VectorField& u) { return 0.5 * inner(u, u); }

double elastic_gradient_energy(const VectorField& d, double lambda) {
  double s = 0.0;
  for (int i = 0; i < d.components(); ++i) {
    ScalarField di(d.grid());
    di.values() = d[i];
    const VectorField gi = gradient(di);
    s += inner(gi, gi);
  }
  return 0.5 * lambda * s;
}

double elastic_potential_energy(const VectorField& d, const Potential& F, double lambda) {
  double s = 0.0;
  for (std::size_t c = 0; c < d.grid().size(); ++c) s += F.value(Vec3(d[0][c], d[1][c], d[2][c]));
  return lambda * s * d.grid().cell_volume();
}

VectorField material_director_derivative(const State& state, const VectorField& d_t,
                                         AdvectionScheme scheme) {
  VectorField out = d_t;
  axpy(1.0, advect(state.d, state.u, scheme), out);
  axpy(-1.0, detail::stretching(state.u, state.d), out);
  return out;
}

struct Integrator::Impl {
  Grid grid;
  PhysParams params;
  StepControls controls;
  Potential F;
  Forcing forcing;
  Projector projector;
  ShiftedLaplacianSolver cell_solver;
  std::vector<ShiftedLaplacianSolver> face_solvers;

  Impl(const Grid& g, const PhysParams& p, const StepControls& c, Forcing f)
      : grid(g),
        params(p),
        controls(c),
        F(p.potential),
        forcing(std::move(f)),
        projector(g, c.tol_div, options()),
        cell_solver(g, Layout{Location::cell, 0}, options()) {
    for (int a = 0; a < g.ndim; ++a) face_solvers.emplace_back(g, Layout{Location::face, a}, options());
  }

  SolverOptions options() const {
    return SolverOptions{controls.solver, controls.tol_newton, controls.max_iters};
  }
  bool implicit() const { return controls.diffusion == DiffusionTreatment::implicit; }

  Array mu_cells(const ScalarField& theta) const {
    Array mu(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) mu[c] = params.mu(theta[c]);
    return mu;
  }

  static double mean(const Array& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }

  // Full director right-hand side -u·∇d + d·∇u + γw + forcing.
  VectorField director_rhs(const VectorField& u, const VectorField& d, const VectorField& w, double t) const {
    VectorField out = advect(d, u, controls.advection);
    for (int i = 0; i < 3; ++i) {
      for (double& v : out[i]) v = -v;
    }
    if (params.stretching) axpy(1.0, detail::stretching(u, d), out);
    axpy(params.gamma, w, out);
    if (forcing.d) {
      for (std::size_t c = 0; c < grid.size(); ++c) {
        const Vec3 x = cell_point(grid, grid.coords(c));
        for (int i = 0; i < 3; ++i) out[i][c] += forcing.d(i, x, t);
      }
    }
    return out;
  }

  // Full momentum right-hand side, before projection.
  VectorField velocity_rhs(const VectorField& u, const VectorField& d, const VectorField& w, const Array& mu,
                           double t) const {
    VectorField out = VectorField::face(grid);
    detail::add_convection(u, -1.0, out);
    detail::add_elastic_force(d, w, params.lambda, params.stretching, 1.0, out);
    detail::add_viscous_divergence(detail::strain(grid, u), mu, 1.0, out);
    detail::add_regularizer_force(u, params.reg_weight, params.reg_r, 1.0, out);
    if (!params.g.zero() || forcing.u) {
      for (int a = 0; a < grid.ndim; ++a) {
        for (std::size_t c = 0; c < grid.size(); ++c) {
          const Pos p = grid.coords(c);
          if (detail::pinned_face(grid, a, p)) continue;
          const Vec3 x = face_point(grid, a, p);
          out[a][c] += params.g(a, x);
          if (forcing.u) out[a][c] += forcing.u(a, x, t);
        }
      }
    }
    zero_wall_faces(out);
    return out;
  }

  // Solves (I - c Δ) x = rhs componentwise.
  VectorField helmholtz(const VectorField& rhs, double coef) {
    VectorField out = rhs;
    if (coef == 0.0) return out;
    for (int i = 0; i < rhs.components(); ++i) {
      ShiftedLaplacianSolver& s = rhs.location() == Location::face ? face_solvers[i] : cell_solver;
      s.solve(1.0, -coef, rhs[i], out[i], ErrorKind::HelmholtzNotConverged);
    }
    if (rhs.location() == Location::face) zero_wall_faces(out);
    return out;
  }

  double director_coef() const { return implicit() ? params.gamma : 0.0; }
  double velocity_coef(const Array& mu) const { return implicit() ? 0.5 * mean(mu) : 0.0; }

  void check_fields(const VectorField& u, const VectorField& d) const {
    if (!all_finite(u) || !all_finite(d)) {
      throw Error(ErrorKind::FieldBlowup, "non-finite velocity or director");
    }
    const double m = max_norm3(d);
    if (m > controls.blowup_guard) {
      throw Error(ErrorKind::FieldBlowup, "max|d| = " + std::to_string(m) + " exceeds guard " +
                                              std::to_string(controls.blowup_guard));
    }
  }

  static void require_positive(const ScalarField& theta, ErrorKind kind) {
    for (double v : theta.values()) {
      if (!(v > 0.0)) throw Error(kind, "theta = " + std::to_string(v));
    }
  }

  struct Sources {
    ScalarField viscous, director, regularizer, total;
    double strain_sq = 0.0;
    double w_sq = 0.0;
  };

  Sources sources(const VectorField& u, const VectorField& w, const Array& mu) const {
    Sources s;
    const detail::Strain e = detail::strain(grid, u);
    s.viscous = ScalarField(grid);
    s.viscous.values() = detail::viscous_heating(grid, e, mu);
    s.director = ScalarField(grid);
    const double coef = params.lambda * params.gamma;
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const double w2 = w[0][c] * w[0][c] + w[1][c] * w[1][c] + w[2][c] * w[2][c];
      s.director[c] = coef * w2;
      s.w_sq += w2;
    }
    s.w_sq *= grid.cell_volume();
    s.regularizer = ScalarField(grid);
    s.regularizer.values() = detail::regularizer_heating(u, params.reg_weight, params.reg_r);
    s.total = ScalarField(grid);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      s.total[c] = s.viscous[c] + s.director[c] + s.regularizer[c];
    }
    const Array e2 = detail::strain_norm_sq(grid, e);
    for (double v : e2) s.strain_sq += v;
    s.strain_sq *= grid.cell_volume();
    return s;
  }

  struct ThermalUpdate {
    ScalarField theta;
    ScalarField advection;
    VectorField flux;
  };

  ThermalUpdate temperature(const ScalarField& theta, const VectorField& u, const VectorField& d,
                            const ScalarField& source, const ScalarField& forcing_theta) {
    const double dt = controls.dt;
    ThermalUpdate out;
    out.advection = advect_conservative(theta, u, controls.advection);
    ScalarField k_cells(grid), h_cells(grid);
    bool h_zero = true;
    for (std::size_t c = 0; c < grid.size(); ++c) {
      k_cells[c] = params.k(theta[c]);
      h_cells[c] = params.h(theta[c]);
      h_zero = h_zero && h_cells[c] == 0.0;
    }
    const VectorField kappa = detail::face_average(k_cells);
    VectorField aniso = VectorField::face(grid);
    if (!h_zero) aniso = detail::anisotropic_flux(theta, d, detail::face_average(h_cells));
    const ScalarField div_aniso = divergence(aniso);

    ScalarField rhs(grid);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      rhs[c] = theta[c] + dt * (source[c] + forcing_theta[c] - out.advection[c] - div_aniso[c]);
    }
    out.theta = ScalarField(grid);
    if (implicit()) {
      Array x = rhs.values();
      if (params.k.is_constant() && cell_solver.uses_transform()) {
        cell_solver.solve(1.0, -dt * params.k.value, rhs.values(), x, ErrorKind::HelmholtzNotConverged);
      } else {
        solve_variable_diffusion(grid, dt, kappa, rhs.values(), x, options());
      }
      out.theta.values() = std::move(x);
      out.flux = detail::isotropic_flux(out.theta, kappa);
    } else {
      out.flux = detail::isotropic_flux(theta, kappa);
      const ScalarField div_iso = divergence(out.flux);
      for (std::size_t c = 0; c < grid.size(); ++c) out.theta[c] = rhs[c] - dt * div_iso[c];
    }
    axpy(1.0, aniso, out.flux);
    return out;
  }

  ScalarField theta_forcing(double t) const {
    ScalarField out(grid);
    if (!forcing.theta) return out;
    for (std::size_t c = 0; c < grid.size(); ++c) out[c] = forcing.theta(cell_point(grid, grid.coords(c)), t);
    return out;
  }

  double external_work(const VectorField& u, const VectorField& w, const ScalarField& ftheta, double t) const {
    double work = 0.0;
    if (!params.g.zero() || forcing.u) {
      for (int a = 0; a < grid.ndim; ++a) {
        for (std::size_t c = 0; c < grid.size(); ++c) {
          const Pos p = grid.coords(c);
          if (detail::pinned_face(grid, a, p)) continue;
          const Vec3 x = face_point(grid, a, p);
          double f = params.g(a, x);
          if (forcing.u) f += forcing.u(a, x, t);
          work += f * u[a][c];
        }
      }
    }
    if (forcing.d) {
      for (std::size_t c = 0; c < grid.size(); ++c) {
        const Vec3 x = cell_point(grid, grid.coords(c));
        for (int i = 0; i < 3; ++i) work -= params.lambda * w[i][c] * forcing.d(i, x, t);
      }
    }
    for (double v : ftheta.values()) work += v;
    return controls.dt * work * grid.cell_volume();
  }

  double wall_stress_residual(const VectorField& d, const VectorField& w) const {
    double r = 0.0;
    for (int b = 0; b < grid.ndim; ++b) {
      if (!grid.is_wall(b)) continue;
      for (std::size_t c = 0; c < grid.size(); ++c) {
        const Pos p = grid.coords(c);
        if (p[b] != 0 && p[b] != grid.cells[b] - 1) continue;
        for (int a = 0; a < grid.ndim; ++a) {
          if (a == b) continue;
          r = std::max(r, std::abs(params.lambda * w[a][c] * d[b][c]));
        }
      }
    }
    return r;
  }

  double cfl(const VectorField& u) const {
    double s = 0.0;
    for (int a = 0; a < grid.ndim; ++a) {
      double m = 0.0;
      for (double v : u[a]) m = std::max(m, std::abs(v));
      s += m / grid.spacing[a];
    }
    return controls.dt * s;
  }

  StepResult finish(const State& state, VectorField u_new, ScalarField p_new, VectorField d_new,
                    const VectorField& u_s, const VectorField& d_s, const VectorField& w_s, const Array& mu,
                    double t_stage, double max_div) {
    check_fields(u_new, d_new);
    StepResult out;
    StageData& st = out.stage;
    st.dt = controls.dt;
    st.t_stage = t_stage;
    const Sources src = sources(u_s, w_s, mu);
    st.theta_forcing = theta_forcing(t_stage);
    if (controls.freeze_temperature) {
      out.state.theta = state.theta;
      st.theta_advection = ScalarField(grid);
      st.heat_flux = VectorField::face(grid);
      st.temperature_frozen = true;
    } else {
      ThermalUpdate th = temperature(state.theta, u_s, d_s, src.total, st.theta_forcing);
      if (!all_finite(th.theta)) {
        throw Error(ErrorKind::TemperaturePositivityLost, "non-finite temperature");
      }
      require_positive(th.theta, ErrorKind::TemperaturePositivityLost);
      out.state.theta = std::move(th.theta);
      st.theta_advection = std::move(th.advection);
      st.heat_flux = std::move(th.flux);
    }
    st.velocity = u_s;
    st.director = d_s;
    st.molecular_field = w_s;
    st.viscous_heating = src.viscous;
    st.director_heating = src.director;
    st.regularizer_heating = src.regularizer;
    st.heat_source = src.total;
    st.external_work = external_work(u_s, w_s, st.theta_forcing, t_stage);
    st.boundary_flux = 0.0;
    st.strain_sq_integral = src.strain_sq;
    st.molecular_sq_integral = src.w_sq;
    st.wall_stress_residual = wall_stress_residual(d_s, w_s);
    st.max_div_u = max_div;
    st.cfl = cfl(state.u);
    out.state.t = state.t + controls.dt;
    out.state.u = std::move(u_new);
    out.state.d = std::move(d_new);
    out.state.p = std::move(p_new);
    return out;
  }

  void check_input(const State& s) const {
    require_same_grid(grid, s.u.grid());
    require_same_grid(grid, s.d.grid());
    require_same_grid(grid, s.theta.grid());
    require_positive(s.theta, ErrorKind::NonpositiveTemperature);
  }

  StepResult step_first_order(const State& s) {
    const double dt = controls.dt;
    const Array mu = mu_cells(s.theta);
    const VectorField w_n = detail::molecular_field(s.d, F);

    // Director: explicit transport, stretching and f; implicit γΔ.
    const double cd = director_coef();
    VectorField rd = director_rhs(s.u, s.d, w_n, s.t);
    if (cd != 0.0) axpy(-cd, laplacian(s.d), rd);
    VectorField d_new = helmholtz(combine(s.d, dt, rd), dt * cd);
    check_fields(s.u, d_new);
    const VectorField w_new = detail::molecular_field(d_new, F);

    // Momentum with the old director paired with the new molecular field.
    const double cu = velocity_coef(mu);
    VectorField ru = velocity_rhs(s.u, s.d, w_new, mu, s.t);
    if (cu != 0.0) axpy(-cu, laplacian(s.u), ru);
    Projection proj = projector(helmholtz(combine(s.u, dt, ru), dt * cu));
    ScalarField p_new = proj.potential;
    for (double& v : p_new.values()) v /= dt;
    const VectorField u_s = proj.velocity;
    const VectorField d_s = d_new;
    return finish(s, std::move(proj.velocity), std::move(p_new), std::move(d_new), u_s, d_s, w_new, mu, s.t + dt,
                  proj.max_divergence);
  }

  StepResult step_second_order(const State& s) {
    const double dt = controls.dt;
    const double half = 0.5 * dt;
    const double t_mid = s.t + half;
    const Array mu = mu_cells(s.theta);
    const VectorField w_n = detail::molecular_field(s.d, F);

    // Stage: half step, implicit diffusion.
    const double cd = director_coef();
    VectorField rd = director_rhs(s.u, s.d, w_n, s.t);
    if (cd != 0.0) axpy(-cd, laplacian(s.d), rd);
    const VectorField d_k = helmholtz(combine(s.d, half, rd), half * cd);
    check_fields(s.u, d_k);

    const double cu = velocity_coef(mu);
    VectorField ru = velocity_rhs(s.u, s.d, w_n, mu, s.t);
    if (cu != 0.0) axpy(-cu, laplacian(s.u), ru);
    const VectorField u_k = projector(helmholtz(combine(s.u, half, ru), half * cu)).velocity;
    const VectorField w_k = detail::molecular_field(d_k, F);

    // Full step from the stage values.
    VectorField d_new = combine(s.d, dt, director_rhs(u_k, d_k, w_k, t_mid));
    Projection proj = projector(combine(s.u, dt, velocity_rhs(u_k, d_k, w_k, mu, t_mid)));
    ScalarField p_new = proj.potential;
    for (double& v : p_new.values()) v /= dt;
    const double div = proj.max_divergence;
    return finish(s, std::move(proj.velocity), std::move(p_new), std::move(d_new), u_k, d_k, w_k, mu, t_mid, div);
  }
};

Integrator::Integrator(const Grid& grid, const PhysParams& params, const StepControls& controls, Forcing forcing)
    : impl_(std::make_unique<Impl>(grid, params, controls, std::move(forcing))) {
  if (!(controls.dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (controls.time_order != 1 && controls.time_order != 2) {
    throw Error(ErrorKind::InvalidArgument, "time_order must be 1 or 2");
  }
}

Integrator::~Integrator() = default;
Integrator::Integrator(Integrator&&) noexcept = default;
Integrator& Integrator::operator=(Integrator&&) noexcept = default;

const Grid& Integrator::grid() const { return impl_->grid; }
const PhysParams& Integrator::params() const { return impl_->params; }
const StepControls& Integrator::controls() const { return impl_->controls; }
const Potential& Integrator::potential() const { return impl_->F; }

StepResult Integrator::step(const State& state) {
  impl_->check_input(state);
  return impl_->controls.time_order == 1 ? impl_->step_first_order(state) : impl_->step_second_order(state);
}

VectorField Integrator::step_director(const State& s) {
  impl_->check_input(s);
  Impl& m = *impl_;
  const double dt = m.controls.dt;
  const double cd = m.director_coef();
  VectorField rd = m.director_rhs(s.u, s.d, detail::molecular_field(s.d, m.F), s.t);
  if (cd != 0.0) axpy(-cd, laplacian(s.d), rd);
  VectorField d_new = m.helmholtz(combine(s.d, dt, rd), dt * cd);
  m.check_fields(s.u, d_new);
  return d_new;
}

std::pair<VectorField, ScalarField> Integrator::step_momentum(const State& s, const VectorField& new_director) {
  impl_->check_input(s);
  Impl& m = *impl_;
  const double dt = m.controls.dt;
  const Array mu = m.mu_cells(s.theta);
  const double cu = m.velocity_coef(mu);
  VectorField ru = m.velocity_rhs(s.u, s.d, detail::molecular_field(new_director, m.F), mu, s.t);
  if (cu != 0.0) axpy(-cu, laplacian(s.u), ru);
  Projection proj = m.projector(m.helmholtz(combine(s.u, dt, ru), dt * cu));
  for (double& v : proj.potential.values()) v /= dt;
  return {std::move(proj.velocity), std::move(proj.potential)};
}

ScalarField Integrator::step_temperature(const State& s, const VectorField& u, const VectorField& d,
                                         const ScalarField& heat_source) {
  impl_->check_input(s);
  Impl& m = *impl_;
  auto th = m.temperature(s.theta, u, d, heat_source, m.theta_forcing(s.t + m.controls.dt));
  Impl::require_positive(th.theta, ErrorKind::TemperaturePositivityLost);
  return std::move(th.theta);
}

double Integrator::stable_dt(const State& s) const {
  const Impl& m = *impl_;
  const Grid& g = m.grid;
  double limit = std::numeric_limits<double>::infinity();
  double rate = 0.0;
  for (int a = 0; a < g.ndim; ++a) {
    double mu = 0.0;
    for (double v : s.u[a]) mu = std::max(mu, std::abs(v));
    rate += mu / g.spacing[a];
  }
  if (rate > 0.0) limit = std::min(limit, m.controls.cfl_safety / rate);
  const double lip = m.F.lipschitz_bound(std::max(1.0, max_norm3(s.d)));
  limit = std::min(limit, m.controls.cfl_safety * 2.0 / (m.params.gamma * lip));
  if (!m.implicit()) {
    double inv_h2 = 0.0;
    for (int a = 0; a < g.ndim; ++a) inv_h2 += 1.0 / (g.spacing[a] * g.spacing[a]);
    double diff = m.params.gamma;
    for (std::size_t c = 0; c < g.size(); ++c) {
      diff = std::max({diff, 0.5 * m.params.mu(s.theta[c]), m.params.k(s.theta[c]) + m.params.h(s.theta[c])});
    }
    limit = std::min(limit, m.controls.cfl_safety / (2.0 * inv_h2 * diff));
  }
  return limit;
}

State step(const State& state, const StepControls& controls, const PhysParams& params) {
  Integrator integrator(state.u.grid(), params, controls);
  return integrator.step(state).state;
}

}  // namespace nematicflow
