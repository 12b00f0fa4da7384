#include "nematicflow/trig_field.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace nematicflow {

double TrigSeries::eval(const Vec3& x, double t, std::array<int, 3> alpha, int time_order) const {
  const int order = alpha[0] + alpha[1] + alpha[2];
  double sum = (order == 0 && time_order == 0) ? constant : 0.0;
  for (const TrigTerm& m : terms) {
    const double arg = m.k.dot(x) + m.phase;
    const double c = std::cos(arg), s = std::sin(arg);
    // d^n/dz^n cos z = cos(z + nπ/2)
    double spatial = 0.0;
    switch (order % 4) {
      case 0: spatial = c; break;
      case 1: spatial = -s; break;
      case 2: spatial = -c; break;
      default: spatial = s; break;
    }
    for (int a = 0; a < 3; ++a) {
      for (int n = 0; n < alpha[a]; ++n) spatial *= m.k[a];
    }
    const double temporal = time_order == 0 ? 1.0 + m.time_amplitude * std::sin(m.omega * t)
                                            : m.time_amplitude * m.omega * std::cos(m.omega * t);
    sum += m.amplitude * temporal * spatial;
  }
  return sum;
}

TrigDerivatives TrigSeries::derivatives(const Vec3& x, double t) const {
  TrigDerivatives out;
  out.value = constant;
  for (const TrigTerm& m : terms) {
    const double arg = m.k.dot(x) + m.phase;
    const double c = std::cos(arg), s = std::sin(arg);
    const double a = m.amplitude * (1.0 + m.time_amplitude * std::sin(m.omega * t));
    const double a_t = m.amplitude * m.time_amplitude * m.omega * std::cos(m.omega * t);
    out.value += a * c;
    out.value_t += a_t * c;
    out.grad -= a * s * m.k;
    out.grad_t -= a_t * s * m.k;
    out.hess -= a * c * m.k * m.k.transpose();
    out.grad_lap += a * s * m.k.squaredNorm() * m.k;
  }
  return out;
}

double ManufacturedFields::u(int comp, const Vec3& x, double t) const {
  if (comp == 0) return psi.eval(x, t, {0, 1, 0});
  if (comp == 1) return -psi.eval(x, t, {1, 0, 0});
  return 0.0;
}

Jet ManufacturedFields::jet(const Vec3& x, double t) const {
  Jet j;
  // u_0 = ∂_y ψ, u_1 = -∂_x ψ
  const TrigDerivatives p = psi.derivatives(x, t);
  const int base[2] = {1, 0};
  const double sign[2] = {1.0, -1.0};
  for (int i = 0; i < 2; ++i) {
    j.u[i] = sign[i] * p.grad[base[i]];
    j.u_t[i] = sign[i] * p.grad_t[base[i]];
    j.lap_u[i] = sign[i] * p.grad_lap[base[i]];
    for (int b = 0; b < 3; ++b) j.grad_u(i, b) = sign[i] * p.hess(base[i], b);
  }
  for (int i = 0; i < 3; ++i) {
    const TrigDerivatives q = d[i].derivatives(x, t);
    j.d[i] = q.value;
    j.d_t[i] = q.value_t;
    j.grad_d.row(i) = q.grad.transpose();
    j.hess_d[i] = q.hess;
    j.grad_lap_d.row(i) = q.grad_lap.transpose();
  }
  const TrigDerivatives q = theta.derivatives(x, t);
  j.theta = q.value;
  j.theta_t = q.value_t;
  j.grad_theta = q.grad;
  j.hess_theta = q.hess;
  return j;
}

namespace {

using PointFn = std::function<double(const Vec3&, double)>;

double diff_x(const PointFn& f, const Vec3& x, double t, int a, double h) {
  Vec3 e = Vec3::Zero();
  e[a] = h;
  return (-f(x + 2.0 * e, t) + 8.0 * f(x + e, t) - 8.0 * f(x - e, t) + f(x - 2.0 * e, t)) / (12.0 * h);
}

double diff_t(const PointFn& f, const Vec3& x, double t, double h) {
  return (-f(x, t + 2.0 * h) + 8.0 * f(x, t + h) - 8.0 * f(x, t - h) + f(x, t - 2.0 * h)) / (12.0 * h);
}

PointFn partial(PointFn f, int a, double h) {
  return [f = std::move(f), a, h](const Vec3& x, double t) { return diff_x(f, x, t, a, h); };
}

}  // namespace

Jet ManufacturedFields::fd_jet(const Vec3& x, double t, double h) const {
  const double hh = 10.0 * h;  // nested differences need a larger step against round-off
  Jet j;
  for (int i = 0; i < 2; ++i) {
    const PointFn ui = [this, i](const Vec3& y, double s) { return u(i, y, s); };
    j.u[i] = ui(x, t);
    j.u_t[i] = diff_t(ui, x, t, h);
    for (int b = 0; b < 3; ++b) {
      j.grad_u(i, b) = diff_x(ui, x, t, b, h);
      j.lap_u[i] += diff_x(partial(ui, b, hh), x, t, b, hh);
    }
  }
  for (int i = 0; i < 3; ++i) {
    const PointFn di = [this, i](const Vec3& y, double s) { return d[i](y, s); };
    j.d[i] = di(x, t);
    j.d_t[i] = diff_t(di, x, t, h);
    PointFn lap = [di, hh](const Vec3& y, double s) {
      double v = 0.0;
      for (int b = 0; b < 3; ++b) v += diff_x(partial(di, b, hh), y, s, b, hh);
      return v;
    };
    for (int a = 0; a < 3; ++a) {
      j.grad_d(i, a) = diff_x(di, x, t, a, h);
      for (int b = 0; b < 3; ++b) j.hess_d[i](a, b) = diff_x(partial(di, b, hh), x, t, a, hh);
      j.grad_lap_d(i, a) = diff_x(lap, x, t, a, hh);
    }
  }
  const PointFn th = [this](const Vec3& y, double s) { return theta(y, s); };
  j.theta = th(x, t);
  j.theta_t = diff_t(th, x, t, h);
  for (int a = 0; a < 3; ++a) {
    j.grad_theta[a] = diff_x(th, x, t, a, h);
    for (int b = 0; b < 3; ++b) j.hess_theta(a, b) = diff_x(partial(th, b, hh), x, t, a, hh);
  }
  return j;
}

ManufacturedFields make_manufactured_fields(std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  // Raw engine bits keep the phases identical across standard libraries.
  const auto phase = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi; };
  const auto term = [&](double a, double kx, double ky, double b, double w) {
    return TrigTerm{amplitude * a, Vec3(kx, ky, 0.0), phase(), b, w};
  };
  ManufacturedFields m;
  m.psi.terms = {term(0.4, 1, 1, 0.5, 2.0), term(0.2, 1, -2, 0.5, 1.0)};
  m.d[0].constant = 1.0;
  m.d[0].terms = {term(0.25, 1, -1, 0.5, 1.5)};
  m.d[1].terms = {term(0.25, 1, 1, 0.5, 1.0)};
  m.d[2].terms = {term(0.1, 0, 1, 0.5, 2.0)};
  m.theta.constant = 2.0;
  m.theta.terms = {term(0.4, 1, 2, 0.5, 1.0), term(0.2, 2, -1, 0.5, 2.0)};
  return m;
}

}  // namespace nematicflow
