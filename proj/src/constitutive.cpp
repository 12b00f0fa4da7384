#include "nematicflow/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nematicflow/error.hpp"

namespace nematicflow {

Potential::Potential(PotentialSpec spec) : spec_(std::move(spec)) {
  if (spec_.kind != PotentialSpec::Kind::table) return;
  const auto& y = spec_.samples;
  const int n = static_cast<int>(y.size());
  if (n < 4 || !(spec_.s_step > 0.0)) {
    throw HypothesisViolation("potential_table", "at least 4 samples and a positive s_step");
  }
  // Natural spline: M_0 = M_{n-1} = 0, tridiagonal system for the interior.
  m_.assign(n, 0.0);
  const double h2 = spec_.s_step * spec_.s_step;
  std::vector<double> diag(n, 4.0), rhs(n, 0.0);
  for (int k = 1; k < n - 1; ++k) rhs[k] = 6.0 * (y[k + 1] - 2.0 * y[k] + y[k - 1]) / h2;
  for (int k = 2; k < n - 1; ++k) {
    const double w = 1.0 / diag[k - 1];
    diag[k] -= w;
    rhs[k] -= w * rhs[k - 1];
  }
  for (int k = n - 2; k >= 1; --k) {
    m_[k] = (rhs[k] - (k + 1 < n - 1 ? m_[k + 1] : 0.0)) / diag[k];
  }
}

void Potential::locate(double s, int& k, double& t) const {
  const int n = static_cast<int>(spec_.samples.size());
  k = std::clamp(static_cast<int>(std::floor(s / spec_.s_step)), 0, n - 2);
  t = s / spec_.s_step - k;
}

double Potential::phi(double s) const {
  if (spec_.kind == PotentialSpec::Kind::quartic) return (s - 1.0) * (s - 1.0);
  const auto& y = spec_.samples;
  const double s_end = spec_.s_step * (static_cast<double>(y.size()) - 1.0);
  if (s > s_end) {
    const double e = s - s_end;
    return y.back() + dphi(s_end) * e + 0.5 * m_.back() * e * e;
  }
  int k;
  double t;
  locate(s, k, t);
  const double u = 1.0 - t;
  const double h2 = spec_.s_step * spec_.s_step;
  return u * y[k] + t * y[k + 1] + h2 / 6.0 * ((u * u * u - u) * m_[k] + (t * t * t - t) * m_[k + 1]);
}

double Potential::dphi(double s) const {
  if (spec_.kind == PotentialSpec::Kind::quartic) return 2.0 * (s - 1.0);
  const auto& y = spec_.samples;
  const double s_end = spec_.s_step * (static_cast<double>(y.size()) - 1.0);
  const double hs = spec_.s_step;
  if (s > s_end) {
    const int n = static_cast<int>(y.size());
    const double slope_end = (y[n - 1] - y[n - 2]) / hs + hs / 6.0 * (m_[n - 2] + 2.0 * m_[n - 1]);
    return slope_end + m_.back() * (s - s_end);
  }
  int k;
  double t;
  locate(s, k, t);
  const double u = 1.0 - t;
  return (y[k + 1] - y[k]) / hs + hs / 6.0 * (-(3.0 * u * u - 1.0) * m_[k] + (3.0 * t * t - 1.0) * m_[k + 1]);
}

double Potential::d2phi(double s) const {
  if (spec_.kind == PotentialSpec::Kind::quartic) return 2.0;
  const double s_end = spec_.s_step * (static_cast<double>(spec_.samples.size()) - 1.0);
  if (s > s_end) return m_.back();
  int k;
  double t;
  locate(s, k, t);
  return (1.0 - t) * m_[k] + t * m_[k + 1];
}

Mat3 Potential::jacobian(const Vec3& d) const {
  const double s = d.squaredNorm();
  return 2.0 * dphi(s) * Mat3::Identity() + 4.0 * d2phi(s) * d * d.transpose();
}

double Potential::lipschitz_bound(double radius) const {
  const double s_max = radius * radius;
  if (spec_.kind == PotentialSpec::Kind::quartic) return std::max(4.0, 12.0 * s_max - 4.0);
  double bound = 0.0;
  constexpr int kSamples = 400;
  for (int i = 0; i <= kSamples; ++i) {
    const double s = s_max * i / kSamples;
    const double a = 2.0 * dphi(s);
    bound = std::max({bound, std::abs(a), std::abs(a + 4.0 * d2phi(s) * s)});
  }
  return bound;
}

double Coefficient::operator()(double theta) const {
  if (kind == Kind::constant) return value;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  if (half <= 0.0) return mid;
  // tanh saturates to ±1 for large arguments; mid ± half can round past the bounds.
  return std::clamp(mid + half * std::tanh((value + slope * (theta - theta_ref) - mid) / half), lo, hi);
}

double BodyForce::operator()(int comp, const Vec3& x) const {
  if (comp != direction || amplitude == 0.0) return 0.0;
  return amplitude * std::cos(wavenumber * x[axis] + phase);
}

namespace {

void require(bool ok, const char* key, const char* bound) {
  if (!ok) throw HypothesisViolation(key, bound);
}

void validate_potential(const Potential& F, double D0) {
  const double s0 = D0 * D0;
  const double s_top = std::max(100.0 * s0, 100.0);
  constexpr int kSamples = 4000;
  for (int i = 0; i <= kSamples; ++i) {
    const double s = s_top * i / kSamples;
    require(F.phi(s) >= -1e-12, "potential", "F >= 0 everywhere");
    if (s >= s0) {
      const double a = F.dphi(s);
      require(a >= -1e-12 && a + 2.0 * s * F.d2phi(s) >= -1e-12, "D0",
              "F convex for |d| >= D0");
    }
  }
  require(F.dphi(s_top) > 0.0 && F.phi(s_top) > F.phi(s0), "potential",
          "F(d) -> infinity as |d| -> infinity");
}

}  // namespace

void PhysParams::validate() const {
  require(lambda > 0.0, "lambda", "lambda > 0");
  require(eta > 0.0, "eta", "eta > 0");
  require(gamma > 0.0 && std::abs(gamma * eta - lambda) <= 1e-12 * lambda, "gamma",
          "gamma = lambda / eta");
  require(mu_lo > 0.0, "mu_lo", "mu_lo > 0 (viscosity bounded below by a positive constant)");
  require(mu_hi >= mu_lo, "mu_hi", "mu_hi >= mu_lo");
  require(k_lo > 0.0, "k_lo", "k_lo > 0 (heat conductivity bounded below by a positive constant)");
  require(k_hi >= k_lo, "k_hi", "k_hi >= k_lo");
  require(theta_max > 0.0, "theta_max", "theta_max > 0");
  constexpr int kSamples = 256;
  for (int i = 0; i <= kSamples; ++i) {
    const double theta = theta_max * i / kSamples;
    const double m = mu(theta), kv = k(theta), hv = h(theta);
    require(m >= mu_lo && m <= mu_hi, "mu", "mu_lo <= mu(theta) <= mu_hi on sampled temperatures");
    require(kv >= k_lo && kv <= k_hi, "k", "k_lo <= k(theta) <= k_hi on sampled temperatures");
    require(hv >= 0.0 && hv <= k_hi, "h", "0 <= h(theta) <= k_hi on sampled temperatures");
  }
  require(reg_weight >= 0.0, "reg_weight", "reg_weight >= 0");
  if (reg_weight > 0.0) {
    require(reg_r > 3.0 && reg_r < 10.0 / 3.0, "reg_r", "r in (3, 10/3) when the regularizer is on");
  }
  require(D0 > 0.0, "D0", "D0 > 0");
  require(g.direction >= 0 && g.direction < 3 && g.axis >= 0 && g.axis < 3, "g",
          "body force direction and axis in {0, 1, 2}");
  validate_potential(Potential(potential), D0);
}

double potential_F(const Potential& F, const Vec3& d) { return F.value(d); }
Vec3 potential_f(const Potential& F, const Vec3& d) { return F.gradient(d); }

namespace {
void require_positive(double theta) {
  if (!(theta > 0.0)) {
    throw Error(ErrorKind::NonpositiveTemperature, "theta = " + std::to_string(theta));
  }
}
}  // namespace

double free_energy_density(const PhysParams& p, const Potential& F, const Vec3& d, const Mat3& grad_d,
                           double theta) {
  require_positive(theta);
  return 0.5 * p.lambda * grad_d.squaredNorm() + p.lambda * F.value(d) - theta * std::log(theta);
}

double entropy_density(double theta) {
  require_positive(theta);
  return 1.0 + std::log(theta);
}

double internal_energy_density(const PhysParams& p, const Potential& F, const Vec3& d,
                               const Mat3& grad_d, double theta) {
  require_positive(theta);
  return theta + p.lambda * F.value(d) + 0.5 * p.lambda * grad_d.squaredNorm();
}

Mat3 strain_rate(const Mat3& grad_u) { return 0.5 * (grad_u + grad_u.transpose()); }

Mat3 dissipative_stress(const PhysParams& p, double theta, const Mat3& grad_u) {
  return p.mu(theta) * strain_rate(grad_u);
}

Mat3 gradient_gram(const Mat3& grad_d) { return grad_d.transpose() * grad_d; }

Mat3 elastic_stress(const PhysParams& p, const Potential& F, const Vec3& d, const Mat3& grad_d,
                    const Vec3& lap_d) {
  return -p.lambda * gradient_gram(grad_d) + p.lambda * (F.gradient(d) - lap_d) * d.transpose();
}

HeatFlux dissipative_heat_flux(const PhysParams& p, double theta, const Vec3& grad_theta, const Vec3& d) {
  require_positive(theta);
  HeatFlux out;
  out.q = -p.k(theta) * grad_theta - p.h(theta) * d.dot(grad_theta) * d;
  out.Q = out.q / theta;
  return out;
}

Vec3 nondissipative_energy_flux(double lambda, const Mat3& grad_d, const Mat3& grad_u, const Vec3& d) {
  // (grad_u d)_i = Σ_j ∂_j u_i d_j; then contract with ∂_k d_i over i.
  return -lambda * grad_d.transpose() * (grad_u * d);
}

Microforces director_microforces(const PhysParams& p, const Potential& F, const Vec3& d,
                                 const Mat3& grad_d, const Vec3& Dd_Dt) {
  return {p.lambda * F.gradient(d), p.eta * Dd_Dt, p.lambda * grad_d};
}

double entropy_production_density(double theta, const Mat3& S, const Mat3& grad_u, const Vec3& Bd,
                                  const Vec3& Dd_Dt, const Vec3& Q, const Vec3& grad_theta) {
  require_positive(theta);
  const double mech = (S.array() * strain_rate(grad_u).array()).sum();
  return (mech + Bd.dot(Dd_Dt) - Q.dot(grad_theta)) / theta;
}

Vec3 material_director_derivative(const Vec3& d_t, const Vec3& u, const Vec3& d, const Mat3& grad_d,
                                  const Mat3& grad_u) {
  return d_t + grad_d * u - grad_u * d;
}

}  // namespace nematicflow
