#include "fouvol/fou.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <stdexcept>
#include <string>

namespace fouvol {

namespace {

double integrate(const auto& f, double a, double b) {
  if (!(b > a)) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  return ts.integrate(f, a, b, 1e-13);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

ForwardCurve::ForwardCurve(double flat) : flat_(flat) {
  require(std::isfinite(flat) && flat > 0.0, "xi0 must be positive");
}

ForwardCurve::ForwardCurve(std::vector<double> u, std::vector<double> xi)
    : flat_(xi.empty() ? 0.0 : xi.front()), u_(std::move(u)), xi_(std::move(xi)) {
  require(!u_.empty() && u_.size() == xi_.size(), "forward curve needs matching u and xi nodes");
  for (std::size_t i = 0; i < u_.size(); ++i) {
    require(std::isfinite(xi_[i]) && xi_[i] > 0.0, "forward curve levels must be positive");
    require(i == 0 || u_[i] > u_[i - 1], "forward curve nodes must be increasing");
  }
  if (u_.size() == 1) u_.clear(), xi_.clear();
}

double ForwardCurve::operator()(double u) const {
  if (u_.empty()) return flat_;
  if (u <= u_.front()) return xi_.front();
  if (u >= u_.back()) return xi_.back();
  const auto it = std::upper_bound(u_.begin(), u_.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - u_.begin());
  const double w = (u - u_[i - 1]) / (u_[i] - u_[i - 1]);
  return (1.0 - w) * xi_[i - 1] + w * xi_[i];
}

void ModelParams::validate() const {
  require(alpha > 0.5 && alpha < 1.0, "alpha must lie in (1/2, 1), got " + std::to_string(alpha));
  require(std::abs(rho) < 1.0, "|rho| must be < 1, got " + std::to_string(rho));
  require(std::abs(eta) < 1.0, "|eta| must be < 1, got " + std::to_string(eta));
  require(std::isfinite(theta) && theta >= 0.0, "theta must be >= 0");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
  require(std::isfinite(x0), "x0 must be finite");
  require(std::isfinite(delta) && delta > 0.0, "VIX window must be positive");
  for (double v : ctmc.values()) require(std::isfinite(v), "regime values must be finite");
}

double g_of_u(const ModelParams& mp, double u) {
  if (mp.x0 == 0.0 || mp.theta == 0.0 || u <= 0.0) return 0.0;
  const auto kp = mp.kernel();
  return mp.x0 * (1.0 - specfun::mittag_leffler(kp.alpha(), 1.0, -kp.c() * std::pow(u, kp.alpha())));
}

namespace {

template <class Ml1>
double h_segments(const Ml1& ml1, const ctmc::CtmcSpec& spec, const ctmc::CtmcPath& path,
                  double a, double b, double u) {
  if (!(a <= b) || b > u + 1e-12)
    throw std::invalid_argument("h_piecewise: need a <= b <= u");
  double total = 0.0;
  double lo = 0.0;
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    const double hi = i < path.dwell.size() ? lo + path.dwell[i] : std::max(path.horizon, b);
    const double s0 = std::max(lo, a);
    const double s1 = std::min(hi, b);
    if (s1 > s0) total += spec.value(path.states[i]) * (ml1(u - s1) - ml1(u - s0));
    lo = hi;
    if (lo >= b) break;
  }
  return total;
}

}  // namespace

double h_piecewise(const specfun::KernelTable& kernel, const ctmc::CtmcSpec& spec,
                   const ctmc::CtmcPath& path, double a, double b, double u) {
  return h_segments([&](double tau) { return kernel.ml1(tau); }, spec, path, a, b, u);
}

double h_piecewise(const ModelParams& mp, const ctmc::CtmcPath& path, double a, double b,
                   double u) {
  const auto kp = mp.kernel();
  auto ml1 = [&](double tau) {
    if (tau <= 0.0 || kp.theta() == 0.0) return 1.0;
    return specfun::mittag_leffler(kp.alpha(), 1.0, -kp.c() * std::pow(tau, kp.alpha()));
  };
  return h_segments(ml1, mp.ctmc, path, a, b, u);
}

namespace {

template <class Psi>
double square_integral(double alpha, double tau, const Psi& psi) {
  if (tau <= 0.0) return 0.0;
  // r = tau v^(1/(2 alpha - 1)) absorbs the r^(2 alpha - 2) singularity; the
  // endpoint-averaging quadrature is ~1% off here because the exponent is
  // close to -1.
  const double p = 2.0 * alpha - 1.0;
  auto f = [&](double v) {
    const double q = psi(tau * std::pow(v, 1.0 / p));
    return q * q;
  };
  return std::pow(tau, p) / p * integrate(f, 0.0, 1.0);
}

}  // namespace

double e_theta_square_integral(const specfun::KernelTable& kernel, double tau) {
  return square_integral(kernel.params().alpha(), tau,
                         [&](double r) { return kernel.psi(r); });
}

double e_t(const ModelParams& mp, double t, double u, double sigma) {
  if (u < t) throw std::invalid_argument("e_t: need u >= t");
  const auto kp = mp.kernel();
  const double v = square_integral(kp.alpha(), u - t, [&](double r) { return specfun::psi(kp, r); });
  return 0.5 * sigma * sigma * v;
}

double m_t(const ModelParams& mp, double t, double u) {
  if (u < t) throw std::invalid_argument("m_t: need u >= t");
  const double h2 = 2.0 * mp.hurst();
  return 0.5 * (1.0 - mp.eta * mp.eta) * std::pow(u - t, h2) / h2;
}

double sigma2_y(const ModelParams& mp, double t, double delta) {
  if (t <= 0.0) return 0.0;
  if (mp.theta < 1e-8) return sigma2_m(mp, t, delta);
  const auto kp = mp.kernel();
  const double a = kp.alpha();
  const double c = kp.c();
  auto f = [&](double x) {  // x = t - s
    const double d = specfun::mittag_leffler(a, 1.0, -c * std::pow(x, a)) -
                     specfun::mittag_leffler(a, 1.0, -c * std::pow(x + delta, a));
    return d * d;
  };
  return integrate(f, 0.0, t) / (mp.theta * mp.theta);
}

double sigma2_m(const ModelParams& mp, double t, double delta) {
  if (t <= 0.0) return 0.0;
  const double a = mp.alpha;
  const double p = 2.0 * a + 1.0;
  const double head = (std::pow(t + delta, p) - std::pow(delta, p) + std::pow(t, p)) / p;
  const double cross = integrate([&](double x) { return std::pow(x * x + x * delta, a); }, 0.0, t);
  return (head - 2.0 * cross) / (a * a);
}

}  // namespace fouvol
