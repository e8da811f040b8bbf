#include "fouvol/specfun.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace fouvol::specfun {

namespace {

// Beyond this value of |z|^(1/alpha) the alternating series loses more than
// ~1e-13 to cancellation.
constexpr double kSeriesGrowthLimit = 6.0;

double series_positive(double alpha, double beta, double z) {
  // All terms positive; stop once they no longer move the sum.
  if (std::pow(z, 1.0 / alpha) > 700.0)
    throw std::overflow_error("mittag_leffler: value exceeds double range");
  double sum = 0.0;
  for (int n = 0; n < 100000; ++n) {
    const double log_term = n * std::log(z) - std::lgamma(alpha * n + beta);
    const double term = std::exp(log_term);
    sum += term;
    if (!std::isfinite(sum)) throw std::overflow_error("mittag_leffler: overflow");
    if (n > 2 && term < 1e-17 * sum && alpha * n + beta > std::pow(z, 1.0 / alpha)) break;
  }
  return sum;
}

double series_negative(double alpha, double beta, double z) {
  const double peak = std::pow(-z, 1.0 / alpha);
  double sum = 0.0;
  double zn = 1.0;
  for (int n = 0; n < 2000; ++n) {
    const double term = zn / std::tgamma(alpha * n + beta);
    sum += term;
    if (n > 4 && std::fabs(term) < 1e-18 && alpha * n + beta > peak) break;
    zn *= z;
  }
  return sum;
}

// E_{alpha,beta}(-x) for 0 < alpha < 1, 0 < beta < 1 + alpha via the branch-cut
// integral of the Laplace transform s^(alpha-beta) / (s^alpha + x):
//   (1/pi) int_0^inf e^-r r^(alpha-beta) [r^alpha sin(beta pi) + x sin((beta-alpha) pi)]
//                    / ((r^alpha + x cos(alpha pi))^2 + x^2 sin^2(alpha pi)) dr
double branch_cut_integral(double alpha, double beta, double x) {
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::tanh_sinh;
  thread_local tanh_sinh<double> finite_rule;
  thread_local exp_sinh<double> tail_rule;

  const double pi = std::numbers::pi;
  const double sa = std::sin(alpha * pi);
  const double ca = std::cos(alpha * pi);
  const double sb = std::sin(beta * pi);
  const double sba = std::sin((beta - alpha) * pi);

  auto f = [&](double r) -> double {
    if (r <= 0.0) return 0.0;
    const double ra = std::pow(r, alpha);
    const double shifted = ra + x * ca;
    const double den = shifted * shifted + x * x * sa * sa;
    return std::exp(-r) * std::pow(r, alpha - beta) * (ra * sb + x * sba) / den;
  };

  // The spectral density peaks where r^alpha = -x cos(alpha pi); it sharpens
  // as alpha -> 1, so split there.
  const double peak = ca < 0.0 ? std::pow(-x * ca, 1.0 / alpha) : 0.0;
  const double split = std::max(peak, 1.0);
  const double tol = 1e-14;
  const double head = finite_rule.integrate(f, 0.0, split, tol);
  const double tail = tail_rule.integrate([&](double r) { return f(split + r); }, tol);
  return (head + tail) / pi;
}

double negative_argument(double alpha, double beta, double z) {
  const double x = -z;
  const double growth = std::pow(x, 1.0 / alpha);
  if (growth <= kSeriesGrowthLimit) return series_negative(alpha, beta, z);
  if (alpha >= 1.0)
    throw std::domain_error("mittag_leffler: alpha = 1, beta != 1 only supported for |z| <= 16");
  // Reduce beta into (0, 1 + alpha) with E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z.
  if (beta >= 1.0 + alpha) {
    const double lower = negative_argument(alpha, beta - alpha, z);
    return (lower - 1.0 / std::tgamma(beta - alpha)) / z;
  }
  return branch_cut_integral(alpha, beta, x);
}

}  // namespace

KernelParams::KernelParams(double alpha, double theta) : alpha_(alpha), theta_(theta) {
  if (!(alpha > 0.5 && alpha <= 1.0))
    throw std::domain_error("KernelParams: alpha must lie in (1/2, 1]");
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw std::domain_error("KernelParams: theta must be finite and >= 0");
}

double mittag_leffler(double alpha, double beta, double z) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::domain_error("mittag_leffler: alpha and beta must be positive");
  if (alpha > 1.0) throw std::domain_error("mittag_leffler: alpha > 1 is not supported");
  if (!std::isfinite(z)) throw std::domain_error("mittag_leffler: z must be finite");
  if (z == 0.0) return 1.0 / std::tgamma(beta);
  if (alpha == 1.0 && beta == 1.0) {
    const double v = std::exp(z);
    if (!std::isfinite(v)) throw std::overflow_error("mittag_leffler: overflow");
    return v;
  }
  if (z > 0.0) return series_positive(alpha, beta, z);
  return negative_argument(alpha, beta, z);
}

double psi(const KernelParams& kp, double t) {
  if (t < 0.0) throw std::domain_error("psi: t must be >= 0");
  if (kp.theta() == 0.0) return 1.0;
  const double a = kp.alpha();
  return std::tgamma(a) * mittag_leffler(a, a, -kp.c() * std::pow(t, a));
}

double e_theta_kernel(const KernelParams& kp, double t) {
  if (!(t > 0.0)) throw std::domain_error("e_theta_kernel: t must be positive");
  return std::pow(t, kp.alpha() - 1.0) * psi(kp, t);
}

double resolvent_kernel(const KernelParams& kp, double t) {
  return kp.theta() * e_theta_kernel(kp, t);
}

double integral_theta_e(const KernelParams& kp, double u, double a, double b) {
  if (!(a >= 0.0 && a <= b && b <= u))
    throw std::domain_error("integral_theta_e: need 0 <= a <= b <= u");
  if (a == b || kp.theta() == 0.0) return 0.0;
  const double al = kp.alpha();
  const double c = kp.c();
  return mittag_leffler(al, 1.0, -c * std::pow(u - b, al)) -
         mittag_leffler(al, 1.0, -c * std::pow(u - a, al));
}

}  // namespace fouvol::specfun
