#pragma once

// Special functions for the fractional kernel K(t) = t^(alpha-1):
// Mittag-Leffler function, the resolvent kernels R_theta / E_theta and the
// weakly singular quadrature used for integrals against powers of (u - s).

#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>

namespace fouvol::specfun {

/// Fractional kernel exponent and mean-reversion speed. c = theta * Gamma(alpha)
/// is always recomputed from the two stored fields.
class KernelParams {
 public:
  KernelParams(double alpha, double theta);

  double alpha() const noexcept { return alpha_; }
  double theta() const noexcept { return theta_; }
  double c() const noexcept { return theta_ * std::tgamma(alpha_); }
  double hurst() const noexcept { return alpha_ - 0.5; }

 private:
  double alpha_;
  double theta_;
};

/// E_{alpha,beta}(z) = sum_n z^n / Gamma(alpha n + beta) for 0 < alpha <= 1,
/// beta > 0 and real z.
///
/// Negative arguments use the power series in extended precision while the
/// alternating-sign cancellation is tolerable and the Laplace-inversion
/// (branch-cut) integral beyond that. Throws std::domain_error for alpha or
/// beta outside the supported range and std::overflow_error when the value is
/// not representable.
double mittag_leffler(double alpha, double beta, double z);

/// psi(t) = Gamma(alpha) E_{alpha,alpha}(-c t^alpha); continuous with psi(0) = 1.
double psi(const KernelParams& kp, double t);

/// E_theta(t) = t^(alpha-1) psi(t). Diverges like t^(alpha-1) at 0.
double e_theta_kernel(const KernelParams& kp, double t);

/// Resolvent of theta*K: R_theta = theta * E_theta.
double resolvent_kernel(const KernelParams& kp, double t);

/// int_a^b theta E_theta(u - s) ds
///   = E_{alpha,1}(-c (u-b)^alpha) - E_{alpha,1}(-c (u-a)^alpha).
double integral_theta_e(const KernelParams& kp, double u, double a, double b);

/// Approximates int_0^u s^x (u-s)^y phi(s) ds for x, y in (-1, 0].
///
/// The interval is split at eps and u - eps. On the two end pieces the
/// continuous factor is replaced by the average of its endpoint values and the
/// singular power is integrated exactly; the interior uses the trapezoid rule
/// with `inner_panels` panels (0 picks a step of eps / 8).
template <std::invocable<double> Phi>
double weakly_singular_quad(double x, double y, Phi&& phi, double u, double eps,
                            std::size_t inner_panels = 0) {
  if (!(x > -1.0 && x <= 0.0) || !(y > -1.0 && y <= 0.0))
    throw std::domain_error("weakly_singular_quad: exponents must lie in (-1, 0]");
  if (!(u > 0.0)) throw std::domain_error("weakly_singular_quad: u must be positive");
  if (!(eps > 0.0) || eps >= 0.5 * u)
    throw std::domain_error("weakly_singular_quad: eps must lie in (0, u/2)");

  const double phi0 = phi(0.0);
  const double phi_eps = phi(eps);
  const double phi_ueps = phi(u - eps);
  const double phi_u = phi(u);

  const double i1 = 0.5 * (phi0 * std::pow(u, y) + phi_eps * std::pow(u - eps, y)) *
                    std::pow(eps, x + 1.0) / (x + 1.0);
  const double i3 = 0.5 * (phi_ueps * std::pow(u - eps, x) + phi_u * std::pow(u, x)) *
                    std::pow(eps, y + 1.0) / (y + 1.0);

  const double inner = u - 2.0 * eps;
  std::size_t n = inner_panels;
  if (n == 0) n = static_cast<std::size_t>(std::ceil(8.0 * inner / eps));
  if (n < 1) n = 1;
  const double h = inner / static_cast<double>(n);

  auto integrand = [&](double s, double phi_s) {
    return std::pow(s, x) * std::pow(u - s, y) * phi_s;
  };
  double i2 = 0.5 * (integrand(eps, phi_eps) + integrand(u - eps, phi_ueps));
  for (std::size_t i = 1; i < n; ++i) {
    const double s = eps + h * static_cast<double>(i);
    i2 += integrand(s, phi(s));
  }
  i2 *= h;

  return i1 + i2 + i3;
}

}  // namespace fouvol::specfun
