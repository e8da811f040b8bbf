#include "fouvol/black_scholes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fouvol {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double black_scholes_call(double mu, double sigma2, double K) {
  if (!(sigma2 >= 0.0)) throw std::domain_error("black_scholes_call: sigma2 must be >= 0");
  const double F = std::exp(mu + 0.5 * sigma2);
  if (K <= 0.0) return F - K;
  if (sigma2 == 0.0) return std::max(F - K, 0.0);
  const double s = std::sqrt(sigma2);
  const double d_plus = (std::log(F / K) + 0.5 * sigma2) / s;
  return F * normal_cdf(d_plus) - K * normal_cdf(d_plus - s);
}

double black_call(double F, double K, double T, double sigma) {
  const double v = sigma * sigma * T;
  return black_scholes_call(std::log(F) - 0.5 * v, v, K);
}

std::optional<double> implied_vol(double price, double F, double K, double T) {
  if (!(F > 0.0 && K > 0.0 && T > 0.0) || !std::isfinite(price)) return std::nullopt;
  const double intrinsic = std::max(F - K, 0.0);
  if (!(price > intrinsic && price < F)) return std::nullopt;
  double lo = 1e-6, hi = 5.0;
  if (black_call(F, K, T, lo) > price || black_call(F, K, T, hi) < price) return std::nullopt;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (black_call(F, K, T, mid) < price) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fouvol
