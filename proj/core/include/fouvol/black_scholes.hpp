#pragma once

#include <optional>

namespace fouvol {

double normal_cdf(double x);

/// E[(e^X - K)^+] for X ~ N(mu, sigma2): N(d+) F - N(d-) K with F = exp(mu + sigma2/2).
double black_scholes_call(double mu, double sigma2, double K);

/// Undiscounted Black call on a forward F with volatility sigma over T.
double black_call(double F, double K, double T, double sigma);

/// Volatility reproducing `price` by bisection on [1e-6, 5]. Empty when the
/// price lies outside the no-arbitrage band or the bracket.
std::optional<double> implied_vol(double price, double F, double K, double T);

}  // namespace fouvol
