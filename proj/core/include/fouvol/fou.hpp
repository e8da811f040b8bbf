#pragma once

// Explicit solution of the fractional OU equation with regime-switching mean
// level, X = g + H + Y, and the deterministic pieces of its conditional
// moment generating function.

#include <cmath>
#include <utility>
#include <vector>

#include "fouvol/ctmc.hpp"
#include "fouvol/ml_table.hpp"
#include "fouvol/specfun.hpp"

namespace fouvol {

/// Initial forward variance: flat, or piecewise linear in u with flat
/// extrapolation.
class ForwardCurve {
 public:
  ForwardCurve(double flat = 0.04);  // NOLINT: implicit from a flat level
  ForwardCurve(std::vector<double> u, std::vector<double> xi);

  double operator()(double u) const;
  bool is_flat() const noexcept { return u_.empty(); }
  double flat_level() const noexcept { return flat_; }
  const std::vector<double>& nodes() const noexcept { return u_; }
  const std::vector<double>& levels() const noexcept { return xi_; }

 private:
  double flat_;
  std::vector<double> u_;
  std::vector<double> xi_;
};

struct ModelParams {
  double alpha = 0.6;   ///< H + 1/2
  double rho = -0.95;   ///< spot/vol correlation
  double eta = 0.0;     ///< weight of Z in W = eta Z + eta_bar Z_bar
  double theta = 1.0;   ///< mean-reversion speed
  double gamma = 0.1;   ///< vol-of-vol; w = 2 sqrt(gamma)
  ForwardCurve xi0 = ForwardCurve(0.04);
  double x0 = 0.0;
  ctmc::CtmcSpec ctmc = ctmc::CtmcSpec::constant(0.0);
  double delta = 30.0 / 365.0;  ///< VIX window

  double hurst() const noexcept { return alpha - 0.5; }
  double w() const noexcept { return 2.0 * std::sqrt(gamma); }
  double eta_bar() const noexcept { return std::sqrt(1.0 - eta * eta); }
  double rho_bar() const noexcept { return std::sqrt(1.0 - rho * rho); }
  specfun::KernelParams kernel() const { return {alpha, theta}; }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// g(u) = x0 (1 - E_{alpha,1}(-c u^alpha)), the F == x0 case.
double g_of_u(const ModelParams& mp, double u);

/// H_{a,b}(u) = int_a^b theta E_theta(u - s) mu(s) ds for the piecewise
/// constant mu of a chain path, exact up to Mittag-Leffler accuracy.
double h_piecewise(const specfun::KernelTable& kernel, const ctmc::CtmcSpec& spec,
                   const ctmc::CtmcPath& path, double a, double b, double u);
double h_piecewise(const ModelParams& mp, const ctmc::CtmcPath& path, double a, double b,
                   double u);

/// int_0^tau E_theta(r)^2 dr with the weakly singular quadrature.
double e_theta_square_integral(const specfun::KernelTable& kernel, double tau);

/// e_t(u, sigma) = 1/2 sigma^2 int_t^u E_theta(u - s)^2 ds.
double e_t(const ModelParams& mp, double t, double u, double sigma);

/// m_t(u, eta) = 1/2 (1 - eta^2) (u - t)^{2H} / (2H).
double m_t(const ModelParams& mp, double t, double u);

/// Variance of int_t^{t+Delta} Y_{0,t}(u) du:
/// (1/theta^2) int_0^t [E_{alpha,1}(-c (t-s)^alpha) - E_{alpha,1}(-c (t-s+Delta)^alpha)]^2 ds.
double sigma2_y(const ModelParams& mp, double t, double delta);

/// Variance of int_t^{t+Delta} M_{0,t}(u) du in closed form up to the smooth
/// residual integral int_0^t (x^2 + x Delta)^alpha dx.
double sigma2_m(const ModelParams& mp, double t, double delta);

}  // namespace fouvol
