#pragma once

// VIX futures and calls: simple Monte Carlo over the forward variance curve,
// the conditional log-normal approximation (per regime path), and its
// importance-sampled stratified version.

#include <memory>
#include <span>
#include <vector>

#include "fouvol/estimate.hpp"
#include "fouvol/estimators.hpp"
#include "fouvol/fou.hpp"
#include "fouvol/g_surface.hpp"
#include "fouvol/volterra.hpp"

namespace fouvol {

/// Forward variance curve at t on the VIX quadrature nodes.
struct ForwardCurveSample {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> xi;
  std::size_t state_t = 0;
};

/// n_u equally spaced trapezoid nodes on [t, t + delta].
std::vector<double> vix_u_grid(double t, double delta, std::size_t n_u = 32);

/// sqrt((1/delta) int xi du) by the trapezoid rule on the curve nodes.
double vix_from_curve(const ForwardCurveSample& curve, double delta);

struct PricingOptions {
  Method method = Method::mcvr;
  std::size_t n_paths = 20000;
  std::size_t n_steps = 0;  ///< 0: 312 steps per year, at least 8
  std::size_t n_u = 32;
  std::size_t k_max = 4;
  std::size_t n_min = 64;
  /// mcvr: per-jump-count ratio on the exact jump-count law (see mcvr_estimate)
  bool normalize_strata = true;
  /// Per-jump-count sample sizes for mcvr; empty derives them from the chain.
  std::vector<std::size_t> allocation;
  int kappa = 1;
  SamplingOptions sampling;
};

/// Steps on [0, t] when options.n_steps is 0.
std::size_t default_steps(double t);

struct Smile {
  double maturity = 0.0;
  Estimate forward;  ///< VIX future, or E[S_T] for the index
  std::vector<double> strikes;
  std::vector<Estimate> calls;
};

/// Everything that depends only on (model, surface, maturity).
class VixPricer {
 public:
  VixPricer(const ModelParams& mp, const GSurface& gsurf, double t, std::size_t n_steps,
            std::size_t n_u = 32, int kappa = 1);

  double maturity() const noexcept { return t_; }
  const std::vector<double>& u_grid() const noexcept { return u_; }
  const TimeGrid& grid() const noexcept { return grid_; }

  /// xi_t(u) for a regime path covering [0, t] and drivers on the grid.
  ForwardCurveSample forward_variance(const ctmc::CtmcPath& path, const VolterraDriver& z,
                                      const VolterraDriver& zbar) const;
  /// Conditional mean of N_t = (1/Delta) int log xi_t(u) du given the regime path.
  double mu_n(const ctmc::CtmcPath& path) const;
  /// Conditional variance of N_t; deterministic.
  double sigma2_n() const noexcept { return sigma2_n_; }

  /// Simulates one path and writes VIX and (VIX - K)^+ per strike.
  void simple_payoff(const ctmc::CtmcPath& path, RandomStream& rng, std::span<const double> strikes,
                     std::span<double> out) const;
  /// exp(mu_N/2 + sigma2_N/8) and BS(mu_N/2, sigma2_N/4, K) per strike.
  void cv_payoff(const ctmc::CtmcPath& path, std::span<const double> strikes,
                 std::span<double> out) const;

 private:
  void regime_terms(const ctmc::CtmcPath& path, std::span<double> out) const;

  ModelParams mp_;
  const GSurface* gsurf_;
  double t_;
  TimeGrid grid_;
  std::vector<double> u_;
  std::vector<double> trap_;  // trapezoid weights divided by Delta
  std::vector<double> det_;   // log xi0 - log G(w,u,mu0) + w^2 lambda
  specfun::KernelTable kernel_;
  std::unique_ptr<HybridCellLaw> law_;
  std::unique_ptr<VolterraProjection> y_proj_;
  std::unique_ptr<VolterraProjection> m_proj_;
  double sigma2_n_ = 0.0;
};

/// Default mcvr allocation for a VIX maturity (the zero-jump stratum is exact).
std::vector<std::size_t> vix_allocation(const ModelParams& mp, double t, const PricingOptions& opt);

Smile price_vix(const ModelParams& mp, const GSurface& gsurf, double t,
                std::span<const double> strikes, const PricingOptions& opt);

Smile price_vix_simple_mc(const ModelParams& mp, const GSurface& gsurf, double t,
                          std::span<const double> strikes, PricingOptions opt);
Smile price_vix_cv(const ModelParams& mp, const GSurface& gsurf, double t,
                   std::span<const double> strikes, PricingOptions opt);
Smile mcvr_vix(const ModelParams& mp, const GSurface& gsurf, double t,
               std::span<const double> strikes, PricingOptions opt);

}  // namespace fouvol
