#include "fouvol/pricing_equity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fouvol/model.hpp"

namespace fouvol {

std::vector<std::size_t> spx_allocation(const ModelParams& mp, double T, const PricingOptions& opt) {
  const std::size_t budget = std::max(opt.n_paths, (opt.k_max + 1) * opt.n_min);
  return ctmc::stratified_allocation(mp.ctmc, T, opt.k_max, budget, opt.n_min);
}

Smile price_spx(const ModelParams& mp, const GSurface& gsurf, double T,
                std::span<const double> strikes, const PricingOptions& opt) {
  if (!(T > 0.0)) throw std::invalid_argument("price_spx: maturity must be positive");
  const std::size_t n_steps = opt.n_steps > 0 ? opt.n_steps : default_steps(T);
  const ModelSimulator sim(mp, gsurf, TimeGrid{T, n_steps}, opt.kappa);
  const std::size_t n_out = strikes.size() + 1;

  auto payoff = [&](const ctmc::CtmcPath& path, RandomStream& rng, std::span<double> out) {
    thread_local PathBundle b;
    thread_local std::vector<double> v;
    b.ctmc_path = path;
    sim.draw_brownian(rng, b);
    v.resize(n_steps + 1);
    sim.variance(b, v);
    const double s = std::exp(sim.terminal_log_price(b, v));
    out[0] = s;
    for (std::size_t j = 0; j < strikes.size(); ++j) out[j + 1] = std::max(s - strikes[j], 0.0);
  };

  std::vector<Estimate> est;
  if (opt.method == Method::simple) {
    est = simple_estimate(mp.ctmc, T, opt.n_paths, n_out, payoff, opt.sampling);
  } else if (opt.method == Method::mcvr) {
    const auto n_k = opt.allocation.empty() ? spx_allocation(mp, T, opt) : opt.allocation;
    est = mcvr_estimate(mp.ctmc, T, n_k, n_out, payoff, opt.sampling, false,
                        opt.normalize_strata);
  } else {
    throw std::invalid_argument("price_spx: method must be simple or mcvr");
  }
  Smile s;
  s.maturity = T;
  s.forward = est[0];
  s.strikes.assign(strikes.begin(), strikes.end());
  s.calls.assign(est.begin() + 1, est.end());
  return s;
}

Smile price_spx_simple_mc(const ModelParams& mp, const GSurface& gsurf, double T,
                          std::span<const double> strikes, PricingOptions opt) {
  opt.method = Method::simple;
  return price_spx(mp, gsurf, T, strikes, opt);
}

Smile mcvr_spx(const ModelParams& mp, const GSurface& gsurf, double T,
               std::span<const double> strikes, PricingOptions opt) {
  opt.method = Method::mcvr;
  return price_spx(mp, gsurf, T, strikes, opt);
}

}  // namespace fouvol
