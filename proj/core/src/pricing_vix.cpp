#include "fouvol/pricing_vix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fouvol/black_scholes.hpp"

namespace fouvol {

std::vector<double> vix_u_grid(double t, double delta, std::size_t n_u) {
  if (n_u < 2) throw std::invalid_argument("vix_u_grid: need at least two nodes");
  std::vector<double> u(n_u);
  for (std::size_t i = 0; i < n_u; ++i)
    u[i] = t + delta * static_cast<double>(i) / static_cast<double>(n_u - 1);
  return u;
}

double vix_from_curve(const ForwardCurveSample& curve, double delta) {
  const auto& u = curve.u;
  const auto& xi = curve.xi;
  if (u.size() < 2 || u.size() != xi.size())
    throw std::invalid_argument("vix_from_curve: malformed curve");
  double s = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) s += 0.5 * (u[i] - u[i - 1]) * (xi[i] + xi[i - 1]);
  return std::sqrt(s / delta);
}

std::size_t default_steps(double t) {
  return std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(312.0 * t)));
}

VixPricer::VixPricer(const ModelParams& mp, const GSurface& gsurf, double t, std::size_t n_steps,
                     std::size_t n_u, int kappa)
    : mp_(mp),
      gsurf_(&gsurf),
      t_(t),
      grid_{t, std::max<std::size_t>(1, n_steps)},
      u_(vix_u_grid(t, mp.delta, n_u)),
      kernel_(mp.kernel(), (t + mp.delta) * 1.01) {
  mp_.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("VixPricer: maturity must be >= 0");
  const double w = mp.w();
  const double half_eta2 = 0.5 * mp.eta * mp.eta;
  const double du = mp.delta / static_cast<double>(n_u - 1);
  trap_.assign(n_u, du / mp.delta);
  trap_.front() *= 0.5;
  trap_.back() *= 0.5;
  det_.resize(n_u);
  for (std::size_t i = 0; i < n_u; ++i) {
    const double u = u_[i];
    const double lambda = half_eta2 * (e_theta_square_integral(kernel_, u - t) -
                                       e_theta_square_integral(kernel_, u)) +
                          m_t(mp, t, u) - m_t(mp, 0.0, u);
    det_[i] = std::log(mp.xi0(u)) - gsurf.log_g(u, mp.ctmc.initial_state()) + w * w * lambda;
  }
  if (t > 0.0) {
    law_ = std::make_unique<HybridCellLaw>(mp.alpha, grid_.dt(), kappa);
    y_proj_ = std::make_unique<VolterraProjection>(KernelKind::e_theta, mp.kernel(), grid_, u_);
    m_proj_ = std::make_unique<VolterraProjection>(KernelKind::fractional, mp.kernel(), grid_, u_);
    const double s2 = mp.eta * mp.eta * sigma2_y(mp, t, mp.delta) +
                      (1.0 - mp.eta * mp.eta) * sigma2_m(mp, t, mp.delta);
    sigma2_n_ = std::max(0.0, w * w / (mp.delta * mp.delta) * s2);
  }
}

void VixPricer::regime_terms(const ctmc::CtmcPath& path, std::span<double> out) const {
  const double w = mp_.w();
  const std::size_t state_t = path.state_at(t_);
  for (std::size_t i = 0; i < u_.size(); ++i) {
    const double h = t_ > 0.0 ? h_piecewise(kernel_, mp_.ctmc, path, 0.0, t_, u_[i]) : 0.0;
    out[i] = gsurf_->log_g(u_[i] - t_, state_t) + w * h;
  }
}

ForwardCurveSample VixPricer::forward_variance(const ctmc::CtmcPath& path, const VolterraDriver& z,
                                               const VolterraDriver& zbar) const {
  ForwardCurveSample c;
  c.t = t_;
  c.u = u_;
  c.state_t = path.state_at(t_);
  c.xi.resize(u_.size());
  regime_terms(path, c.xi);
  std::vector<double> y(u_.size(), 0.0), m(u_.size(), 0.0);
  if (t_ > 0.0) {
    y_proj_->apply(z, y);
    m_proj_->apply(zbar, m);
  }
  const double w = mp_.w();
  for (std::size_t i = 0; i < u_.size(); ++i)
    c.xi[i] = std::exp(det_[i] + c.xi[i] + w * (mp_.eta * y[i] + mp_.eta_bar() * m[i]));
  return c;
}

double VixPricer::mu_n(const ctmc::CtmcPath& path) const {
  std::vector<double> r(u_.size());
  regime_terms(path, r);
  double s = 0.0;
  for (std::size_t i = 0; i < u_.size(); ++i) s += trap_[i] * (det_[i] + r[i]);
  return s;
}

void VixPricer::simple_payoff(const ctmc::CtmcPath& path, RandomStream& rng,
                              std::span<const double> strikes, std::span<double> out) const {
  thread_local VolterraDriver z, zbar;
  thread_local std::vector<double> r, y, m;
  const std::size_t n = u_.size();
  r.resize(n);
  y.assign(n, 0.0);
  m.assign(n, 0.0);
  regime_terms(path, r);
  if (t_ > 0.0) {
    draw_driver(*law_, grid_.n_steps, rng, z);
    draw_driver(*law_, grid_.n_steps, rng, zbar);
    if (mp_.eta != 0.0) y_proj_->apply(z, y);
    m_proj_->apply(zbar, m);
  }
  const double w = mp_.w();
  const double eta = mp_.eta;
  const double eta_bar = mp_.eta_bar();
  double v2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    v2 += trap_[i] * std::exp(det_[i] + r[i] + w * (eta * y[i] + eta_bar * m[i]));
  const double vix = std::sqrt(v2);
  out[0] = vix;
  for (std::size_t j = 0; j < strikes.size(); ++j) out[j + 1] = std::max(vix - strikes[j], 0.0);
}

void VixPricer::cv_payoff(const ctmc::CtmcPath& path, std::span<const double> strikes,
                          std::span<double> out) const {
  const double mu = 0.5 * mu_n(path);
  const double s2 = 0.25 * sigma2_n_;
  out[0] = std::exp(mu + 0.5 * s2);
  for (std::size_t j = 0; j < strikes.size(); ++j) out[j + 1] = black_scholes_call(mu, s2, strikes[j]);
}

namespace {

Smile to_smile(double t, std::span<const double> strikes, const std::vector<Estimate>& est) {
  Smile s;
  s.maturity = t;
  s.forward = est[0];
  s.strikes.assign(strikes.begin(), strikes.end());
  s.calls.assign(est.begin() + 1, est.end());
  return s;
}

}  // namespace

std::vector<std::size_t> vix_allocation(const ModelParams& mp, double t, const PricingOptions& opt) {
  const std::size_t budget = std::max(opt.n_paths, (opt.k_max + 1) * opt.n_min);
  return ctmc::stratified_allocation(mp.ctmc, t, opt.k_max, budget, opt.n_min, true);
}

Smile price_vix(const ModelParams& mp, const GSurface& gsurf, double t,
                std::span<const double> strikes, const PricingOptions& opt) {
  const std::size_t n_steps = opt.n_steps > 0 ? opt.n_steps : default_steps(t);
  const VixPricer pricer(mp, gsurf, t, n_steps, opt.n_u, opt.kappa);
  const std::size_t n_out = strikes.size() + 1;

  if (t == 0.0) {
    ctmc::CtmcPath path{{mp.ctmc.initial_state()}, {}, 0.0};
    std::vector<double> out(n_out);
    RandomStream rng(opt.sampling.seed);
    pricer.simple_payoff(path, rng, strikes, out);
    std::vector<Estimate> est(n_out);
    for (std::size_t j = 0; j < n_out; ++j) est[j] = {out[j], 0.0, 1, opt.method};
    return to_smile(t, strikes, est);
  }

  switch (opt.method) {
    case Method::simple: {
      auto payoff = [&](const ctmc::CtmcPath& path, RandomStream& rng, std::span<double> out) {
        pricer.simple_payoff(path, rng, strikes, out);
      };
      return to_smile(t, strikes, simple_estimate(mp.ctmc, t, opt.n_paths, n_out, payoff, opt.sampling));
    }
    case Method::cv: {
      auto payoff = [&](const ctmc::CtmcPath& path, RandomStream&, std::span<double> out) {
        pricer.cv_payoff(path, strikes, out);
      };
      auto est = simple_estimate(mp.ctmc, t, opt.n_paths, n_out, payoff, opt.sampling);
      for (auto& e : est) e.method = Method::cv;
      return to_smile(t, strikes, est);
    }
    case Method::mcvr: {
      auto payoff = [&](const ctmc::CtmcPath& path, RandomStream&, std::span<double> out) {
        pricer.cv_payoff(path, strikes, out);
      };
      const auto n_k = opt.allocation.empty() ? vix_allocation(mp, t, opt) : opt.allocation;
      return to_smile(t, strikes, mcvr_estimate(mp.ctmc, t, n_k, n_out, payoff, opt.sampling, true,
                                                      opt.normalize_strata));
    }
  }
  throw std::invalid_argument("price_vix: unknown method");
}

Smile price_vix_simple_mc(const ModelParams& mp, const GSurface& gsurf, double t,
                          std::span<const double> strikes, PricingOptions opt) {
  opt.method = Method::simple;
  return price_vix(mp, gsurf, t, strikes, opt);
}

Smile price_vix_cv(const ModelParams& mp, const GSurface& gsurf, double t,
                   std::span<const double> strikes, PricingOptions opt) {
  opt.method = Method::cv;
  return price_vix(mp, gsurf, t, strikes, opt);
}

Smile mcvr_vix(const ModelParams& mp, const GSurface& gsurf, double t,
               std::span<const double> strikes, PricingOptions opt) {
  opt.method = Method::mcvr;
  return price_vix(mp, gsurf, t, strikes, opt);
}

}  // namespace fouvol
