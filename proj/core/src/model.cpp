#include "fouvol/model.hpp"

#include <cmath>
#include <stdexcept>

namespace fouvol {

namespace {

double log_a0(const ModelParams& mp, const specfun::KernelTable& kernel, const GSurface& gsurf,
              double u) {
  const double w = mp.w();
  const double e0 = 0.5 * mp.eta * mp.eta * e_theta_square_integral(kernel, u);
  const double m0 = m_t(mp, 0.0, u);
  const double g = u > 0.0 ? mp.x0 * (1.0 - kernel.ml1(u)) : 0.0;
  return std::log(mp.xi0(u)) - gsurf.log_g(u, mp.ctmc.initial_state()) - w * (g - mp.x0) -
         w * w * (m0 + e0);
}

}  // namespace

std::vector<double> a0_from_xi0(const ModelParams& mp, std::span<const double> u_grid,
                                const GSurface& gsurf) {
  double u_max = 0.0;
  for (double u : u_grid) u_max = std::max(u_max, u);
  const specfun::KernelTable kernel(mp.kernel(), u_max);
  std::vector<double> out;
  out.reserve(u_grid.size());
  for (double u : u_grid) out.push_back(std::exp(log_a0(mp, kernel, gsurf, u)));
  return out;
}

ModelSimulator::ModelSimulator(const ModelParams& mp, const GSurface& gsurf, TimeGrid grid,
                               int kappa)
    : mp_(mp),
      grid_(grid),
      kernel_(mp.kernel(), grid.horizon * 1.01),
      y_scheme_(KernelKind::e_theta, mp.kernel(), grid, kappa),
      m_scheme_(KernelKind::fractional, mp.kernel(), grid, kappa) {
  mp_.validate();
  const double w = mp.w();
  log_a0_shift_.resize(grid.n_steps + 1);
  for (std::size_t i = 0; i <= grid.n_steps; ++i) {
    const double u = grid.time(i);
    const double g = u > 0.0 ? mp.x0 * (1.0 - kernel_.ml1(u)) : 0.0;
    log_a0_shift_[i] = log_a0(mp, kernel_, gsurf, u) + w * (g - mp.x0);
  }
}

void ModelSimulator::draw_brownian(RandomStream& rng, PathBundle& b) const {
  b.grid = grid_;
  draw_driver(y_scheme_.law(), grid_.n_steps, rng, b.z);
  draw_driver(m_scheme_.law(), grid_.n_steps, rng, b.zbar);
  b.dwbar.resize(grid_.n_steps);
  const double sd = std::sqrt(grid_.dt());
  for (auto& x : b.dwbar) x = sd * rng.normal();
}

void ModelSimulator::variance(const PathBundle& b, std::span<double> v) const {
  const std::size_t n = grid_.n_steps;
  if (v.size() != n + 1) throw std::invalid_argument("variance: output needs n_steps + 1 entries");
  if (b.ctmc_path.horizon < grid_.horizon * (1.0 - 1e-12))
    throw std::invalid_argument("variance: regime path shorter than the grid");
  const double w = mp_.w();
  const double eta = mp_.eta;
  const double eta_bar = mp_.eta_bar();
  v[0] = std::exp(log_a0_shift_[0]);
  for (std::size_t i = 1; i <= n; ++i) {
    const double u = grid_.time(i);
    const double h = h_piecewise(kernel_, mp_.ctmc, b.ctmc_path, 0.0, u, u);
    const double y = eta != 0.0 ? y_scheme_.value_at(b.z, i) : 0.0;
    const double m = m_scheme_.value_at(b.zbar, i);
    v[i] = std::exp(log_a0_shift_[i] + w * (h + eta * y + eta_bar * m));
  }
}

double ModelSimulator::terminal_log_price(const PathBundle& b, std::span<const double> v,
                                          double s0) const {
  const std::size_t n = grid_.n_steps;
  const double h = grid_.dt();
  const double rho = mp_.rho;
  const double rho_bar = mp_.rho_bar();
  const double eta = mp_.eta;
  const double eta_bar = mp_.eta_bar();
  double x = s0;
  for (std::size_t i = 0; i < n; ++i) {
    const double db = rho * (eta * b.z.dz[i] + eta_bar * b.zbar.dz[i]) + rho_bar * b.dwbar[i];
    x += std::sqrt(v[i]) * db - 0.5 * v[i] * h;
  }
  return x;
}

std::vector<double> simulate_variance(const ModelParams& mp, const PathBundle& bundle,
                                      const GSurface& gsurf) {
  const ModelSimulator sim(mp, gsurf, bundle.grid, bundle.z.kappa);
  std::vector<double> v(bundle.grid.n_steps + 1);
  sim.variance(bundle, v);
  return v;
}

std::vector<double> simulate_price(const ModelParams& mp, std::span<const double> v,
                                   const PathBundle& bundle, double s0_level) {
  const std::size_t n = bundle.grid.n_steps;
  if (v.size() != n + 1) throw std::invalid_argument("simulate_price: variance path size");
  const double h = bundle.grid.dt();
  const double rho_bar = mp.rho_bar();
  const double eta_bar = mp.eta_bar();
  std::vector<double> s(n + 1);
  s[0] = s0_level;
  double x = std::log(s0_level);
  for (std::size_t i = 0; i < n; ++i) {
    const double db =
        mp.rho * (mp.eta * bundle.z.dz[i] + eta_bar * bundle.zbar.dz[i]) + rho_bar * bundle.dwbar[i];
    x += std::sqrt(v[i]) * db - 0.5 * v[i] * h;
    s[i + 1] = std::exp(x);
  }
  return s;
}

}  // namespace fouvol
