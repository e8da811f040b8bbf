#include "fouvol/g_surface.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74 pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fouvol {

struct GSurface::Interp {
  std::vector<boost::math::interpolators::pchip<std::vector<double>>> log_g;
};

GSurface::GSurface(std::vector<double> tau_grid, std::vector<std::vector<double>> values,
                   std::vector<std::vector<double>> std_errors, double w, std::size_t n_paths)
    : tau_(std::move(tau_grid)),
      values_(std::move(values)),
      errors_(std::move(std_errors)),
      w_(w),
      n_paths_(n_paths) {
  if (tau_.size() < 4) throw std::invalid_argument("GSurface: need at least 4 tau nodes");
  if (tau_.front() != 0.0) throw std::invalid_argument("GSurface: tau grid must start at 0");
  for (std::size_t i = 1; i < tau_.size(); ++i)
    if (!(tau_[i] > tau_[i - 1]))
      throw std::invalid_argument("GSurface: tau grid must be strictly increasing");
  if (values_.empty()) throw std::invalid_argument("GSurface: no states");
  if (errors_.empty()) errors_.assign(values_.size(), std::vector<double>(tau_.size(), 0.0));
  if (errors_.size() != values_.size())
    throw std::invalid_argument("GSurface: values and std errors disagree on the state count");
  auto interp = std::make_shared<Interp>();
  for (std::size_t s = 0; s < values_.size(); ++s) {
    if (values_[s].size() != tau_.size() || errors_[s].size() != tau_.size())
      throw std::invalid_argument("GSurface: row length differs from the tau grid");
    std::vector<double> x = tau_;
    std::vector<double> y(tau_.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!(values_[s][i] > 0.0) || !std::isfinite(values_[s][i]))
        throw std::invalid_argument("GSurface: values must be positive and finite");
      y[i] = std::log(values_[s][i]);
    }
    interp->log_g.emplace_back(std::move(x), std::move(y));
  }
  interp_ = std::move(interp);
}

double GSurface::log_g(double tau, std::size_t state) const {
  if (state >= values_.size()) throw std::out_of_range("GSurface: unknown state");
  if (tau < 0.0 || tau > tau_.back()) {
    // tolerate rounding at the right edge
    if (tau > tau_.back() && tau <= tau_.back() * (1.0 + 1e-12)) tau = tau_.back();
    else
      throw std::out_of_range("GSurface: tau " + std::to_string(tau) + " outside [0, " +
                              std::to_string(tau_.back()) + "]");
  }
  return interp_->log_g[state](tau);
}

double GSurface::operator()(double tau, std::size_t state) const {
  return std::exp(log_g(tau, state));
}

void GSurface::write(std::ostream& os) const {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "# w=" << w_ << "\n# n_paths=" << n_paths_ << "\ntau,state,value,stderr\n";
  for (std::size_t s = 0; s < values_.size(); ++s)
    for (std::size_t i = 0; i < tau_.size(); ++i)
      os << tau_[i] << ',' << s << ',' << values_[s][i] << ',' << errors_[s][i] << '\n';
  os.precision(old);
}

GSurface GSurface::read(std::istream& is) {
  double w = 0.0;
  std::size_t n_paths = 0;
  bool header = false;
  std::vector<std::vector<double>> taus, values, errors;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("GSurface line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# w=", 0) == 0) {
      w = std::stod(line.substr(4));
      continue;
    }
    if (line.rfind("# n_paths=", 0) == 0) {
      n_paths = std::stoul(line.substr(10));
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      if (line != "tau,state,value,stderr") fail("expected header tau,state,value,stderr");
      header = true;
      continue;
    }
    std::istringstream row(line);
    double tau, value, err;
    std::size_t state;
    char c1, c2, c3;
    if (!(row >> tau >> c1 >> state >> c2 >> value >> c3 >> err) || c1 != ',' || c2 != ',' ||
        c3 != ',')
      fail("expected four comma-separated numbers");
    if (state > 64) fail("state index too large");
    if (state >= taus.size()) {
      taus.resize(state + 1);
      values.resize(state + 1);
      errors.resize(state + 1);
    }
    taus[state].push_back(tau);
    values[state].push_back(value);
    errors[state].push_back(err);
  }
  if (!header || taus.empty()) throw std::invalid_argument("GSurface: empty input");
  for (const auto& t : taus)
    if (t != taus.front()) throw std::invalid_argument("GSurface: states use different tau grids");
  return GSurface(taus.front(), std::move(values), std::move(errors), w, n_paths);
}

std::vector<double> default_tau_grid(double tau_max, std::size_t n) {
  if (!(tau_max > 0.0) || n < 4) throw std::invalid_argument("default_tau_grid: bad arguments");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = tau_max * static_cast<double>(i) / static_cast<double>(n - 1);
  return grid;
}

std::size_t jump_cutoff(const ctmc::CtmcSpec& spec, double T, double tail, std::size_t k_cap) {
  const auto p = ctmc::jump_count_probabilities(spec, T, k_cap);
  double mass = 0.0;
  for (std::size_t k = 0; k <= k_cap; ++k) {
    mass += p[k];
    if (1.0 - mass < tail) return k;
  }
  return k_cap;
}

std::vector<std::vector<std::vector<std::size_t>>> g_surface_allocation(
    const ModelParams& mp, const std::vector<double>& tau_grid, const GSurfaceOptions& opt) {
  std::vector<std::vector<std::vector<std::size_t>>> out(mp.ctmc.size());
  for (std::size_t s = 0; s < mp.ctmc.size(); ++s) {
    const auto spec = mp.ctmc.with_initial_state(s);
    for (double tau : tau_grid) {
      if (tau <= 0.0) {
        out[s].push_back({1});
        continue;
      }
      const std::size_t k_max = opt.k_max > 0 ? opt.k_max : jump_cutoff(spec, tau);
      const std::size_t budget = std::max(opt.n_paths, (k_max + 1) * opt.n_min);
      out[s].push_back(ctmc::stratified_allocation(spec, tau, k_max, budget, opt.n_min, true));
    }
  }
  return out;
}

GSurface build_g_surface(const ModelParams& mp, const std::vector<double>& tau_grid,
                         const GSurfaceOptions& opt) {
  if (tau_grid.empty()) throw std::invalid_argument("build_g_surface: empty tau grid");
  const double w = mp.w();
  const double tau_max = tau_grid.back();
  const specfun::KernelTable kernel(mp.kernel(), tau_max);
  const std::size_t m = mp.ctmc.size();
  const std::size_t n_tau = tau_grid.size();
  std::vector<std::vector<double>> values(m, std::vector<double>(n_tau, 1.0));
  std::vector<std::vector<double>> errors(m, std::vector<double>(n_tau, 0.0));

  const auto alloc = opt.method == Method::mcvr && opt.allocation.empty()
                         ? g_surface_allocation(mp, tau_grid, opt)
                         : opt.allocation;
  if (opt.method == Method::mcvr && (alloc.size() != m || alloc.front().size() != n_tau))
    throw std::invalid_argument("build_g_surface: allocation does not match states and grid");

  if (w == 0.0) return GSurface(tau_grid, values, errors, w, opt.n_paths);

  for (std::size_t s = 0; s < m; ++s) {
    const auto spec = mp.ctmc.with_initial_state(s);
    if (opt.method == Method::simple) {
      // One chain path on [0, tau_max] serves every node, so the estimated
      // curve is smooth in tau.
      auto payoff = [&](const ctmc::CtmcPath& path, RandomStream&, std::span<double> out) {
        for (std::size_t i = 0; i < n_tau; ++i) {
          const double tau = tau_grid[i];
          out[i] = tau > 0.0 ? std::exp(w * h_piecewise(kernel, spec, path, 0.0, tau, tau)) : 1.0;
        }
      };
      SamplingOptions so = opt.sampling;
      so.seed = derive_seed(opt.sampling.seed, {0x6au, s});
      const auto est = simple_estimate(spec, tau_max, opt.n_paths, n_tau, payoff, so);
      for (std::size_t i = 0; i < n_tau; ++i) {
        values[s][i] = est[i].value;
        errors[s][i] = est[i].std_error;
      }
    } else if (opt.method == Method::mcvr) {
      for (std::size_t i = 0; i < n_tau; ++i) {
        const double tau = tau_grid[i];
        if (tau <= 0.0) continue;
        const auto& n_k = alloc[s][i];
        auto payoff = [&](const ctmc::CtmcPath& path, RandomStream&, std::span<double> out) {
          out[0] = std::exp(w * h_piecewise(kernel, spec, path, 0.0, tau, tau));
        };
        SamplingOptions so = opt.sampling;
        so.seed = derive_seed(opt.sampling.seed, {0x6bu, s, i});
        const auto est = mcvr_estimate(spec, tau, n_k, 1, payoff, so, true, opt.normalize_strata);
        values[s][i] = est[0].value;
        errors[s][i] = est[0].std_error;
      }
    } else {
      throw std::invalid_argument("build_g_surface: method must be simple or mcvr");
    }
  }
  return GSurface(tau_grid, std::move(values), std::move(errors), w, opt.n_paths);
}

}  // namespace fouvol
