#include "fouvol/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fouvol::ctmc {

CtmcSpec::CtmcSpec(std::vector<double> values, std::vector<double> intensities,
                   std::vector<std::vector<double>> transition, std::size_t initial_state)
    : values_(std::move(values)),
      intensities_(std::move(intensities)),
      transition_(std::move(transition)),
      initial_state_(initial_state) {
  const std::size_t m = values_.size();
  if (m == 0) throw std::invalid_argument("CtmcSpec: at least one state is required");
  if (intensities_.size() != m || transition_.size() != m)
    throw std::invalid_argument("CtmcSpec: values, intensities and transition sizes differ");
  if (initial_state_ >= m) throw std::invalid_argument("CtmcSpec: initial state out of range");
  for (std::size_t i = 0; i < m; ++i) {
    if (!(intensities_[i] >= 0.0) || !std::isfinite(intensities_[i]))
      throw std::invalid_argument("CtmcSpec: intensities must be finite and >= 0");
    if (transition_[i].size() != m)
      throw std::invalid_argument("CtmcSpec: transition matrix must be square");
  }
  if (m == 1 && intensities_[0] > 0.0)
    throw std::invalid_argument("CtmcSpec: a single-state chain cannot jump");
  if (m == 2) {
    for (std::size_t i = 0; i < 2; ++i) {
      const double off = transition_[i][1 - i];
      if (transition_[i][i] != 0.0 || (off != 0.0 && off != 1.0))
        throw std::invalid_argument("CtmcSpec: two-state chain must swap states on every jump");
    }
    transition_ = {{0.0, 1.0}, {1.0, 0.0}};
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (transition_[i][i] != 0.0)
      throw std::invalid_argument("CtmcSpec: transition diagonal must be zero");
    double row = 0.0;
    for (double p : transition_[i]) {
      if (!(p >= 0.0)) throw std::invalid_argument("CtmcSpec: negative transition probability");
      row += p;
    }
    const bool absorbing_ok = intensities_[i] == 0.0 && row == 0.0;
    if (!absorbing_ok && std::abs(row - 1.0) > 1e-12)
      throw std::invalid_argument("CtmcSpec: transition row " + std::to_string(i) +
                                  " must sum to 1");
  }
}

CtmcSpec CtmcSpec::two_state(double mu1, double mu2, double q1, double q2,
                             std::size_t initial_state) {
  return CtmcSpec({mu1, mu2}, {q1, q2}, {{0.0, 1.0}, {1.0, 0.0}}, initial_state);
}

CtmcSpec CtmcSpec::constant(double mu) { return CtmcSpec({mu}, {0.0}, {{0.0}}, 0); }

CtmcSpec CtmcSpec::uniform_jumps(std::vector<double> values, std::vector<double> intensities,
                                 std::size_t initial_state) {
  const std::size_t m = values.size();
  std::vector<std::vector<double>> p(m, std::vector<double>(m, 0.0));
  if (m > 1)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) p[i][j] = 1.0 / static_cast<double>(m - 1);
  return CtmcSpec(std::move(values), std::move(intensities), std::move(p), initial_state);
}

double CtmcSpec::max_intensity() const noexcept {
  return *std::max_element(intensities_.begin(), intensities_.end());
}

CtmcSpec CtmcSpec::with_initial_state(std::size_t s) const {
  CtmcSpec copy = *this;
  if (s >= size()) throw std::invalid_argument("CtmcSpec: initial state out of range");
  copy.initial_state_ = s;
  return copy;
}

double CtmcPath::final_dwell() const noexcept {
  return horizon - std::accumulate(dwell.begin(), dwell.end(), 0.0);
}

std::vector<double> CtmcPath::jump_times() const {
  std::vector<double> out(dwell.size());
  std::partial_sum(dwell.begin(), dwell.end(), out.begin());
  return out;
}

std::size_t CtmcPath::state_at(double time) const {
  double edge = 0.0;
  for (std::size_t i = 0; i < dwell.size(); ++i) {
    edge += dwell[i];
    if (time < edge) return states[i];
  }
  return states.back();
}

CtmcPath sample_path(const CtmcSpec& spec, double T, RandomStream& rng) {
  if (!(T > 0.0)) throw std::invalid_argument("sample_path: horizon must be positive");
  CtmcPath path;
  path.horizon = T;
  std::size_t s = spec.initial_state();
  path.states.push_back(s);
  double elapsed = 0.0;
  for (;;) {
    const double q = spec.intensity(s);
    if (q <= 0.0) break;
    const double d = rng.exponential(q);
    if (elapsed + d >= T) break;
    elapsed += d;
    path.dwell.push_back(d);
    // next state from the transition row
    const auto& row = spec.transition_matrix()[s];
    double u = rng.uniform();
    std::size_t next = s;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] <= 0.0) continue;
      next = j;
      if (u < row[j]) break;
      u -= row[j];
    }
    s = next;
    path.states.push_back(s);
  }
  return path;
}

double path_density(const CtmcSpec& spec, const CtmcPath& path) {
  if (path.states.size() != path.dwell.size() + 1)
    throw std::invalid_argument("path_density: need one more state than dwelling times");
  double used = 0.0;
  double log_density = 0.0;
  for (std::size_t i = 0; i < path.dwell.size(); ++i) {
    const double t = path.dwell[i];
    if (!(t > 0.0)) return 0.0;
    const std::size_t a = path.states[i];
    const std::size_t b = path.states[i + 1];
    const double p = spec.transition(a, b);
    const double q = spec.intensity(a);
    if (p <= 0.0 || q <= 0.0) return 0.0;
    log_density += std::log(p * q) - q * t;
    used += t;
  }
  if (used >= path.horizon) return 0.0;
  log_density -= spec.intensity(path.states.back()) * (path.horizon - used);
  return std::exp(log_density);
}

std::vector<std::vector<std::size_t>> enumerate_sequences(const CtmcSpec& spec, std::size_t k) {
  std::vector<std::vector<std::size_t>> out{{spec.initial_state()}};
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<std::vector<std::size_t>> grown;
    for (const auto& seq : out) {
      const std::size_t last = seq.back();
      if (spec.intensity(last) <= 0.0) continue;
      for (std::size_t j = 0; j < spec.size(); ++j) {
        if (spec.transition(last, j) <= 0.0) continue;
        auto next = seq;
        next.push_back(j);
        grown.push_back(std::move(next));
      }
    }
    out = std::move(grown);
  }
  return out;
}

std::vector<double> sample_dwell_uniform(std::size_t k, double T, RandomStream& rng) {
  if (k == 0) throw std::invalid_argument("sample_dwell_uniform: k must be >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("sample_dwell_uniform: T must be positive");
  // Flat Dirichlet on the k-simplex from k+1 unit exponentials; the last
  // coordinate is dropped.
  std::vector<double> e(k + 1);
  double total = 0.0;
  for (auto& x : e) {
    x = -std::log(rng.uniform());
    total += x;
  }
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = T * e[i] / total;
  return out;
}

double simplex_volume(std::size_t k, double T) {
  return std::exp(static_cast<double>(k) * std::log(T) - std::lgamma(static_cast<double>(k) + 1.0));
}

std::vector<double> jump_count_probabilities(const CtmcSpec& spec, double T, std::size_t k_max) {
  const std::size_t m = spec.size();
  const double rate = spec.max_intensity();
  std::vector<double> out(k_max + 1, 0.0);
  if (rate <= 0.0 || T <= 0.0) {
    out[0] = 1.0;
    return out;
  }
  // Uniformised chain: each Poisson(rate) event is a real jump from state i
  // with probability q_i / rate, otherwise a self-loop. Track (state, real
  // jumps) with jump counts above k_max discarded.
  const double lambda = rate * T;
  const std::size_t n_max =
      static_cast<std::size_t>(lambda + 12.0 * std::sqrt(lambda) + 40.0);
  std::vector<double> dist(m * (k_max + 1), 0.0), next(dist.size());
  dist[spec.initial_state() * (k_max + 1)] = 1.0;
  double log_pois = -lambda;
  for (std::size_t n = 0;; ++n) {
    const double w = std::exp(log_pois);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k <= k_max; ++k) out[k] += w * dist[i * (k_max + 1) + k];
    if (n == n_max) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double stay = 1.0 - spec.intensity(i) / rate;
      const double go = spec.intensity(i) / rate;
      for (std::size_t k = 0; k <= k_max; ++k) {
        const double p = dist[i * (k_max + 1) + k];
        if (p == 0.0) continue;
        next[i * (k_max + 1) + k] += stay * p;
        if (k == k_max || go == 0.0) continue;
        for (std::size_t j = 0; j < m; ++j)
          next[j * (k_max + 1) + k + 1] += go * spec.transition(i, j) * p;
      }
    }
    std::swap(dist, next);
    log_pois += std::log(lambda) - std::log(static_cast<double>(n + 1));
  }
  return out;
}

std::vector<std::size_t> stratified_allocation(const CtmcSpec& spec, double T, std::size_t k_max,
                                               std::size_t n_total, std::size_t n_min,
                                               bool k0_exact) {
  if (n_total < (k_max + 1) * n_min)
    throw std::invalid_argument("stratified_allocation: budget below (k_max + 1) * n_min");
  auto mass = jump_count_probabilities(spec, T, k_max);
  std::vector<std::size_t> n(k_max + 1, n_min);
  std::size_t spare = n_total - (k_max + 1) * n_min;
  if (k0_exact && k_max > 0) {
    n[0] = 1;
    spare += n_min - 1;
    mass[0] = 0.0;
  }
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (total <= 0.0) return n;
  for (std::size_t k = 0; k <= k_max; ++k)
    n[k] += static_cast<std::size_t>(std::floor(static_cast<double>(spare) * mass[k] / total));
  return n;
}

double value_at(const CtmcSpec& spec, const CtmcPath& path, double time) {
  if (time < 0.0 || time > path.horizon)
    throw std::out_of_range("value_at: time outside [0, horizon]");
  return spec.value(path.state_at(time));
}

}  // namespace fouvol::ctmc
