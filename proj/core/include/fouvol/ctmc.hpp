#pragma once

// Finite-state continuous-time Markov chain for the regime-switching mean
// level, with the exact path density used by the importance-sampled
// estimators.

#include <cstddef>
#include <vector>

#include "fouvol/random.hpp"

namespace fouvol::ctmc {

class CtmcSpec {
 public:
  /// Throws std::invalid_argument when the chain is malformed: mismatched
  /// sizes, negative intensities, nonzero diagonal, or a row of a state with
  /// positive intensity that does not sum to one. For m = 2 the transition
  /// matrix is forced to the swap and the argument is only checked.
  CtmcSpec(std::vector<double> values, std::vector<double> intensities,
           std::vector<std::vector<double>> transition, std::size_t initial_state = 0);

  static CtmcSpec two_state(double mu1, double mu2, double q1, double q2,
                            std::size_t initial_state = 0);
  /// Single absorbing state.
  static CtmcSpec constant(double mu);
  /// Uniform off-diagonal transition probabilities.
  static CtmcSpec uniform_jumps(std::vector<double> values, std::vector<double> intensities,
                                std::size_t initial_state = 0);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& intensities() const noexcept { return intensities_; }
  double value(std::size_t i) const { return values_.at(i); }
  double intensity(std::size_t i) const { return intensities_.at(i); }
  double transition(std::size_t i, std::size_t j) const { return transition_.at(i).at(j); }
  const std::vector<std::vector<double>>& transition_matrix() const noexcept { return transition_; }
  std::size_t initial_state() const noexcept { return initial_state_; }
  double max_intensity() const noexcept;

  CtmcSpec with_initial_state(std::size_t s) const;

 private:
  std::vector<double> values_;
  std::vector<double> intensities_;
  std::vector<std::vector<double>> transition_;
  std::size_t initial_state_;
};

/// A path on [0, horizon]: states s_0..s_k and dwelling times t_0..t_{k-1};
/// the final dwelling time is horizon - sum(dwell).
struct CtmcPath {
  std::vector<std::size_t> states;
  std::vector<double> dwell;
  double horizon = 0.0;

  std::size_t jumps() const noexcept { return dwell.size(); }
  double final_dwell() const noexcept;
  /// Jump epochs t_0, t_0 + t_1, ...
  std::vector<double> jump_times() const;
  std::size_t state_at(double time) const;
};

CtmcPath sample_path(const CtmcSpec& spec, double T, RandomStream& rng);

/// Density of (states, dwell) under the chain law; 0 outside A_k or for
/// sequences with a zero transition probability. Throws std::invalid_argument
/// when states.size() != dwell.size() + 1.
double path_density(const CtmcSpec& spec, const CtmcPath& path);

/// All state sequences of length k + 1 from the initial state whose
/// transitions have positive probability.
std::vector<std::vector<std::size_t>> enumerate_sequences(const CtmcSpec& spec, std::size_t k);

/// Uniform sample on A_k = {t_i > 0, sum t_i < T}; density k!/T^k.
std::vector<double> sample_dwell_uniform(std::size_t k, double T, RandomStream& rng);

/// T^k / k!
double simplex_volume(std::size_t k, double T);

/// P(exactly k jumps on [0, T]) for k = 0..k_max, by uniformisation.
std::vector<double> jump_count_probabilities(const CtmcSpec& spec, double T, std::size_t k_max);

/// Per-jump-count sample sizes: n_min for every k <= k_max plus the remaining
/// budget split in proportion to the jump-count mass. With `k0_exact` the
/// zero-jump stratum gets a single sample (its payoff is deterministic) and
/// its share goes to k >= 1. Throws std::invalid_argument when
/// n_total < (k_max + 1) n_min.
std::vector<std::size_t> stratified_allocation(const CtmcSpec& spec, double T, std::size_t k_max,
                                               std::size_t n_total, std::size_t n_min,
                                               bool k0_exact = false);

/// mu(time), right-continuous at the jump epochs. Throws std::out_of_range
/// for time outside [0, horizon].
double value_at(const CtmcSpec& spec, const CtmcPath& path, double time);

}  // namespace fouvol::ctmc
