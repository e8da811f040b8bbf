#pragma once

// Monte Carlo drivers over regime paths.
//
// A payoff functor has the signature
//   void(const ctmc::CtmcPath& path, RandomStream& rng, std::span<double> out)
// and writes one value per output (for example the future and one call per
// strike). It may draw further randomness (Brownian increments) from `rng`.
// Work is cut into fixed-size blocks, each with a stream derived from
// (seed, stratum, block), so results do not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fouvol/ctmc.hpp"
#include "fouvol/estimate.hpp"
#include "fouvol/parallel.hpp"
#include "fouvol/random.hpp"

namespace fouvol {

struct SamplingOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t block_size = 256;
};

/// Plain Monte Carlo: chain paths drawn from their law.
template <class Payoff>
std::vector<Estimate> simple_estimate(const ctmc::CtmcSpec& spec, double T, std::size_t n_paths,
                                      std::size_t n_out, Payoff&& payoff,
                                      const SamplingOptions& opt) {
  const std::size_t bs = std::max<std::size_t>(1, opt.block_size);
  const std::size_t n_blocks = (n_paths + bs - 1) / bs;
  std::vector<std::vector<RunningStats>> partial(n_blocks, std::vector<RunningStats>(n_out));
  parallel_blocks(n_blocks, opt.workers, [&](std::size_t b) {
    // The chain and the payoff draw from separate streams so that a change in
    // the number of jumps does not shift the payoff's Brownian draws.
    RandomStream chain_rng(opt.seed, {0x51u, b});
    RandomStream rng(opt.seed, {0x52u, b});
    std::vector<double> out(n_out);
    const std::size_t end = std::min(n_paths, (b + 1) * bs);
    for (std::size_t i = b * bs; i < end; ++i) {
      const auto path = ctmc::sample_path(spec, T, chain_rng);
      payoff(path, rng, std::span<double>(out));
      for (std::size_t j = 0; j < n_out; ++j) partial[b][j].add(out[j]);
    }
  });
  std::vector<RunningStats> total(n_out);
  for (const auto& block : partial)
    for (std::size_t j = 0; j < n_out; ++j) total[j].merge(block[j]);
  std::vector<Estimate> est(n_out);
  for (std::size_t j = 0; j < n_out; ++j) est[j] = total[j].estimate(Method::simple);
  return est;
}

/// Running means, variances and covariance of a pair (x, y).
class PairStats {
 public:
  void add(double x, double y) noexcept {
    ++n_;
    const double n = static_cast<double>(n_);
    const double dx = x - mx_;
    const double dy = y - my_;
    mx_ += dx / n;
    my_ += dy / n;
    sxx_ += dx * (x - mx_);
    syy_ += dy * (y - my_);
    sxy_ += dx * (y - my_);
  }
  void merge(const PairStats& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_), n = na + nb;
    const double dx = o.mx_ - mx_, dy = o.my_ - my_;
    sxx_ += o.sxx_ + dx * dx * na * nb / n;
    syy_ += o.syy_ + dy * dy * na * nb / n;
    sxy_ += o.sxy_ + dx * dy * na * nb / n;
    mx_ += dx * nb / n;
    my_ += dy * nb / n;
    n_ += o.n_;
  }
  std::size_t count() const noexcept { return n_; }
  double mean_x() const noexcept { return mx_; }
  double mean_y() const noexcept { return my_; }
  double var_x() const noexcept { return n_ > 1 ? sxx_ / static_cast<double>(n_ - 1) : 0.0; }
  double var_y() const noexcept { return n_ > 1 ? syy_ / static_cast<double>(n_ - 1) : 0.0; }
  double cov() const noexcept { return n_ > 1 ? sxy_ / static_cast<double>(n_ - 1) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mx_ = 0.0, my_ = 0.0, sxx_ = 0.0, syy_ = 0.0, sxy_ = 0.0;
};

/// Importance-sampled stratified estimator over jump counts 0..n_per_k.size()-1:
///   sum_k T^k/k! sum_{s in J(k)} (1/n_k) sum_i f(s, t_i) p(s, t_i),  t_i ~ Uniform(A_k).
/// When `payoff_is_path_function` is set the k = 0 stratum is evaluated once
/// (its payoff and density are deterministic).
///
/// With `normalize_strata` each jump count k is instead estimated by the ratio
///   P(k jumps | at most K jumps) * sum_s sum_i f p / sum_s sum_i p
/// using the exact jump-count law, which cancels the fluctuation of the
/// density weights (f = 1 is reproduced exactly) and replaces the truncated
/// tail by the conditional mean. The ratio is biased by O(1/n_k); its
/// standard error is the delta-method one.
template <class Payoff>
std::vector<Estimate> mcvr_estimate(const ctmc::CtmcSpec& spec, double T,
                                    std::span<const std::size_t> n_per_k, std::size_t n_out,
                                    Payoff&& payoff, const SamplingOptions& opt,
                                    bool payoff_is_path_function, bool normalize_strata = false) {
  struct Job {
    std::size_t k;
    std::size_t stratum;
    std::size_t first;
    std::size_t last;
  };
  struct Stratum {
    std::size_t k;
    std::vector<std::size_t> states;
    std::size_t n;
  };
  std::vector<Stratum> strata;
  for (std::size_t k = 0; k < n_per_k.size(); ++k) {
    if (n_per_k[k] == 0) continue;
    const std::size_t n = (k == 0 && payoff_is_path_function) ? 1 : n_per_k[k];
    for (auto& seq : ctmc::enumerate_sequences(spec, k)) strata.push_back({k, std::move(seq), n});
  }
  const std::size_t bs = std::max<std::size_t>(1, opt.block_size);
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < strata.size(); ++s)
    for (std::size_t first = 0; first < strata[s].n; first += bs)
      jobs.push_back({strata[s].k, s, first, std::min(strata[s].n, first + bs)});

  std::vector<std::vector<PairStats>> partial(jobs.size(), std::vector<PairStats>(n_out));
  parallel_blocks(jobs.size(), opt.workers, [&](std::size_t b) {
    const Job& job = jobs[b];
    const Stratum& st = strata[job.stratum];
    RandomStream rng(opt.seed, {0x3cu, job.k, job.stratum, job.first / bs});
    std::vector<double> out(n_out);
    ctmc::CtmcPath path;
    path.states = st.states;
    path.horizon = T;
    for (std::size_t i = job.first; i < job.last; ++i) {
      if (st.k > 0) path.dwell = ctmc::sample_dwell_uniform(st.k, T, rng);
      const double density = ctmc::path_density(spec, path);
      if (density > 0.0) {
        payoff(path, rng, std::span<double>(out));
      } else {
        std::fill(out.begin(), out.end(), 0.0);
      }
      for (std::size_t j = 0; j < n_out; ++j) partial[b][j].add(out[j] * density, density);
    }
  });

  std::vector<std::vector<PairStats>> per_stratum(strata.size(), std::vector<PairStats>(n_out));
  for (std::size_t b = 0; b < jobs.size(); ++b)
    for (std::size_t j = 0; j < n_out; ++j) per_stratum[jobs[b].stratum][j].merge(partial[b][j]);

  std::vector<Estimate> est(n_out);
  std::vector<double> var(n_out, 0.0);
  std::size_t n_total = 0;
  for (const auto& st : strata) n_total += st.n;
  if (!normalize_strata) {
    for (std::size_t s = 0; s < strata.size(); ++s) {
      const double vol = ctmc::simplex_volume(strata[s].k, T);
      for (std::size_t j = 0; j < n_out; ++j) {
        const auto& ps = per_stratum[s][j];
        est[j].value += vol * ps.mean_x();
        var[j] += vol * vol * ps.var_x() / static_cast<double>(ps.count());
      }
    }
  } else {
    auto mass = ctmc::jump_count_probabilities(spec, T, n_per_k.size() - 1);
    double kept = 0.0;
    for (std::size_t k = 0; k < mass.size(); ++k) kept += n_per_k[k] > 0 ? mass[k] : 0.0;
    if (kept > 0.0)
      for (auto& x : mass) x /= kept;
    for (std::size_t k = 0; k < n_per_k.size(); ++k) {
      for (std::size_t j = 0; j < n_out; ++j) {
        double num = 0.0, den = 0.0;
        for (std::size_t s = 0; s < strata.size(); ++s)
          if (strata[s].k == k) {
            num += per_stratum[s][j].mean_x();
            den += per_stratum[s][j].mean_y();
          }
        if (!(den > 0.0)) continue;
        const double ratio = num / den;
        est[j].value += mass[k] * ratio;
        double v = 0.0;
        for (std::size_t s = 0; s < strata.size(); ++s)
          if (strata[s].k == k) {
            const auto& ps = per_stratum[s][j];
            const double r_var = ps.var_x() - 2.0 * ratio * ps.cov() + ratio * ratio * ps.var_y();
            v += std::max(r_var, 0.0) / static_cast<double>(ps.count());
          }
        var[j] += mass[k] * mass[k] * v / (den * den);
      }
    }
  }
  for (std::size_t j = 0; j < n_out; ++j) {
    est[j].std_error = std::sqrt(var[j]);
    est[j].n = n_total;
    est[j].method = Method::mcvr;
  }
  return est;
}

}  // namespace fouvol
