#pragma once

// G(w, tau, z) = E[exp(w int_0^tau theta E_theta(tau - s) mu(s) ds) | mu_0 = z]
// tabulated on a tau grid for every chain state and interpolated with a
// monotone cubic on log G.

#include <iosfwd>
#include <memory>
#include <vector>

#include "fouvol/estimate.hpp"
#include "fouvol/estimators.hpp"
#include "fouvol/fou.hpp"

namespace fouvol {

class GSurface {
 public:
  /// values[state][i] is G at tau_grid[i]. The grid must start at 0, be
  /// strictly increasing and have at least 4 nodes; values must be positive.
  GSurface(std::vector<double> tau_grid, std::vector<std::vector<double>> values,
           std::vector<std::vector<double>> std_errors, double w, std::size_t n_paths);

  double operator()(double tau, std::size_t state) const;
  /// Throws std::out_of_range outside [0, tau_max] or for an unknown state.
  double log_g(double tau, std::size_t state) const;

  const std::vector<double>& tau_grid() const noexcept { return tau_; }
  const std::vector<double>& values(std::size_t state) const { return values_.at(state); }
  const std::vector<double>& std_errors(std::size_t state) const { return errors_.at(state); }
  std::size_t n_states() const noexcept { return values_.size(); }
  double tau_max() const noexcept { return tau_.back(); }
  double w() const noexcept { return w_; }
  std::size_t n_paths() const noexcept { return n_paths_; }

  /// Delimited table with header tau,state,value,stderr preceded by
  /// "# w=" and "# n_paths=" lines; values are written to round-trip exactly.
  void write(std::ostream& os) const;
  /// Throws std::invalid_argument on malformed input.
  static GSurface read(std::istream& is);

 private:
  struct Interp;
  std::vector<double> tau_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<double>> errors_;
  double w_;
  std::size_t n_paths_;
  std::shared_ptr<const Interp> interp_;
};

struct GSurfaceOptions {
  Method method = Method::mcvr;  ///< simple or mcvr
  std::size_t n_paths = 20000;   ///< per tau node and state
  std::size_t k_max = 0;         ///< 0 picks the jump count with tail mass < 1e-9
  std::size_t n_min = 64;
  /// mcvr: per-jump-count ratio on the exact jump-count law (see mcvr_estimate)
  bool normalize_strata = true;
  /// mcvr sample sizes per [state][tau node][jump count]; empty derives them
  /// from the chain.
  std::vector<std::vector<std::vector<std::size_t>>> allocation;
  SamplingOptions sampling;
};

/// The allocation build_g_surface derives when none is given.
std::vector<std::vector<std::vector<std::size_t>>> g_surface_allocation(
    const ModelParams& mp, const std::vector<double>& tau_grid, const GSurfaceOptions& opt);

/// n equally spaced nodes on [0, tau_max].
std::vector<double> default_tau_grid(double tau_max, std::size_t n = 41);

/// Smallest k with P(more than k jumps on [0, T]) < tail, capped at k_cap.
std::size_t jump_cutoff(const ctmc::CtmcSpec& spec, double T, double tail = 1e-9,
                        std::size_t k_cap = 12);

GSurface build_g_surface(const ModelParams& mp, const std::vector<double>& tau_grid,
                         const GSurfaceOptions& opt = {});

}  // namespace fouvol
