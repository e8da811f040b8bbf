#pragma once

// Path simulation of the regime-switching rBergomi model:
//   v_u = A0(u) exp(w (X_u - x0 + eta_bar M_u)),  X = g + H + eta Y,
//   dS = S sqrt(v) dB,  B = rho (eta Z + eta_bar Z_bar) + rho_bar W_bar.

#include <span>
#include <vector>

#include "fouvol/ctmc.hpp"
#include "fouvol/fou.hpp"
#include "fouvol/g_surface.hpp"
#include "fouvol/volterra.hpp"

namespace fouvol {

/// Brownian drivers and regime path of one simulated scenario.
struct PathBundle {
  TimeGrid grid;
  VolterraDriver z;       ///< drives Y
  VolterraDriver zbar;    ///< drives M
  std::vector<double> dwbar;
  ctmc::CtmcPath ctmc_path;
};

/// A0(u) = xi0(u) / G(w, u, mu0) exp(-w (g(u) - x0) - w^2 (m0(u) + e0(u))).
/// Throws std::out_of_range when the surface does not cover u_grid.
std::vector<double> a0_from_xi0(const ModelParams& mp, std::span<const double> u_grid,
                                const GSurface& gsurf);

/// Precomputed weights for repeated simulation on one grid.
class ModelSimulator {
 public:
  ModelSimulator(const ModelParams& mp, const GSurface& gsurf, TimeGrid grid, int kappa = 1);

  const ModelParams& params() const noexcept { return mp_; }
  const TimeGrid& grid() const noexcept { return grid_; }

  /// Fresh Brownian drivers; the chain path is left untouched.
  void draw_brownian(RandomStream& rng, PathBundle& b) const;
  /// v at t_0..t_N.
  void variance(const PathBundle& b, std::span<double> v) const;
  /// log S_N by log-Euler from log S_0 = s0.
  double terminal_log_price(const PathBundle& b, std::span<const double> v, double s0 = 0.0) const;

 private:
  ModelParams mp_;
  TimeGrid grid_;
  specfun::KernelTable kernel_;
  HybridScheme y_scheme_;
  HybridScheme m_scheme_;
  std::vector<double> log_a0_shift_;  // log A0(t_i) + w (g(t_i) - x0)
};

std::vector<double> simulate_variance(const ModelParams& mp, const PathBundle& bundle,
                                      const GSurface& gsurf);

/// Price path S_0..S_N with S_0 = s0_level.
std::vector<double> simulate_price(const ModelParams& mp, std::span<const double> v,
                                   const PathBundle& bundle, double s0_level = 1.0);

}  // namespace fouvol
