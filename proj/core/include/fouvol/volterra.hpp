#pragma once

// Gaussian Volterra integrals int_0^t k(t - s) dZ_s for the power kernel
// K(t) = t^(alpha-1) and the resolvent kernel E_theta, by the hybrid scheme:
// the kernel is integrated exactly against dZ on the kappa cells nearest to
// the evaluation point and evaluated at optimal points further away.

#include <span>
#include <vector>

#include "fouvol/random.hpp"
#include "fouvol/specfun.hpp"

namespace fouvol {

enum class KernelKind { fractional, e_theta };

/// Uniform grid t_i = i * horizon / n_steps.
struct TimeGrid {
  double horizon = 1.0;
  std::size_t n_steps = 1;

  double dt() const noexcept { return horizon / static_cast<double>(n_steps); }
  double time(std::size_t i) const noexcept { return horizon * static_cast<double>(i) / static_cast<double>(n_steps); }
};

/// Joint Gaussian law of one cell's drivers (dZ_j, I_{j,1}, ..., I_{j,kappa}) with
/// I_{j,k} = int_cell (t_{j-1} + k dt - s)^(alpha-1) dZ_s.
class HybridCellLaw {
 public:
  /// Throws std::domain_error for alpha outside (1/2, 1), dt <= 0 or kappa < 1.
  HybridCellLaw(double alpha, double dt, int kappa = 1);

  int kappa() const noexcept { return kappa_; }
  double alpha() const noexcept { return alpha_; }
  double dt() const noexcept { return dt_; }
  /// Row-major (kappa + 1) x (kappa + 1) covariance.
  const std::vector<double>& covariance() const noexcept { return cov_; }
  /// Writes kappa + 1 correlated normals.
  void sample(RandomStream& rng, std::span<double> out) const;

 private:
  double alpha_;
  double dt_;
  int kappa_;
  std::vector<double> cov_;
  std::vector<double> chol_;  // lower triangular, row-major
};

/// Drivers for n_steps cells. near[k * n_steps + j] holds I_{j,k+1}.
struct VolterraDriver {
  std::size_t n_steps = 0;
  int kappa = 1;
  std::vector<double> dz;
  std::vector<double> near;
};

/// Fills `out` (resized as needed) with fresh drivers.
void draw_driver(const HybridCellLaw& law, std::size_t n_steps, RandomStream& rng,
                 VolterraDriver& out);
VolterraDriver draw_driver(const HybridCellLaw& law, std::size_t n_steps, RandomStream& rng);

/// Kernel weights of the hybrid scheme on a fixed grid. The power kernel uses
/// the standard weights; E_theta with theta > 0 uses L2 projections built from
/// exact kernel moments on every cell.
class HybridScheme {
 public:
  HybridScheme(KernelKind kind, const specfun::KernelParams& kp, TimeGrid grid, int kappa = 1);

  const HybridCellLaw& law() const noexcept { return law_; }
  const TimeGrid& grid() const noexcept { return grid_; }

  /// out[i] for i = 0..n_steps with out[0] = 0; O(n_steps^2).
  void simulate(const VolterraDriver& d, std::span<double> out) const;
  /// The single value at t_i; O(i).
  double value_at(const VolterraDriver& d, std::size_t i) const;

 private:
  TimeGrid grid_;
  int kappa_;
  HybridCellLaw law_;
  std::vector<double> near_w_;     // weight on I_{.,k}, k = 1..kappa
  std::vector<double> near_dz_w_;  // weight on dZ of the same cell
  std::vector<double> far_w_;   // index n_steps - lag; zero for lags <= kappa
};

std::vector<double> simulate_volterra_hybrid(KernelKind kind, const specfun::KernelParams& kp,
                                             const TimeGrid& grid, const VolterraDriver& d,
                                             int kappa = 1);

/// int_0^t k(u - s) dZ_s for u >= t = grid.horizon at fixed points u. On each
/// cell the stochastic integral is replaced by its L2 projection onto the
/// span of the cell's (dZ_j, I_{j,1}); the weights are exact kernel moments.
class VolterraProjection {
 public:
  VolterraProjection(KernelKind kind, const specfun::KernelParams& kp, TimeGrid grid,
                     std::vector<double> u_grid);

  const std::vector<double>& u_grid() const noexcept { return u_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  /// out.size() must equal u_grid().size().
  void apply(const VolterraDriver& d, std::span<double> out) const;
  /// Variance of the projected value at u_grid()[i].
  double projected_variance(std::size_t i) const;

 private:
  TimeGrid grid_;
  std::vector<double> u_;
  std::vector<double> a_;  // weights on dZ, row per u
  std::vector<double> b_;  // weights on I_{.,1}
  std::vector<double> cov_;
};

std::vector<double> projected_volterra(KernelKind kind, const specfun::KernelParams& kp,
                                       std::span<const double> u_grid, const TimeGrid& grid,
                                       const VolterraDriver& d);

}  // namespace fouvol
