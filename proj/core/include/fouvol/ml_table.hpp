#pragma once

// Interpolated Mittag-Leffler evaluations for the simulation hot paths.
// Accuracy is ~1e-13 against mittag_leffler(); arguments beyond the tabulated
// range fall back to the direct evaluation.

#include <vector>

#include "fouvol/specfun.hpp"

namespace fouvol::specfun {

/// x -> E_{alpha,beta}(-x) on [0, x_max], piecewise Chebyshev.
class MittagLefflerTable {
 public:
  MittagLefflerTable(double alpha, double beta, double x_max);

  double operator()(double x) const;
  double x_max() const noexcept { return x_max_; }

 private:
  static constexpr int kDegree = 16;
  static constexpr double kPieceWidth = 0.5;

  double alpha_;
  double beta_;
  double x_max_;
  std::vector<double> coeffs_;  // kDegree coefficients per piece
};

/// Kernel functions of one KernelParams over tau in [0, tau_max]:
/// E_{alpha,1}(-c tau^alpha), psi, E_theta and the exact theta*E_theta integrals.
class KernelTable {
 public:
  KernelTable(const KernelParams& kp, double tau_max);

  const KernelParams& params() const noexcept { return kp_; }
  double tau_max() const noexcept { return tau_max_; }

  /// E_{alpha,1}(-c tau^alpha); equals 1 at tau = 0.
  double ml1(double tau) const;
  double psi(double tau) const;
  double e_theta(double tau) const;
  /// int_a^b theta E_theta(u - s) ds for 0 <= a <= b <= u.
  double integral_theta_e(double u, double a, double b) const {
    return ml1(u - b) - ml1(u - a);
  }

 private:
  KernelParams kp_;
  double tau_max_;
  double c_;
  double gamma_alpha_;
  MittagLefflerTable ml1_;
  MittagLefflerTable mlaa_;
};

}  // namespace fouvol::specfun
