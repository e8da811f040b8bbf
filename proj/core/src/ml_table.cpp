#include "fouvol/ml_table.hpp"

#include <cmath>
#include <numbers>

namespace fouvol::specfun {

MittagLefflerTable::MittagLefflerTable(double alpha, double beta, double x_max)
    : alpha_(alpha), beta_(beta), x_max_(std::max(x_max, 0.0)) {
  const int pieces = std::max(1, static_cast<int>(std::ceil(x_max_ / kPieceWidth)));
  x_max_ = pieces * kPieceWidth;
  coeffs_.assign(static_cast<std::size_t>(pieces) * kDegree, 0.0);

  std::vector<double> nodes(kDegree);
  std::vector<double> values(kDegree);
  for (int j = 0; j < kDegree; ++j)
    nodes[j] = std::cos(std::numbers::pi * (j + 0.5) / kDegree);

  for (int p = 0; p < pieces; ++p) {
    const double left = p * kPieceWidth;
    for (int j = 0; j < kDegree; ++j) {
      const double x = left + 0.5 * kPieceWidth * (nodes[j] + 1.0);
      values[j] = mittag_leffler(alpha_, beta_, -x);
    }
    double* c = &coeffs_[static_cast<std::size_t>(p) * kDegree];
    for (int k = 0; k < kDegree; ++k) {
      double s = 0.0;
      for (int j = 0; j < kDegree; ++j)
        s += values[j] * std::cos(std::numbers::pi * k * (j + 0.5) / kDegree);
      c[k] = 2.0 * s / kDegree;
    }
    c[0] *= 0.5;
  }
}

double MittagLefflerTable::operator()(double x) const {
  if (x < 0.0 || x >= x_max_) return mittag_leffler(alpha_, beta_, -x);
  const int p = static_cast<int>(x / kPieceWidth);
  const double t = 2.0 * (x - p * kPieceWidth) / kPieceWidth - 1.0;
  const double* c = &coeffs_[static_cast<std::size_t>(p) * kDegree];
  // Clenshaw
  double b1 = 0.0, b2 = 0.0;
  for (int k = kDegree - 1; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

KernelTable::KernelTable(const KernelParams& kp, double tau_max)
    : kp_(kp),
      tau_max_(tau_max),
      c_(kp.c()),
      gamma_alpha_(std::tgamma(kp.alpha())),
      ml1_(kp.alpha(), 1.0, c_ * std::pow(std::max(tau_max, 0.0), kp.alpha()) * 1.01),
      mlaa_(kp.alpha(), kp.alpha(), c_ * std::pow(std::max(tau_max, 0.0), kp.alpha()) * 1.01) {}

double KernelTable::ml1(double tau) const {
  if (c_ == 0.0 || tau <= 0.0) return 1.0;
  return ml1_(c_ * std::pow(tau, kp_.alpha()));
}

double KernelTable::psi(double tau) const {
  if (c_ == 0.0 || tau <= 0.0) return 1.0;
  return gamma_alpha_ * mlaa_(c_ * std::pow(tau, kp_.alpha()));
}

double KernelTable::e_theta(double tau) const {
  return std::pow(tau, kp_.alpha() - 1.0) * psi(tau);
}

}  // namespace fouvol::specfun
