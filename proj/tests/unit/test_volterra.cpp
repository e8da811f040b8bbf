#include <gtest/gtest.h>

#include <cmath>

#include "fouvol/fou.hpp"
#include "fouvol/ml_table.hpp"
#include "fouvol/volterra.hpp"

namespace {

using namespace fouvol;

TEST(HybridCellLaw, CovarianceEntries) {
  const double a = 0.6, h = 0.01;
  const HybridCellLaw law(a, h, 1);
  const auto& c = law.covariance();
  EXPECT_NEAR(c[0], h, 1e-15);
  EXPECT_NEAR(c[1], std::pow(h, a) / a, 1e-14);
  EXPECT_NEAR(c[3], std::pow(h, 2 * a - 1) / (2 * a - 1), 1e-12);
  EXPECT_THROW(HybridCellLaw(0.4, h), std::domain_error);
}

TEST(HybridCellLaw, SampleMoments) {
  const HybridCellLaw law(0.6, 0.02, 2);
  RandomStream rng(11);
  const int n = 200000;
  std::vector<double> x(3), s2(9, 0.0);
  for (int i = 0; i < n; ++i) {
    law.sample(rng, x);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) s2[a * 3 + b] += x[a] * x[b];
  }
  for (int k = 0; k < 9; ++k) {
    const double c = law.covariance()[k];
    const double scale = std::sqrt(law.covariance()[(k / 3) * 4] * law.covariance()[(k % 3) * 4]);
    EXPECT_NEAR(s2[k] / n, c, 5.0 * scale * std::sqrt(2.0 / n)) << k;
  }
}

TEST(HybridScheme, FractionalVarianceSmallRun) {
  const double alpha = 0.6, T = 1.0;
  const specfun::KernelParams kp(alpha, 0.0);
  const TimeGrid grid{T, 100};
  const HybridScheme scheme(KernelKind::fractional, kp, grid);
  RandomStream rng(21);
  const int n = 20000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto d = draw_driver(scheme.law(), grid.n_steps, rng);
    const double v = scheme.value_at(d, grid.n_steps);
    s += v;
    s2 += v * v;
  }
  const double var = s2 / n - (s / n) * (s / n);
  const double want = std::pow(T, 2 * alpha - 1) / (2 * alpha - 1);
  EXPECT_NEAR(var, want, 4.0 * want * std::sqrt(2.0 / n));
}

TEST(HybridScheme, EThetaVarianceOnCoarseGrid) {
  // theta * h^alpha is not small here; the point-evaluated near weight
  // loses about a third of the variance on this grid.
  const specfun::KernelParams kp(0.6, 2.5);
  const double u = 0.5;
  const TimeGrid grid{u, 50};
  const HybridScheme scheme(KernelKind::e_theta, kp, grid);
  const specfun::KernelTable table(kp, 1.0);
  RandomStream rng(5);
  const int n = 40000;
  double s2 = 0.0;
  VolterraDriver d;
  for (int i = 0; i < n; ++i) {
    draw_driver(scheme.law(), grid.n_steps, rng, d);
    const double v = scheme.value_at(d, grid.n_steps);
    s2 += v * v;
  }
  const double want = e_theta_square_integral(table, u);
  EXPECT_NEAR(s2 / n, want, 4.0 * want * std::sqrt(2.0 / n));
}

TEST(HybridScheme, SimulateMatchesValueAt) {
  const specfun::KernelParams kp(0.65, 3.0);
  const TimeGrid grid{0.5, 40};
  const HybridScheme scheme(KernelKind::e_theta, kp, grid);
  RandomStream rng(2);
  const auto d = draw_driver(scheme.law(), grid.n_steps, rng);
  std::vector<double> path(grid.n_steps + 1);
  scheme.simulate(d, path);
  EXPECT_EQ(path[0], 0.0);
  for (std::size_t i : {1u, 7u, 40u}) EXPECT_NEAR(path[i], scheme.value_at(d, i), 1e-12);
}

TEST(VolterraProjection, VarianceApproachesExact) {
  // Var int_0^t (u - s)^(alpha-1) dZ_s = (u^(2a-1) - (u-t)^(2a-1)) / (2a-1)
  const double a = 0.6, t = 0.25;
  const specfun::KernelParams kp(a, 0.0);
  const TimeGrid grid{t, 78};
  const std::vector<double> u = {t, t + 0.05, t + 30.0 / 365.0};
  const VolterraProjection proj(KernelKind::fractional, kp, grid, u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double exact = (std::pow(u[i], 2 * a - 1) - std::pow(u[i] - t, 2 * a - 1)) / (2 * a - 1);
    EXPECT_LE(proj.projected_variance(i), exact * (1 + 1e-9));
    EXPECT_GT(proj.projected_variance(i), 0.995 * exact) << i;
  }
}

}  // namespace
