#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>

#include "fouvol/fou.hpp"
#include "fouvol/ml_table.hpp"
#include "fouvol/specfun.hpp"
#include "specfun_oracle_values.hpp"

namespace {

using namespace fouvol;
using specfun::KernelParams;

TEST(MittagLeffler, MatchesHighPrecisionSeries) {
  for (const auto& row : oracle::kMittagLeffler) {
    const double v = specfun::mittag_leffler(row.alpha, row.beta, row.z);
    EXPECT_NEAR(v, row.value, 1e-12 * std::max(1.0, std::abs(row.value)))
        << "alpha=" << row.alpha << " beta=" << row.beta << " z=" << row.z;
  }
}

TEST(MittagLeffler, ReducesToExponential) {
  for (double z = -10.0; z <= 10.0; z += 0.25)
    EXPECT_NEAR(specfun::mittag_leffler(1.0, 1.0, z), std::exp(z), 1e-10 * std::max(1.0, std::exp(z)));
}

TEST(MittagLeffler, HalfOrderIsScaledErfc) {
  // E_{1/2,1}(-x) = exp(x^2) erfc(x)
  for (double x : {0.1, 0.5, 1.0, 2.0, 4.0})
    EXPECT_NEAR(specfun::mittag_leffler(0.5, 1.0, -x), std::exp(x * x) * std::erfc(x), 1e-12);
}

TEST(MittagLeffler, RejectsBadOrder) {
  EXPECT_THROW(specfun::mittag_leffler(0.0, 1.0, -1.0), std::domain_error);
  EXPECT_THROW(specfun::mittag_leffler(1.5, 1.0, -1.0), std::domain_error);
}

TEST(MittagLeffler, SingleOracleValue) {
  EXPECT_NEAR(specfun::mittag_leffler(0.6, 1.0, -2.5), oracle::kMl06_1_m2_5, 1e-13);
}

TEST(Kernel, EThetaValue) {
  const KernelParams kp(0.6, 1.7);
  EXPECT_NEAR(specfun::e_theta_kernel(kp, 0.3), oracle::kETheta_06_17_at_03, 1e-12);
  EXPECT_NEAR(specfun::psi(kp, 0.0), 1.0, 1e-15);
}

TEST(Kernel, ZeroThetaIsFractionalKernel) {
  const KernelParams kp(0.7, 0.0);
  for (double t : {0.01, 0.3, 2.0})
    EXPECT_NEAR(specfun::e_theta_kernel(kp, t), std::pow(t, -0.3), 1e-12 * std::pow(t, -0.3));
}

TEST(Kernel, IntegralIdentity) {
  const KernelParams kp(0.6, 1.7);
  EXPECT_NEAR(specfun::integral_theta_e(kp, 1.0, 0.2, 0.7), oracle::kIntThetaE_06_17_u1_02_07, 1e-12);
}

TEST(Kernel, IntegralIdentityAgainstQuadrature) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ua(0.52, 0.98), ut(0.1, 8.0), uu(0.05, 2.0);
  boost::math::quadrature::tanh_sinh<double> ts;
  for (int i = 0; i < 20; ++i) {
    const KernelParams kp(ua(gen), ut(gen));
    const double u = uu(gen);
    // r = u v^(1/alpha) absorbs the r^(alpha - 1) singularity
    const double a = kp.alpha();
    const double quad = ts.integrate(
        [&](double v) {
          if (v <= 0.0) return kp.theta() * std::pow(u, a) / a;
          const double r = u * std::pow(v, 1.0 / a);
          return kp.theta() * specfun::psi(kp, r) * std::pow(u, a) / a;
        },
        0.0, 1.0);
    EXPECT_NEAR(specfun::integral_theta_e(kp, u, 0.0, u), quad, 1e-6);
  }
}

TEST(WeaklySingularQuad, CosineIntegrand) {
  const double v = specfun::weakly_singular_quad(-0.3, -0.4, [](double s) { return std::cos(s); },
                                                 1.0, 1e-4);
  EXPECT_NEAR(v, oracle::kWeaklySingularCos, 2e-3);
  EXPECT_THROW(specfun::weakly_singular_quad(-1.0, 0.0, [](double) { return 1.0; }, 1.0, 0.1),
               std::domain_error);
}

TEST(KernelTable, AgreesWithDirectEvaluation) {
  const KernelParams kp(0.5938, 5.9165);
  const specfun::KernelTable table(kp, 2.0);
  for (double tau : {0.0, 1e-6, 1e-3, 0.05, 0.3, 1.0, 1.99}) {
    const double direct = specfun::mittag_leffler(kp.alpha(), 1.0, -kp.c() * std::pow(tau, kp.alpha()));
    EXPECT_NEAR(table.ml1(tau), direct, 1e-12) << tau;
    EXPECT_NEAR(table.psi(tau), specfun::psi(kp, tau), 1e-12) << tau;
  }
}

TEST(VarianceFunctions, EThetaSquareIntegral) {
  const specfun::KernelTable table(KernelParams(0.6, 1.7), 1.0);
  EXPECT_NEAR(e_theta_square_integral(table, 0.5), oracle::kIntEThetaSq_06_17_05, 1e-10);
}

TEST(VarianceFunctions, SigmaYAndSigmaM) {
  ModelParams mp;
  mp.alpha = 0.6;
  mp.theta = 5.9;
  EXPECT_NEAR(sigma2_y(mp, 0.1, 30.0 / 365.0), oracle::kSigma2Y_06_59_01, 1e-9 * oracle::kSigma2Y_06_59_01 + 1e-15);
  mp.alpha = 0.614;
  EXPECT_NEAR(sigma2_m(mp, 0.2, 30.0 / 365.0), oracle::kSigma2M_0614_02, 1e-12);
}

TEST(VarianceFunctions, MtClosedForm) {
  ModelParams mp;
  mp.alpha = 0.6;
  mp.eta = 0.3;
  const double h = 0.1;
  EXPECT_NEAR(m_t(mp, 0.1, 0.6), 0.5 * (1 - 0.09) * std::pow(0.5, 2 * h) / (2 * h), 1e-14);
}

}  // namespace
