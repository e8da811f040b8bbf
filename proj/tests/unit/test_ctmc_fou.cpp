#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fouvol/ctmc.hpp"
#include "fouvol/estimators.hpp"
#include "fouvol/fou.hpp"
#include "fouvol/presets.hpp"

namespace {

using namespace fouvol;
using ctmc::CtmcSpec;

TEST(Ctmc, RejectsMalformedChains) {
  EXPECT_THROW(CtmcSpec({}, {}, {}), std::invalid_argument);
  EXPECT_THROW(CtmcSpec::two_state(0.0, 1.0, -1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(CtmcSpec({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}, {{0, 0.5, 0.4}, {0.5, 0, 0.5}, {0.5, 0.5, 0}}),
               std::invalid_argument);
  EXPECT_THROW(CtmcSpec({0.0}, {1.0}, {{0.0}}), std::invalid_argument);
  EXPECT_THROW(CtmcSpec::two_state(0, 1, 1, 1, 2), std::invalid_argument);
}

TEST(Ctmc, EnumeratesSequences) {
  const auto two = CtmcSpec::two_state(0.0, 1.0, 1.0, 2.0);
  const auto seq = ctmc::enumerate_sequences(two, 3);
  ASSERT_EQ(seq.size(), 1u);
  EXPECT_EQ(seq[0], (std::vector<std::size_t>{0, 1, 0, 1}));
  const auto three = CtmcSpec::uniform_jumps({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  EXPECT_EQ(ctmc::enumerate_sequences(three, 2).size(), 4u);
}

TEST(Ctmc, JumpCountProbabilitiesOfSymmetricChainArePoisson) {
  const auto spec = CtmcSpec::two_state(0.0, 1.0, 3.0, 3.0);
  const double T = 0.7;
  const auto p = ctmc::jump_count_probabilities(spec, T, 10);
  double fact = 1.0;
  for (std::size_t k = 0; k <= 10; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    EXPECT_NEAR(p[k], std::exp(-3.0 * T) * std::pow(3.0 * T, k) / fact, 1e-13);
  }
}

TEST(Ctmc, PathDensityIntegratesToOne) {
  // The importance-sampled estimator with f = 1 sums the path density over
  // all paths with at most k_max jumps.
  const auto spec = presets::vix_calibrated().ctmc;
  const double T = 0.25;
  const std::vector<std::size_t> n(9, 4000);
  SamplingOptions so;
  so.seed = 3;
  const auto est = mcvr_estimate(spec, T, n, 1,
                                 [](const ctmc::CtmcPath&, RandomStream&, std::span<double> out) {
                                   out[0] = 1.0;
                                 },
                                 so, true);
  EXPECT_NEAR(est[0].value, 1.0, 4.0 * est[0].std_error + 1e-6);
}

TEST(Ctmc, DensityEdgeCases) {
  const auto spec = CtmcSpec::two_state(0.0, 1.0, 1.0, 2.0);
  ctmc::CtmcPath p{{0}, {}, 1.0};
  EXPECT_NEAR(ctmc::path_density(spec, p), std::exp(-1.0), 1e-15);
  p = {{0, 1}, {1.5}, 1.0};
  EXPECT_EQ(ctmc::path_density(spec, p), 0.0);
  p = {{0, 1}, {}, 1.0};
  EXPECT_THROW(ctmc::path_density(spec, p), std::invalid_argument);
}

TEST(Ctmc, StratifiedAllocation) {
  const auto spec = presets::vix_calibrated().ctmc;
  const auto n = ctmc::stratified_allocation(spec, 0.25, 4, 10000, 64);
  ASSERT_EQ(n.size(), 5u);
  for (auto x : n) EXPECT_GE(x, 64u);
  EXPECT_LE(std::accumulate(n.begin(), n.end(), std::size_t{0}), 10000u);
  const auto exact = ctmc::stratified_allocation(spec, 0.25, 4, 10000, 64, true);
  EXPECT_EQ(exact[0], 1u);
  EXPECT_THROW(ctmc::stratified_allocation(spec, 0.25, 4, 100, 64), std::invalid_argument);
}

TEST(Ctmc, SampledJumpFrequencyMatchesLaw) {
  const auto spec = presets::vix_calibrated().ctmc;
  const double T = 0.3;
  const auto p = ctmc::jump_count_probabilities(spec, T, 3);
  RandomStream rng(5);
  const int n = 200000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = ctmc::sample_path(spec, T, rng).jumps();
    if (k <= 3) ++counts[k];
  }
  for (std::size_t k = 0; k <= 3; ++k) {
    const double se = std::sqrt(p[k] * (1 - p[k]) / n);
    EXPECT_NEAR(counts[k] / double(n), p[k], 4 * se) << k;
  }
}

TEST(ForwardCurve, InterpolatesAndExtrapolatesFlat) {
  ForwardCurve c({0.5, 1.0}, {0.04, 0.06});
  EXPECT_DOUBLE_EQ(c(0.0), 0.04);
  EXPECT_DOUBLE_EQ(c(0.75), 0.05);
  EXPECT_DOUBLE_EQ(c(3.0), 0.06);
  EXPECT_THROW(ForwardCurve({1.0, 0.5}, {0.04, 0.06}), std::invalid_argument);
}

TEST(ModelParams, Validation) {
  ModelParams mp;
  EXPECT_NO_THROW(mp.validate());
  mp.alpha = 0.5;
  EXPECT_THROW(mp.validate(), std::invalid_argument);
  mp.alpha = 0.6;
  mp.rho = -1.0;
  EXPECT_THROW(mp.validate(), std::invalid_argument);
  mp.rho = 0.0;
  mp.eta = 1.0;
  EXPECT_THROW(mp.validate(), std::invalid_argument);
}

TEST(Fou, PiecewiseIntegralWithConstantLevel) {
  ModelParams mp;
  mp.alpha = 0.6;
  mp.theta = 1.7;
  mp.ctmc = CtmcSpec::constant(0.8);
  const ctmc::CtmcPath path{{0}, {}, 1.0};
  const double h = h_piecewise(mp, path, 0.2, 0.7, 1.0);
  EXPECT_NEAR(h, 0.8 * specfun::integral_theta_e(mp.kernel(), 1.0, 0.2, 0.7), 1e-12);
}

TEST(Fou, PiecewiseIntegralSplitsAtJumps) {
  ModelParams mp;
  mp.alpha = 0.6;
  mp.theta = 1.7;
  mp.ctmc = CtmcSpec::two_state(0.5, 2.0, 1.0, 1.0);
  const ctmc::CtmcPath path{{0, 1}, {0.4}, 1.0};
  const auto kp = mp.kernel();
  const double want = 0.5 * specfun::integral_theta_e(kp, 1.2, 0.0, 0.4) +
                      2.0 * specfun::integral_theta_e(kp, 1.2, 0.4, 1.0);
  EXPECT_NEAR(h_piecewise(mp, path, 0.0, 1.0, 1.2), want, 1e-12);
  EXPECT_THROW(h_piecewise(mp, path, 0.0, 1.0, 0.9), std::invalid_argument);
}

TEST(Fou, EtWithoutMeanReversion) {
  ModelParams mp;
  mp.alpha = 0.65;
  mp.theta = 0.0;
  const double want = 0.5 * 0.49 * std::pow(0.4, 0.3) / 0.3;
  EXPECT_NEAR(e_t(mp, 0.1, 0.5, 0.7), want, 1e-10);
}

TEST(Fou, GVanishesForZeroStart) {
  ModelParams mp;
  mp.x0 = 0.0;
  EXPECT_EQ(g_of_u(mp, 0.5), 0.0);
  mp.x0 = 0.3;
  mp.theta = 2.0;
  EXPECT_GT(g_of_u(mp, 0.5), 0.0);
  EXPECT_LT(g_of_u(mp, 0.5), 0.3);
}

}  // namespace
