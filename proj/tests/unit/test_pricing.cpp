#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fouvol/black_scholes.hpp"
#include "fouvol/g_surface.hpp"
#include "fouvol/ml_table.hpp"
#include "fouvol/presets.hpp"
#include "fouvol/pricing_equity.hpp"
#include "fouvol/pricing_vix.hpp"
#include "fouvol/tables.hpp"

namespace {

using namespace fouvol;

GSurface surface(const ModelParams& mp, double tau_max, std::size_t n_paths = 3000,
                 Method m = Method::mcvr) {
  GSurfaceOptions o;
  o.method = m;
  o.n_paths = n_paths;
  o.sampling.seed = 77;
  return build_g_surface(mp, default_tau_grid(tau_max, 24), o);
}

double combined(const Estimate& a, const Estimate& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

TEST(GSurface, ZeroTauRowIsOne) {
  const auto mp = presets::vix_calibrated();
  const auto gs = surface(mp, 0.4);
  for (std::size_t s = 0; s < gs.n_states(); ++s) EXPECT_EQ(gs.values(s)[0], 1.0);
}

TEST(GSurface, ZeroVolOfVolIsOne) {
  auto mp = presets::vix_calibrated();
  mp.gamma = 0.0;
  const auto gs = surface(mp, 0.4);
  for (std::size_t s = 0; s < gs.n_states(); ++s)
    for (double v : gs.values(s)) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(GSurface, ConstantChainClosedForm) {
  ModelParams mp;
  mp.alpha = 0.6;
  mp.theta = 2.0;
  mp.gamma = 0.2;
  mp.ctmc = ctmc::CtmcSpec::constant(0.7);
  const auto gs = surface(mp, 0.5, 1, Method::simple);
  const specfun::KernelTable table(mp.kernel(), 1.0);
  for (double tau : gs.tau_grid())
    EXPECT_NEAR(gs(tau, 0), std::exp(mp.w() * 0.7 * (1.0 - table.ml1(tau))), 1e-12) << tau;
}

TEST(GSurface, MethodsAgree) {
  const auto mp = presets::vix_calibrated();
  const auto a = surface(mp, 0.35, 20000, Method::simple);
  const auto b = surface(mp, 0.35, 20000, Method::mcvr);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t i = 1; i < a.tau_grid().size(); i += 5) {
      const double se = std::hypot(a.std_errors(s)[i], b.std_errors(s)[i]);
      EXPECT_NEAR(a.values(s)[i], b.values(s)[i], 4.0 * se + 1e-12) << s << ' ' << i;
    }
}

TEST(GSurface, SerializationRoundTripIsExact) {
  const auto mp = presets::vix_calibrated();
  const auto gs = surface(mp, 0.35);
  std::stringstream ss;
  gs.write(ss);
  const auto back = GSurface::read(ss);
  PricingOptions po;
  po.n_paths = 2000;
  const std::vector<double> k = {0.18, 0.22};
  const auto a = price_vix(mp, gs, 0.25, k, po);
  const auto b = price_vix(mp, back, 0.25, k, po);
  EXPECT_EQ(a.forward.value, b.forward.value);
  EXPECT_EQ(a.calls[1].value, b.calls[1].value);
  std::stringstream bad("tau,state,value,stderr\n0,0,1\n");
  EXPECT_THROW(GSurface::read(bad), std::invalid_argument);
}

TEST(VixPricing, ZeroVolOfVolIsDeterministic) {
  auto mp = presets::vix_calibrated();
  mp.gamma = 0.0;
  const auto gs = surface(mp, 0.4);
  const std::vector<double> k = {0.2, 0.3};
  for (Method m : {Method::simple, Method::cv, Method::mcvr}) {
    PricingOptions po;
    po.method = m;
    po.n_paths = 1000;
    const auto s = price_vix(mp, gs, 0.25, k, po);
    EXPECT_NEAR(s.forward.value, std::sqrt(0.0654), 1e-10) << to_string(m);
    EXPECT_NEAR(s.calls[0].value, std::sqrt(0.0654) - 0.2, 1e-10);
    EXPECT_NEAR(s.calls[1].value, 0.0, 1e-12);
  }
}

TEST(VixPricing, EstimatorsAgree) {
  const auto mp = presets::vix_calibrated();
  const auto gs = surface(mp, 0.4, 20000);
  const std::vector<double> k = {0.18, 0.2, 0.24};
  PricingOptions po;
  po.n_paths = 20000;
  po.method = Method::cv;
  const auto cv = price_vix(mp, gs, 0.25, k, po);
  po.method = Method::mcvr;
  const auto mcvr = price_vix(mp, gs, 0.25, k, po);
  EXPECT_NEAR(cv.forward.value, mcvr.forward.value, 3.0 * combined(cv.forward, mcvr.forward));
  for (std::size_t j = 0; j < k.size(); ++j)
    EXPECT_NEAR(cv.calls[j].value, mcvr.calls[j].value, 3.0 * combined(cv.calls[j], mcvr.calls[j]));
}

TEST(VixPricing, SameSeedSameResultForAnyWorkerCount) {
  const auto mp = presets::vix_calibrated();
  const auto gs = surface(mp, 0.4);
  PricingOptions po;
  po.n_paths = 3000;
  po.method = Method::simple;
  const std::vector<double> k = {0.2};
  const auto a = price_vix(mp, gs, 0.1, k, po);
  po.sampling.workers = 3;
  const auto b = price_vix(mp, gs, 0.1, k, po);
  EXPECT_EQ(a.forward.value, b.forward.value);
  EXPECT_EQ(a.calls[0].value, b.calls[0].value);
}

TEST(VixPricing, CallsDecreasingAndConvex) {
  const auto mp = presets::vix_calibrated();
  const auto gs = surface(mp, 0.4);
  std::vector<double> k;
  for (double m = 0.8; m <= 1.5; m += 0.1) k.push_back(0.2 * m);
  PricingOptions po;
  po.n_paths = 10000;
  const auto s = price_vix(mp, gs, 0.25, k, po);
  for (std::size_t j = 1; j < k.size(); ++j) EXPECT_LT(s.calls[j].value, s.calls[j - 1].value);
  for (std::size_t j = 2; j < k.size(); ++j)
    EXPECT_GT(s.calls[j].value - 2 * s.calls[j - 1].value + s.calls[j - 2].value,
              -3.0 * s.calls[j - 1].std_error);
}

TEST(SpxPricing, ZeroVolOfVolIsBlackScholes) {
  auto mp = presets::spx_calibrated();
  mp.gamma = 0.0;
  const auto gs = surface(mp, 0.3);
  PricingOptions po;
  po.method = Method::simple;
  po.n_paths = 20000;
  const std::vector<double> k = {0.9, 1.0, 1.1};
  const auto s = price_spx(mp, gs, 0.25, k, po);
  for (std::size_t j = 0; j < k.size(); ++j)
    EXPECT_NEAR(s.calls[j].value, black_call(1.0, k[j], 0.25, std::sqrt(0.0553)),
                3.0 * s.calls[j].std_error + 1e-4);
}

TEST(SpxPricing, MartingaleAndDeepOutOfTheMoney) {
  const auto mp = presets::spx_calibrated();
  const auto gs = surface(mp, 0.3);
  PricingOptions po;
  po.method = Method::simple;
  po.n_paths = 10000;
  const std::vector<double> k = {0.0, 10.0};
  const auto s = price_spx(mp, gs, 0.1, k, po);
  EXPECT_NEAR(s.forward.value, 1.0, 3.0 * s.forward.std_error);
  EXPECT_NEAR(s.calls[0].value, 1.0, 3.0 * s.calls[0].std_error);
  EXPECT_LT(s.calls[1].value, 3.0 * s.calls[1].std_error + 1e-12);
}

TEST(SpxPricing, McvrAgreesWithSimple) {
  const auto mp = presets::spx_calibrated();
  const auto gs = surface(mp, 0.3);
  PricingOptions po;
  po.n_paths = 8000;
  const std::vector<double> k = {0.9, 1.0, 1.05};
  po.method = Method::simple;
  const auto a = price_spx(mp, gs, 0.2, k, po);
  po.method = Method::mcvr;
  const auto b = price_spx(mp, gs, 0.2, k, po);
  for (std::size_t j = 0; j < k.size(); ++j)
    EXPECT_NEAR(a.calls[j].value, b.calls[j].value, 3.0 * combined(a.calls[j], b.calls[j]));
  po.method = Method::cv;
  EXPECT_THROW(price_spx(mp, gs, 0.2, k, po), std::invalid_argument);
}

TEST(Tables, SmileAndCompareShapes) {
  const auto mp = presets::vix_calibrated();
  const auto gs = surface(mp, 0.4);
  PricingOptions po;
  po.n_paths = 500;
  const std::vector<double> k = {0.18, 0.22};
  std::ostringstream os;
  write_smile_header(os);
  write_smile(os, Underlying::vix, price_vix(mp, gs, 0.25, k, po));
  const std::string smile = os.str();
  EXPECT_EQ(std::count(smile.begin(), smile.end(), '\n'), 4);

  const std::vector<Method> methods = {Method::cv, Method::mcvr};
  const auto one = compare_methods(Underlying::vix, mp, gs, 0.25, k, methods, 1, po);
  ASSERT_EQ(one.rows.size(), k.size() * methods.size());
  for (const auto& r : one.rows) EXPECT_EQ(r.std_price, 0.0);
  std::ostringstream cs;
  write_compare(cs, one);
  const std::string table = cs.str();
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
}

}  // namespace
