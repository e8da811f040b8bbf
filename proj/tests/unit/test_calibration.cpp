#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fouvol/black_scholes.hpp"
#include "fouvol/calibration.hpp"
#include "fouvol/config.hpp"
#include "fouvol/optimizer.hpp"
#include "fouvol/presets.hpp"
#include "specfun_oracle_values.hpp"

namespace {

using namespace fouvol;
using namespace fouvol::calib;

TEST(BlackScholes, OracleValues) {
  EXPECT_NEAR(black_scholes_call(0.0, 0.04, 1.0), oracle::kBlackScholes_0_004_1, 1e-14);
  const auto iv = implied_vol(0.07966, 1.0, 1.0, 1.0);
  ASSERT_TRUE(iv);
  EXPECT_NEAR(*iv, oracle::kImpliedVol_007966, 1e-9);
}

TEST(BlackScholes, ImpliedVolRoundTripAndBounds) {
  for (double k : {0.7, 1.0, 1.4}) {
    const double p = black_call(1.0, k, 0.5, 0.35);
    EXPECT_NEAR(*implied_vol(p, 1.0, k, 0.5), 0.35, 1e-6);
  }
  EXPECT_FALSE(implied_vol(1.2, 1.0, 1.0, 1.0));
  EXPECT_FALSE(implied_vol(0.0, 1.0, 0.9, 1.0));
  EXPECT_LT(*implied_vol(0.1 + 1e-9, 1.0, 0.9, 1.0), 0.05);
}

TEST(QuoteSet, ValidatesAndReadsCsv) {
  EXPECT_THROW(QuoteSet({{Instrument::vix, QuoteKind::call, 0.1, 0.2, 0.3, 0.2}}), std::invalid_argument);
  EXPECT_THROW(QuoteSet({{Instrument::vix, QuoteKind::call, 0.1, 0.0, 0.1, 0.2}}), std::invalid_argument);
  std::istringstream ok(
      "instrument,kind,maturity,strike,bid,ask\n"
      "VIX,future,0.1,0,0.21,0.22\n"
      "VIX,call,0.1,0.2,0.03,0.031\n"
      "SPX,put,0.2,0.95,0.01,0.012\n");
  const auto qs = QuoteSet::read_csv(ok);
  EXPECT_EQ(qs.quotes().size(), 3u);
  EXPECT_NEAR(*qs.future_mid(0.1), 0.215, 1e-15);
  std::istringstream bad("instrument,kind,maturity,strike,bid,ask\nVIX,call,0.1,x,0.1,0.2\n");
  try {
    QuoteSet::read_csv(bad);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(ParamBox, PackUnpackAndFixed) {
  const auto mp = presets::vix_calibrated();
  const auto box = ParamBox::vix_default();
  const auto x = box.pack(mp);
  EXPECT_EQ(x.size(), box.free_names().size());
  const auto back = box.unpack(mp, x);
  EXPECT_DOUBLE_EQ(back.alpha, mp.alpha);
  EXPECT_DOUBLE_EQ(back.ctmc.intensity(1), mp.ctmc.intensity(1));
  EXPECT_TRUE(box.contains(mp));
  for (const auto& n : box.free_names()) {
    EXPECT_NE(n, "rho");
    EXPECT_NE(n, "x0");
  }
}

TEST(Optimizer, RosenbrockBothAlgorithms) {
  const optim::BatchResiduals f = [](const std::vector<std::vector<double>>& xs) {
    std::vector<std::vector<double>> out;
    for (const auto& x : xs) out.push_back({10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]});
    return out;
  };
  for (auto alg : {optim::Algorithm::levenberg_marquardt, optim::Algorithm::trust_region}) {
    optim::Options o;
    o.algorithm = alg;
    o.max_iterations = 500;
    o.fd_step = 1e-7;
    const auto r = optim::least_squares(f, {-1.2, 1.0}, {-2, -2}, {2, 2}, o);
    EXPECT_NEAR(r.x[0], 1.0, 1e-4) << optim::to_string(alg);
    EXPECT_NEAR(r.x[1], 1.0, 1e-4);
    for (std::size_t i = 1; i < r.loss_trace.size(); ++i) EXPECT_LE(r.loss_trace[i], r.loss_trace[i - 1]);
  }
}

TEST(Optimizer, RespectsBounds) {
  const optim::BatchResiduals f = [](const std::vector<std::vector<double>>& xs) {
    std::vector<std::vector<double>> out;
    for (const auto& x : xs) out.push_back({x[0] - 3.0, x[1] - 0.5});
    return out;
  };
  const auto r = optim::least_squares(f, {1.0, 0.0}, {0, 0}, {2, 1});
  EXPECT_NEAR(r.x[0], 2.0, 1e-12);
  EXPECT_NEAR(r.x[1], 0.5, 1e-6);
  EXPECT_THROW(optim::least_squares(f, {1.0, 0.0}, {0, 2}, {2, 1}), std::invalid_argument);
}

TEST(Calibration, EmptyQuotesRejected) {
  const auto mp = presets::vix_calibrated();
  EXPECT_THROW(calibrate(mp, ParamBox::vix_default(), QuoteSet{}, default_loss_config()),
               std::invalid_argument);
}

TEST(Calibration, FixedParametersStayFixed) {
  const auto truth = presets::vix_calibrated();
  LossConfig cfg = default_loss_config();
  cfg.gsurface.n_paths = 1000;
  cfg.vix.n_paths = 1000;
  std::vector<Quote> q;
  q.push_back({Instrument::vix, QuoteKind::future, 0.1, 0.0, 0.215, 0.22});
  q.push_back({Instrument::vix, QuoteKind::call, 0.1, 0.22, 0.02, 0.021});
  auto box = ParamBox::vix_default();
  box.bound("theta").fixed = true;
  optim::Options o;
  o.max_iterations = 2;
  const auto rep = calibrate(truth, box, QuoteSet(q), cfg, o);
  EXPECT_EQ(rep.fitted.theta, truth.theta);
  EXPECT_EQ(rep.fitted.rho, truth.rho);
  EXPECT_LE(rep.optimizer.loss, rep.optimizer.loss_trace.front());
  std::ostringstream ps, rs;
  rep.write_parameters(ps);
  rep.write_residuals(rs);
  EXPECT_EQ(ps.str().rfind("parameter,initial,fitted,min,max", 0), 0u);
}

TEST(Config, ParsesSectionsAndOverrides) {
  std::istringstream is(
      "# comment\n"
      "[model]\n"
      "preset = vix\n"
      "eta = 0.2   # inline comment\n"
      "[ctmc]\n"
      "values = 0, 1, 2\n"
      "intensities = 1, 2, 3\n"
      "[simulation]\n"
      "method = cv\n"
      "strikes = 0.9, 1.1\n"
      "[compare]\n"
      "paths_simple = 500\n"
      "[calibration]\n"
      "fixed = rho, x0, theta\n"
      "bound.theta = 1, 5\n");
  const auto cfg = config::parse(is, "t.ini");
  EXPECT_DOUBLE_EQ(cfg.model.eta, 0.2);
  EXPECT_NEAR(cfg.model.hurst(), 0.0938, 1e-12);
  EXPECT_EQ(cfg.model.ctmc.size(), 3u);
  EXPECT_DOUBLE_EQ(cfg.model.ctmc.transition(0, 2), 0.5);
  EXPECT_EQ(cfg.simulation.method, Method::cv);
  EXPECT_EQ(cfg.compare.paths.at(Method::simple), 500u);
  const auto box = cfg.calibration.box(3);
  EXPECT_TRUE(box.bound("theta").fixed);
  EXPECT_DOUBLE_EQ(box.bound("theta").max, 5.0);
}

std::size_t error_line(const std::string& text) {
  std::istringstream is(text);
  try {
    config::parse(is);
  } catch (const config::ConfigError& e) {
    return e.line();
  }
  return 0;
}

TEST(Config, RejectsInvalidInputWithLineNumbers) {
  EXPECT_EQ(error_line("[model]\n\nhurst = 0.6\n"), 3u);
  EXPECT_EQ(error_line("[model]\nrho = -1\n"), 2u);
  EXPECT_EQ(error_line("[model]\neta = 1.2\n"), 2u);
  EXPECT_EQ(error_line("[ctmc]\nvalues = 0, 1\nintensities = 1, -1\n"), 3u);
  EXPECT_EQ(error_line("[model]\ntheta = abc\n"), 2u);
  EXPECT_EQ(error_line("[nope]\n"), 1u);
  EXPECT_EQ(error_line("[simulation]\nunknown = 1\n"), 2u);
  EXPECT_EQ(error_line("[model]\nrho = 0.1\nrho = 0.2\n"), 3u);
  EXPECT_EQ(error_line("rho = 0.1\n"), 1u);
}

}  // namespace
