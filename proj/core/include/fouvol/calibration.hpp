#pragma once

// Market quotes, parameter boxes, the implied-volatility loss and the
// calibration driver.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fouvol/fou.hpp"
#include "fouvol/g_surface.hpp"
#include "fouvol/optimizer.hpp"
#include "fouvol/pricing_vix.hpp"

namespace fouvol::calib {

enum class Instrument { spx, vix };
enum class QuoteKind { call, put, future };

struct Quote {
  Instrument instrument = Instrument::vix;
  QuoteKind kind = QuoteKind::call;
  double maturity = 0.0;
  double strike = 0.0;  ///< ignored for futures
  double bid = 0.0;
  double ask = 0.0;

  double mid() const noexcept { return 0.5 * (bid + ask); }
};

class QuoteSet {
 public:
  QuoteSet() = default;
  /// Throws std::invalid_argument when bid > ask, maturity <= 0, an option
  /// strike is not positive or an SPX future is given.
  explicit QuoteSet(std::vector<Quote> quotes);

  /// CSV with header instrument,kind,maturity,strike,bid,ask. Errors name the line.
  static QuoteSet read_csv(std::istream& is);
  void write_csv(std::ostream& os) const;

  const std::vector<Quote>& quotes() const noexcept { return quotes_; }
  bool empty() const noexcept { return quotes_.empty(); }
  std::vector<double> maturities(Instrument inst) const;
  /// Mid of the future quote for (VIX, maturity), if any.
  std::optional<double> future_mid(double maturity) const;

 private:
  std::vector<Quote> quotes_;
};

/// Free-parameter layout over ModelParams: hurst, rho, eta, theta, gamma,
/// mu1..mum, q1..qm, xi0, x0. A fixed parameter keeps the value of the base
/// ModelParams.
struct Bound {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  bool fixed = false;
};

class ParamBox {
 public:
  explicit ParamBox(std::vector<Bound> bounds);

  /// Boxes of the published calibrations (rho and x0 fixed) for a chain with m states.
  static ParamBox spx_default(std::size_t m = 2);
  static ParamBox vix_default(std::size_t m = 2);
  static ParamBox joint_default(std::size_t m = 2);

  const std::vector<Bound>& bounds() const noexcept { return bounds_; }
  Bound& bound(const std::string& name);
  const Bound& bound(const std::string& name) const;
  std::vector<std::string> free_names() const;
  std::vector<double> lower() const;
  std::vector<double> upper() const;

  /// Free-parameter values of mp; throws std::invalid_argument for unknown names.
  std::vector<double> pack(const ModelParams& mp) const;
  ModelParams unpack(const ModelParams& base, const std::vector<double>& free) const;
  bool contains(const ModelParams& mp, double tol = 1e-12) const;

 private:
  std::vector<Bound> bounds_;
};

double get_param(const ModelParams& mp, const std::string& name);
void set_param(ModelParams& mp, const std::string& name, double value);

struct LossConfig {
  double option_weight = 1.0;
  double future_weight = 1.0;
  double spx_weight = 1.0;
  double vix_weight = 1.0;
  double tau_step = 0.0;        ///< G grid spacing; 0 uses 64 nodes over the longest horizon
  GSurfaceOptions gsurface;
  PricingOptions vix;           ///< method mcvr by default
  PricingOptions spx;           ///< method simple by default
  unsigned workers = 1;         ///< parallel finite-difference columns
  double failure_residual = 1.0;  ///< residual used when a model price has no implied vol
  /// mcvr allocations per maturity; maturities not listed derive their own.
  /// calibrate() fills these (and gsurface.allocation) at the initial point
  /// when freeze_allocation is set, so the loss is smooth in the intensities.
  std::map<double, std::vector<std::size_t>> vix_allocation;
  std::map<double, std::vector<std::size_t>> spx_allocation;
  bool freeze_allocation = true;
};

LossConfig default_loss_config();

struct Residual {
  Quote quote;
  double market = 0.0;  ///< implied vol, or the future mid
  double model = 0.0;
  double residual = 0.0;  ///< weighted, squared into the loss
  bool skipped = false;   ///< market implied vol unavailable
  std::string note;
};

/// Model-vs-market residuals. Throws std::invalid_argument when quotes are
/// empty or every quote is skipped.
std::vector<Residual> residuals(const ModelParams& mp, const QuoteSet& quotes, const LossConfig& cfg);
double loss(const ModelParams& mp, const QuoteSet& quotes, const LossConfig& cfg);

struct CalibrationReport {
  ModelParams initial;
  ModelParams fitted;
  ParamBox box;
  optim::Result optimizer;
  std::vector<Residual> residuals;

  void write_parameters(std::ostream& os) const;  ///< parameter,initial,fitted,min,max
  void write_residuals(std::ostream& os) const;
};

/// Throws std::invalid_argument if `initial` is outside the box.
CalibrationReport calibrate(const ModelParams& initial, const ParamBox& box, const QuoteSet& quotes,
                            const LossConfig& cfg, const optim::Options& opt = {});

std::string to_string(Instrument i);
std::string to_string(QuoteKind k);

}  // namespace fouvol::calib
