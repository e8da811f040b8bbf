#include "fouvol/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fouvol/black_scholes.hpp"
#include "fouvol/parallel.hpp"
#include "fouvol/pricing_equity.hpp"

namespace fouvol::calib {

std::string to_string(Instrument i) { return i == Instrument::spx ? "SPX" : "VIX"; }

std::string to_string(QuoteKind k) {
  switch (k) {
    case QuoteKind::call:
      return "call";
    case QuoteKind::put:
      return "put";
    case QuoteKind::future:
      return "future";
  }
  return "?";
}

namespace {

std::string lower_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check_quote(const Quote& q) {
  if (!(q.maturity > 0.0)) throw std::invalid_argument("quote maturity must be positive");
  if (!(q.bid <= q.ask)) throw std::invalid_argument("quote bid exceeds ask");
  if (!std::isfinite(q.bid) || !std::isfinite(q.ask)) throw std::invalid_argument("quote is not finite");
  if (q.kind != QuoteKind::future && !(q.strike > 0.0))
    throw std::invalid_argument("option strike must be positive");
  if (q.kind == QuoteKind::future && q.instrument == Instrument::spx)
    throw std::invalid_argument("SPX futures are not supported (the index forward is 1)");
}

}  // namespace

QuoteSet::QuoteSet(std::vector<Quote> quotes) : quotes_(std::move(quotes)) {
  for (const auto& q : quotes_) check_quote(q);
}

QuoteSet QuoteSet::read_csv(std::istream& is) {
  std::vector<Quote> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument("quotes line " + std::to_string(line_no) + ": " + what);
    };
    if (!header) {
      if (lower_case(t) != "instrument,kind,maturity,strike,bid,ask")
        fail("expected header instrument,kind,maturity,strike,bid,ask");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(trim(cell));
    if (f.size() != 6) fail("expected 6 fields, got " + std::to_string(f.size()));
    Quote q;
    const std::string inst = lower_case(f[0]);
    if (inst == "spx" || inst == "sp500") q.instrument = Instrument::spx;
    else if (inst == "vix") q.instrument = Instrument::vix;
    else fail("unknown instrument '" + f[0] + "'");
    const std::string kind = lower_case(f[1]);
    if (kind == "call") q.kind = QuoteKind::call;
    else if (kind == "put") q.kind = QuoteKind::put;
    else if (kind == "future") q.kind = QuoteKind::future;
    else fail("unknown kind '" + f[1] + "'");
    try {
      q.maturity = std::stod(f[2]);
      q.strike = f[3].empty() ? 0.0 : std::stod(f[3]);
      q.bid = std::stod(f[4]);
      q.ask = std::stod(f[5]);
      check_quote(q);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    out.push_back(q);
  }
  if (!header) throw std::invalid_argument("quotes: missing header");
  return QuoteSet(std::move(out));
}

void QuoteSet::write_csv(std::ostream& os) const {
  const auto old = os.precision(17);
  os << "instrument,kind,maturity,strike,bid,ask\n";
  for (const auto& q : quotes_)
    os << to_string(q.instrument) << ',' << to_string(q.kind) << ',' << q.maturity << ','
       << q.strike << ',' << q.bid << ',' << q.ask << '\n';
  os.precision(old);
}

std::vector<double> QuoteSet::maturities(Instrument inst) const {
  std::vector<double> t;
  for (const auto& q : quotes_)
    if (q.instrument == inst && std::find(t.begin(), t.end(), q.maturity) == t.end())
      t.push_back(q.maturity);
  std::sort(t.begin(), t.end());
  return t;
}

std::optional<double> QuoteSet::future_mid(double maturity) const {
  for (const auto& q : quotes_)
    if (q.instrument == Instrument::vix && q.kind == QuoteKind::future && q.maturity == maturity)
      return q.mid();
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

bool indexed(const std::string& name, const char* prefix, std::size_t& index) {
  const std::size_t n = std::char_traits<char>::length(prefix);
  if (name.size() <= n || name.compare(0, n, prefix) != 0) return false;
  const std::string rest = name.substr(n);
  if (!std::all_of(rest.begin(), rest.end(), ::isdigit)) return false;
  index = std::stoul(rest);
  return index >= 1;
}

}  // namespace

double get_param(const ModelParams& mp, const std::string& name) {
  std::size_t i = 0;
  if (name == "hurst") return mp.alpha - 0.5;
  if (name == "alpha") return mp.alpha;
  if (name == "rho") return mp.rho;
  if (name == "eta") return mp.eta;
  if (name == "theta") return mp.theta;
  if (name == "gamma") return mp.gamma;
  if (name == "xi0") return mp.xi0.flat_level();
  if (name == "x0") return mp.x0;
  if (indexed(name, "mu", i) && i <= mp.ctmc.size()) return mp.ctmc.value(i - 1);
  if (indexed(name, "q", i) && i <= mp.ctmc.size()) return mp.ctmc.intensity(i - 1);
  throw std::invalid_argument("unknown parameter '" + name + "'");
}

void set_param(ModelParams& mp, const std::string& name, double value) {
  std::size_t i = 0;
  if (name == "hurst") mp.alpha = value + 0.5;
  else if (name == "alpha") mp.alpha = value;
  else if (name == "rho") mp.rho = value;
  else if (name == "eta") mp.eta = value;
  else if (name == "theta") mp.theta = value;
  else if (name == "gamma") mp.gamma = value;
  else if (name == "xi0") {
    if (!mp.xi0.is_flat()) throw std::invalid_argument("xi0 can only be calibrated for a flat curve");
    mp.xi0 = ForwardCurve(value);
  } else if (name == "x0") mp.x0 = value;
  else if ((indexed(name, "mu", i) || indexed(name, "q", i)) && i <= mp.ctmc.size()) {
    auto values = mp.ctmc.values();
    auto q = mp.ctmc.intensities();
    (name[0] == 'm' ? values : q)[i - 1] = value;
    mp.ctmc = ctmc::CtmcSpec(values, q, mp.ctmc.transition_matrix(), mp.ctmc.initial_state());
  } else {
    throw std::invalid_argument("unknown parameter '" + name + "'");
  }
}

ParamBox::ParamBox(std::vector<Bound> bounds) : bounds_(std::move(bounds)) {
  for (const auto& b : bounds_)
    if (!b.fixed && !(b.min <= b.max))
      throw std::invalid_argument("parameter box for " + b.name + " has min > max");
}

namespace {

std::vector<Bound> box_of(double h_lo, double h_hi, double eta_lo, double theta_lo, double theta_hi,
                          double gamma_lo, double gamma_hi, double mu1_hi, std::size_t m) {
  std::vector<Bound> b = {{"hurst", h_lo, h_hi, false},    {"rho", -0.95, -0.95, true},
                          {"eta", eta_lo, 0.99, false},    {"theta", theta_lo, theta_hi, false},
                          {"gamma", gamma_lo, gamma_hi, false}};
  for (std::size_t i = 1; i <= m; ++i)
    b.push_back({"mu" + std::to_string(i), 0.0, i == 1 ? mu1_hi : 20.0, false});
  for (std::size_t i = 1; i <= m; ++i)
    b.push_back({"q" + std::to_string(i), 0.0, i == 1 ? 2.0 : 15.0, false});
  b.push_back({"xi0", 0.0001, 0.25, false});
  b.push_back({"x0", 0.0, 0.0, true});
  return b;
}

}  // namespace

ParamBox ParamBox::spx_default(std::size_t m) {
  return ParamBox(box_of(0.07, 0.13, -0.99, 0.1, 10.0, 0.0, 0.4, 1.0, m));
}
ParamBox ParamBox::vix_default(std::size_t m) {
  return ParamBox(box_of(0.07, 0.13, 0.0, 0.1, 10.0, 0.01, 0.2, 1.0, m));
}
ParamBox ParamBox::joint_default(std::size_t m) {
  return ParamBox(box_of(0.07, 0.13, -0.99, 0.0, 6.0, 0.0, 0.3, 5.0, m));
}

Bound& ParamBox::bound(const std::string& name) {
  for (auto& b : bounds_)
    if (b.name == name) return b;
  throw std::invalid_argument("parameter box has no entry '" + name + "'");
}

const Bound& ParamBox::bound(const std::string& name) const {
  return const_cast<ParamBox*>(this)->bound(name);
}

std::vector<std::string> ParamBox::free_names() const {
  std::vector<std::string> out;
  for (const auto& b : bounds_)
    if (!b.fixed) out.push_back(b.name);
  return out;
}

std::vector<double> ParamBox::lower() const {
  std::vector<double> out;
  for (const auto& b : bounds_)
    if (!b.fixed) out.push_back(b.min);
  return out;
}

std::vector<double> ParamBox::upper() const {
  std::vector<double> out;
  for (const auto& b : bounds_)
    if (!b.fixed) out.push_back(b.max);
  return out;
}

std::vector<double> ParamBox::pack(const ModelParams& mp) const {
  std::vector<double> out;
  for (const auto& b : bounds_)
    if (!b.fixed) out.push_back(get_param(mp, b.name));
  return out;
}

ModelParams ParamBox::unpack(const ModelParams& base, const std::vector<double>& free) const {
  ModelParams mp = base;
  std::size_t i = 0;
  for (const auto& b : bounds_) {
    if (b.fixed) continue;
    if (i >= free.size()) throw std::invalid_argument("unpack: too few free values");
    set_param(mp, b.name, free[i++]);
  }
  if (i != free.size()) throw std::invalid_argument("unpack: too many free values");
  return mp;
}

bool ParamBox::contains(const ModelParams& mp, double tol) const {
  for (const auto& b : bounds_) {
    if (b.fixed) continue;
    const double v = get_param(mp, b.name);
    if (v < b.min - tol || v > b.max + tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

LossConfig default_loss_config() {
  LossConfig cfg;
  cfg.gsurface.n_paths = 4000;
  cfg.vix.method = Method::mcvr;
  cfg.vix.n_paths = 4000;
  cfg.spx.method = Method::simple;
  cfg.spx.n_paths = 4000;
  return cfg;
}

namespace {

using SurfaceFn = std::function<std::shared_ptr<const GSurface>(const ModelParams&, double)>;

double surface_horizon(const ModelParams& mp, const QuoteSet& quotes) {
  const auto t_vix = quotes.maturities(Instrument::vix);
  const auto t_spx = quotes.maturities(Instrument::spx);
  double tau_max = 0.0;
  if (!t_vix.empty()) tau_max = std::max(tau_max, t_vix.back() + mp.delta);
  if (!t_spx.empty()) tau_max = std::max(tau_max, t_spx.back());
  return tau_max * 1.001;
}

std::size_t surface_nodes(double tau_max, const LossConfig& cfg) {
  if (cfg.tau_step <= 0.0) return 64;
  return std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(tau_max / cfg.tau_step)) + 1);
}

std::shared_ptr<const GSurface> fresh_surface(const ModelParams& mp, double tau_max,
                                              const LossConfig& cfg) {
  return std::make_shared<const GSurface>(
      build_g_surface(mp, default_tau_grid(tau_max, surface_nodes(tau_max, cfg)), cfg.gsurface));
}

double call_from_quote(const Quote& q, double price, double forward) {
  return q.kind == QuoteKind::put ? price + forward - q.strike : price;
}

std::vector<Residual> compute_residuals(const ModelParams& mp, const QuoteSet& quotes,
                                        const LossConfig& cfg, const SurfaceFn& surface) {
  if (quotes.empty()) throw std::invalid_argument("loss: no quotes");
  mp.validate();
  const auto t_vix = quotes.maturities(Instrument::vix);
  const auto t_spx = quotes.maturities(Instrument::spx);
  const auto gs = surface(mp, surface_horizon(mp, quotes));

  std::vector<Residual> out(quotes.quotes().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].quote = quotes.quotes()[i];

  auto leg = [&](Instrument inst, const std::vector<double>& maturities) {
    const double leg_w = inst == Instrument::vix ? cfg.vix_weight : cfg.spx_weight;
    for (std::size_t im = 0; im < maturities.size(); ++im) {
      const double t = maturities[im];
      std::vector<std::size_t> idx;
      std::vector<double> strikes;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& q = out[i].quote;
        if (q.instrument != inst || q.maturity != t) continue;
        idx.push_back(i);
        if (q.kind != QuoteKind::future) strikes.push_back(q.strike);
      }
      PricingOptions po = inst == Instrument::vix ? cfg.vix : cfg.spx;
      const auto& frozen = inst == Instrument::vix ? cfg.vix_allocation : cfg.spx_allocation;
      if (auto it = frozen.find(t); it != frozen.end()) po.allocation = it->second;
      po.sampling.seed = derive_seed(po.sampling.seed, {inst == Instrument::vix ? 0x7u : 0x5u, im});
      const Smile smile = inst == Instrument::vix ? price_vix(mp, *gs, t, strikes, po)
                                                  : price_spx(mp, *gs, t, strikes, po);
      const double f_model = inst == Instrument::vix ? smile.forward.value : 1.0;
      const double f_market = inst == Instrument::vix ? quotes.future_mid(t).value_or(f_model) : 1.0;
      std::size_t js = 0;
      for (std::size_t i : idx) {
        Residual& r = out[i];
        const auto& q = r.quote;
        if (q.kind == QuoteKind::future) {
          r.market = q.mid();
          r.model = f_model;
          r.residual = std::sqrt(cfg.future_weight * leg_w) * (f_model - q.mid()) / q.mid();
          continue;
        }
        const double model_price = smile.calls[js++].value;
        const auto iv_market = implied_vol(call_from_quote(q, q.mid(), f_market), f_market, q.strike, t);
        if (!iv_market) {
          r.skipped = true;
          r.note = "market price outside no-arbitrage bounds";
          continue;
        }
        r.market = *iv_market;
        const auto iv_model = implied_vol(model_price, f_model, q.strike, t);
        if (!iv_model) {
          r.model = std::numeric_limits<double>::quiet_NaN();
          r.residual = cfg.failure_residual;
          r.note = "model price has no implied vol";
          continue;
        }
        r.model = *iv_model;
        r.residual = std::sqrt(cfg.option_weight * leg_w) * (*iv_model - *iv_market);
      }
    }
  };
  leg(Instrument::vix, t_vix);
  leg(Instrument::spx, t_spx);
  if (std::all_of(out.begin(), out.end(), [](const Residual& r) { return r.skipped; }))
    throw std::invalid_argument("loss: every quote was skipped");
  return out;
}

double sum_squares(const std::vector<Residual>& rs) {
  double s = 0.0;
  for (const auto& r : rs) s += r.residual * r.residual;
  return s;
}

/// G depends on (alpha, theta, gamma, chain) only; finite-difference columns in
/// eta or xi0 reuse the surface of the base point.
class SurfaceCache {
 public:
  explicit SurfaceCache(const LossConfig& cfg) : cfg_(cfg) {}

  std::shared_ptr<const GSurface> get(const ModelParams& mp, double tau_max) {
    std::vector<double> key = {mp.alpha, mp.theta, mp.gamma, tau_max,
                               static_cast<double>(mp.ctmc.initial_state())};
    for (double v : mp.ctmc.values()) key.push_back(v);
    for (double q : mp.ctmc.intensities()) key.push_back(q);
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto gs = fresh_surface(mp, tau_max, cfg_);
    std::lock_guard lock(mutex_);
    if (cache_.size() > 64) cache_.clear();
    cache_.emplace(key, gs);
    return gs;
  }

 private:
  const LossConfig& cfg_;
  std::mutex mutex_;
  std::map<std::vector<double>, std::shared_ptr<const GSurface>> cache_;
};

/// The mcvr sample sizes depend on the intensities through floor(); fixing
/// them keeps the loss continuous in q under common random numbers.
LossConfig freeze_allocations(const ModelParams& mp, const QuoteSet& quotes, LossConfig cfg) {
  if (!cfg.freeze_allocation) return cfg;
  mp.validate();
  if (cfg.gsurface.method == Method::mcvr && cfg.gsurface.allocation.empty()) {
    const double tau_max = surface_horizon(mp, quotes);
    cfg.gsurface.allocation = g_surface_allocation(
        mp, default_tau_grid(tau_max, surface_nodes(tau_max, cfg)), cfg.gsurface);
  }
  if (cfg.vix.method == Method::mcvr)
    for (double t : quotes.maturities(Instrument::vix))
      if (t > 0.0 && !cfg.vix_allocation.count(t)) cfg.vix_allocation[t] = vix_allocation(mp, t, cfg.vix);
  if (cfg.spx.method == Method::mcvr)
    for (double t : quotes.maturities(Instrument::spx))
      if (!cfg.spx_allocation.count(t)) cfg.spx_allocation[t] = spx_allocation(mp, t, cfg.spx);
  return cfg;
}

}  // namespace

std::vector<Residual> residuals(const ModelParams& mp, const QuoteSet& quotes, const LossConfig& cfg) {
  return compute_residuals(mp, quotes, cfg, [&](const ModelParams& m, double tau_max) {
    return fresh_surface(m, tau_max, cfg);
  });
}

double loss(const ModelParams& mp, const QuoteSet& quotes, const LossConfig& cfg) {
  return sum_squares(residuals(mp, quotes, cfg));
}

CalibrationReport calibrate(const ModelParams& initial, const ParamBox& box, const QuoteSet& quotes,
                            const LossConfig& cfg_in, const optim::Options& opt) {
  if (!box.contains(initial)) throw std::invalid_argument("calibrate: initial point outside the box");
  if (quotes.empty()) throw std::invalid_argument("calibrate: no quotes");
  const LossConfig cfg = freeze_allocations(initial, quotes, cfg_in);
  SurfaceCache cache(cfg);
  const SurfaceFn surface = [&](const ModelParams& m, double tau_max) { return cache.get(m, tau_max); };

  auto residual_vector = [&](const std::vector<double>& x) {
    std::vector<double> r;
    ModelParams mp;
    try {
      mp = box.unpack(initial, x);
      for (const auto& res : compute_residuals(mp, quotes, cfg, surface)) r.push_back(res.residual);
    } catch (const std::invalid_argument&) {
      // parameters the model rejects (e.g. alpha at the boundary) score as failures
      r.assign(quotes.quotes().size(), cfg.failure_residual);
    }
    return r;
  };
  const optim::BatchResiduals batch = [&](const std::vector<std::vector<double>>& xs) {
    std::vector<std::vector<double>> out(xs.size());
    parallel_blocks(xs.size(), cfg.workers, [&](std::size_t i) { out[i] = residual_vector(xs[i]); });
    return out;
  };

  CalibrationReport rep{initial, initial, box, {}, {}};
  rep.optimizer = optim::least_squares(batch, box.pack(initial), box.lower(), box.upper(), opt);
  rep.fitted = box.unpack(initial, rep.optimizer.x);
  rep.residuals = compute_residuals(rep.fitted, quotes, cfg, surface);
  return rep;
}

void CalibrationReport::write_parameters(std::ostream& os) const {
  const auto old = os.precision(10);
  os << "parameter,initial,fitted,min,max\n";
  for (const auto& b : box.bounds()) {
    const double v0 = get_param(initial, b.name);
    const double v1 = get_param(fitted, b.name);
    os << b.name << ',' << v0 << ',' << v1 << ',' << (b.fixed ? v0 : b.min) << ','
       << (b.fixed ? v0 : b.max) << '\n';
  }
  os.precision(old);
}

void CalibrationReport::write_residuals(std::ostream& os) const {
  const auto old = os.precision(10);
  os << "instrument,kind,maturity,strike,market,model,residual,note\n";
  for (const auto& r : residuals)
    os << to_string(r.quote.instrument) << ',' << to_string(r.quote.kind) << ',' << r.quote.maturity
       << ',' << r.quote.strike << ',' << r.market << ',' << r.model << ',' << r.residual << ','
       << (r.skipped ? "skipped: " : "") << r.note << '\n';
  os.precision(old);
}

}  // namespace fouvol::calib
