// fouvol: G-surface precomputation, pricing, calibration and estimator
// comparison runs driven by one configuration file.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fouvol/black_scholes.hpp"
#include "fouvol/calibration.hpp"
#include "fouvol/config.hpp"
#include "fouvol/g_surface.hpp"
#include "fouvol/tables.hpp"

namespace {

using namespace fouvol;

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> steps;
  std::optional<std::string> method;
  std::optional<unsigned> workers;
  std::string out;
  bool reproducible = false;
};

config::RunConfig load_config(const Flags& f) {
  config::RunConfig cfg;
  if (!f.config.empty()) {
    cfg = config::load(f.config);
  } else {
    std::istringstream empty;
    cfg = config::parse(empty, "<defaults>");
  }
  auto& sim = cfg.simulation;
  if (f.seed) sim.seed = *f.seed;
  if (f.paths) {
    if (*f.paths == 0) throw std::invalid_argument("--paths must be positive");
    sim.paths = *f.paths;
  }
  if (f.steps) sim.steps = *f.steps;
  if (f.method) sim.method = parse_method(*f.method);
  if (f.workers) sim.workers = std::max(1u, *f.workers);
  // Block results are reduced in a fixed order for any worker count; the
  // reproducible mode additionally runs single-threaded.
  if (f.reproducible) {
    sim.reproducible = true;
    sim.workers = 1;
  }
  cfg.calibration.loss.workers = sim.workers;
  return cfg;
}

/// Writes to --out, or stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::invalid_argument("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite " + what);
}

void check_smile(const Smile& s) {
  require_finite(s.forward.value, "forward estimate");
  for (const auto& c : s.calls) require_finite(c.value, "call estimate");
}

GSurface surface_for(const config::RunConfig& cfg) {
  const double horizon = cfg.surface_horizon();
  if (!cfg.simulation.gsurface_file.empty()) {
    std::ifstream is(cfg.simulation.gsurface_file);
    if (!is) throw std::invalid_argument("cannot open G surface '" + cfg.simulation.gsurface_file + "'");
    GSurface gs = GSurface::read(is);
    if (gs.n_states() != cfg.model.ctmc.size())
      throw std::invalid_argument("G surface has " + std::to_string(gs.n_states()) +
                                  " states, the chain has " + std::to_string(cfg.model.ctmc.size()));
    if (std::abs(gs.w() - cfg.model.w()) > 1e-12 * std::max(1.0, cfg.model.w()))
      throw std::invalid_argument("G surface was built for a different gamma");
    if (gs.tau_max() < horizon / 1.001)
      throw std::invalid_argument("G surface covers tau <= " + std::to_string(gs.tau_max()) +
                                  ", need " + std::to_string(horizon));
    return gs;
  }
  return build_g_surface(cfg.model, default_tau_grid(horizon, cfg.simulation.tau_points),
                         cfg.gsurface_options());
}

/// Strikes of the run: moneyness is relative to the VIX future (estimated by a
/// cheap conditional log-normal pilot) or to S0 = 1 for the index.
std::vector<double> strikes_for(const config::RunConfig& cfg, Underlying u, const GSurface& gs,
                                double t) {
  const auto& sim = cfg.simulation;
  if (sim.strike_mode == config::StrikeMode::absolute || u == Underlying::spx) return sim.strikes;
  PricingOptions pilot = cfg.pricing_options(Method::cv);
  pilot.n_paths = std::min<std::size_t>(sim.paths, 4000);
  pilot.sampling.seed = derive_seed(sim.seed, {0x91u});
  const double f = price_vix(cfg.model, gs, t, {}, pilot).forward.value;
  require_finite(f, "pilot VIX future");
  std::vector<double> out;
  for (double m : sim.strikes) out.push_back(m * f);
  return out;
}

int cmd_gsurface(const Flags& flags) {
  const auto cfg = load_config(flags);
  const GSurface gs = build_g_surface(
      cfg.model, default_tau_grid(cfg.surface_horizon(), cfg.simulation.tau_points),
      cfg.gsurface_options());
  for (std::size_t s = 0; s < gs.n_states(); ++s)
    for (double v : gs.values(s)) require_finite(v, "G value");
  Output out(flags.out);
  gs.write(out.stream());
  return 0;
}

int cmd_price(const Flags& flags, const std::string& instrument) {
  auto cfg = load_config(flags);
  if (!instrument.empty()) cfg.simulation.instrument = instrument;
  const Underlying u = parse_underlying(cfg.simulation.instrument);
  if (u == Underlying::spx && cfg.simulation.method == Method::cv)
    throw std::invalid_argument("method cv prices VIX options only");
  const GSurface gs = surface_for(cfg);
  Output out(flags.out);
  write_smile_header(out.stream());
  for (double t : cfg.simulation.maturities) {
    const auto strikes = strikes_for(cfg, u, gs, t);
    PricingOptions po = cfg.pricing_options(cfg.simulation.method);
    po.sampling.seed = derive_seed(cfg.simulation.seed, {0x92u, static_cast<std::uint64_t>(t * 1e6)});
    const Smile smile = price_smile(u, cfg.model, gs, t, strikes, po);
    check_smile(smile);
    write_smile(out.stream(), u, smile);
  }
  return 0;
}

int cmd_compare(const Flags& flags, const std::string& instrument) {
  auto cfg = load_config(flags);
  if (!instrument.empty()) cfg.simulation.instrument = instrument;
  const Underlying u = parse_underlying(cfg.simulation.instrument);
  if (cfg.simulation.maturities.size() != 1)
    throw std::invalid_argument("compare needs exactly one maturity");
  const double t = cfg.simulation.maturities.front();
  const GSurface gs = surface_for(cfg);
  const auto strikes = strikes_for(cfg, u, gs, t);
  const auto res = compare_methods(u, cfg.model, gs, t, strikes, cfg.compare.methods,
                                   cfg.compare.repeats, cfg.pricing_options(Method::simple),
                                   cfg.compare.paths);
  for (const auto& r : res.rows) require_finite(r.mean_price, "mean price");
  Output out(flags.out);
  write_compare(out.stream(), res);
  for (const auto& [m, sec] : res.seconds)
    std::cerr << to_string(m) << ": " << sec << " s over " << cfg.compare.repeats
              << " repeats, future std " << res.forward_std.at(m) << '\n';
  return 0;
}

int cmd_calibrate(const Flags& flags, const std::string& target, const std::string& quotes_path) {
  auto cfg = load_config(flags);
  auto& cal = cfg.calibration;
  if (!target.empty()) cal.target = target;
  if (cal.target != "spx" && cal.target != "vix" && cal.target != "joint")
    throw std::invalid_argument("calibration target must be spx, vix or joint");
  if (!quotes_path.empty()) cal.quotes = quotes_path;
  if (cal.quotes.empty()) throw std::invalid_argument("no quotes file (set calibration.quotes or --quotes)");

  std::ifstream qs(cal.quotes);
  if (!qs) throw std::invalid_argument("cannot open quotes file '" + cal.quotes + "'");
  calib::QuoteSet quotes = calib::QuoteSet::read_csv(qs);
  if (cal.target != "joint") {
    const auto keep = cal.target == "vix" ? calib::Instrument::vix : calib::Instrument::spx;
    std::vector<calib::Quote> sel;
    for (const auto& q : quotes.quotes())
      if (q.instrument == keep) sel.push_back(q);
    quotes = calib::QuoteSet(sel);
  }
  if (quotes.empty()) throw std::invalid_argument("no quotes for target " + cal.target);

  auto& loss = cal.loss;
  const auto seed = cfg.simulation.seed;
  loss.gsurface.sampling.seed = derive_seed(seed, {0x11u});
  loss.vix.sampling.seed = derive_seed(seed, {0x12u});
  loss.spx.sampling.seed = derive_seed(seed, {0x13u});
  if (flags.paths) loss.vix.n_paths = loss.spx.n_paths = *flags.paths;
  if (flags.steps) loss.vix.n_steps = loss.spx.n_steps = *flags.steps;
  if (flags.method) {
    loss.vix.method = cfg.simulation.method;
    if (cfg.simulation.method != Method::cv) loss.spx.method = cfg.simulation.method;
  }
  for (auto* po : {&loss.vix, &loss.spx}) {
    po->k_max = cfg.simulation.k_max;
    po->n_min = cfg.simulation.n_min;
    po->kappa = cfg.simulation.kappa;
    po->n_u = cfg.simulation.vix_nodes;
  }

  const auto box = cal.box(cfg.model.ctmc.size());
  if (!box.contains(cfg.model))
    throw std::invalid_argument("initial parameters lie outside the calibration box");
  const auto rep = calib::calibrate(cfg.model, box, quotes, loss, cal.optimizer);
  require_finite(rep.optimizer.loss, "calibration loss");

  Output out(flags.out);
  rep.write_parameters(out.stream());
  if (flags.out.empty() || flags.out == "-") {
    std::cout << '\n';
    rep.write_residuals(std::cout);
  } else {
    const auto dot = flags.out.rfind('.');
    const std::string stem = dot == std::string::npos ? flags.out : flags.out.substr(0, dot);
    std::ofstream rs(stem + "_residuals.csv");
    if (!rs) throw std::invalid_argument("cannot open residuals file '" + stem + "_residuals.csv'");
    rep.write_residuals(rs);
  }
  std::cerr << "loss " << rep.optimizer.loss_trace.front() << " -> " << rep.optimizer.loss << " after "
            << rep.optimizer.iterations << " iterations (" << rep.optimizer.status << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rough volatility with regime-switching fractional OU: pricing and calibration"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "master random seed");
  app.add_option("--paths", flags.paths, "Monte Carlo paths per estimate");
  app.add_option("--steps", flags.steps, "time steps on [0, t] (0: 312 per year)");
  app.add_option("--method", flags.method, "estimator: simple, cv or mcvr");
  app.add_option("--workers", flags.workers, "worker threads");
  app.add_option("--out", flags.out, "output file (default stdout)");
  app.add_flag("--reproducible", flags.reproducible, "single-threaded deterministic run");
  app.fallthrough();

  auto* gsurface = app.add_subcommand("gsurface", "tabulate G(w, tau, state) and write it");
  std::string price_inst, compare_inst, target, quotes;
  auto* price = app.add_subcommand("price", "price a VIX or index smile");
  price->add_option("instrument", price_inst, "vix or spx")->check(CLI::IsMember({"vix", "spx"}));
  auto* calibrate = app.add_subcommand("calibrate", "fit the model to a quotes file");
  calibrate->add_option("target", target, "spx, vix or joint")->check(CLI::IsMember({"spx", "vix", "joint"}));
  calibrate->add_option("--quotes", quotes, "quotes CSV (instrument,kind,maturity,strike,bid,ask)");
  auto* compare = app.add_subcommand("compare", "repeat smiles per method and report their spread");
  compare->add_option("instrument", compare_inst, "vix or spx")->check(CLI::IsMember({"vix", "spx"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*gsurface) return cmd_gsurface(flags);
    if (*price) return cmd_price(flags, price_inst);
    if (*calibrate) return cmd_calibrate(flags, target, quotes);
    if (*compare) return cmd_compare(flags, compare_inst);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return 0;
}
