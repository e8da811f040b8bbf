#include "fouvol/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "fouvol/presets.hpp"

namespace fouvol::config {

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : std::invalid_argument(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                                     : source + ": " + message),
      line_(line) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

class Entries {
 public:
  explicit Entries(std::string source) : source_(std::move(source)) {}

  void add(const std::string& key, std::string value, std::size_t line) {
    auto [it, fresh] = map_.emplace(key, Entry{std::move(value), line, false});
    if (!fresh) fail(line, "duplicate key '" + key + "' (first set on line " +
                               std::to_string(it->second.line) + ")");
  }

  const Entry* find(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::size_t line_of(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? 0 : it->second.line;
  }

  std::vector<std::pair<std::string, const Entry*>> with_prefix(const std::string& prefix) {
    std::vector<std::pair<std::string, const Entry*>> out;
    for (auto& [k, e] : map_)
      if (k.rfind(prefix, 0) == 0) {
        e.used = true;
        out.emplace_back(k.substr(prefix.size()), &e);
      }
    return out;
  }

  void reject_unused() const {
    const Entry* first = nullptr;
    std::string name;
    for (const auto& [k, e] : map_)
      if (!e.used && (!first || e.line < first->line)) {
        first = &e;
        name = k;
      }
    if (first) fail(first->line, "unknown key '" + name + "'");
  }

  [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
    throw ConfigError(source_, line, msg);
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, Entry> map_;
};

double to_double(Entries& en, const Entry& e, const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* end = b + text.size();
  auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(v))
    en.fail(e.line, "expected a number, got '" + text + "'");
  return v;
}

std::size_t to_count(Entries& en, const Entry& e, const std::string& text) {
  std::size_t v = 0;
  const char* b = text.data();
  const char* end = b + text.size();
  auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    en.fail(e.line, "expected a non-negative integer, got '" + text + "'");
  return v;
}

std::vector<double> to_list(Entries& en, const Entry& e) {
  std::vector<double> out;
  for (const auto& item : split(e.value, ',')) out.push_back(to_double(en, e, item));
  return out;
}

Method to_method(Entries& en, const Entry& e) {
  try {
    return parse_method(e.value);
  } catch (const std::invalid_argument& ex) {
    en.fail(e.line, ex.what());
  }
}

template <class T, class Fn>
void read(Entries& en, const std::string& key, T& target, Fn&& convert) {
  if (const Entry* e = en.find(key)) target = convert(en, *e);
}

void read_double(Entries& en, const std::string& key, double& target) {
  read(en, key, target, [](Entries& x, const Entry& e) { return to_double(x, e, e.value); });
}

void read_count(Entries& en, const std::string& key, std::size_t& target) {
  read(en, key, target, [](Entries& x, const Entry& e) { return to_count(x, e, e.value); });
}

void read_choice(Entries& en, const std::string& key, std::string& target,
                 std::initializer_list<const char*> allowed) {
  const Entry* e = en.find(key);
  if (!e) return;
  for (const char* a : allowed)
    if (e->value == a) {
      target = e->value;
      return;
    }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  en.fail(e->line, "'" + key + "' must be one of " + list + ", got '" + e->value + "'");
}

void parse_model(Entries& en, ModelParams& mp) {
  if (const Entry* e = en.find("model.preset")) {
    if (e->value == "spx") mp = presets::spx_calibrated();
    else if (e->value == "vix") mp = presets::vix_calibrated();
    else if (e->value == "joint") mp = presets::joint_calibrated();
    else en.fail(e->line, "preset must be spx, vix or joint, got '" + e->value + "'");
  }
  const Entry* hurst = en.find("model.hurst");
  const Entry* alpha = en.find("model.alpha");
  if (hurst && alpha) en.fail(alpha->line, "set either hurst or alpha, not both");
  if (hurst) mp.alpha = to_double(en, *hurst, hurst->value) + 0.5;
  if (alpha) mp.alpha = to_double(en, *alpha, alpha->value);
  read_double(en, "model.rho", mp.rho);
  read_double(en, "model.eta", mp.eta);
  read_double(en, "model.theta", mp.theta);
  read_double(en, "model.gamma", mp.gamma);
  read_double(en, "model.x0", mp.x0);
  read_double(en, "model.vix_window", mp.delta);

  const Entry* flat = en.find("model.xi0");
  const Entry* xu = en.find("model.xi0_u");
  const Entry* xv = en.find("model.xi0_values");
  if (flat && (xu || xv)) en.fail(flat->line, "set either xi0 or xi0_u/xi0_values, not both");
  if (flat) {
    const double v = to_double(en, *flat, flat->value);
    if (!(v > 0.0)) en.fail(flat->line, "xi0 must be positive");
    mp.xi0 = ForwardCurve(v);
  }
  if (xu || xv) {
    if (!(xu && xv)) en.fail((xu ? xu : xv)->line, "xi0_u and xi0_values must be given together");
    try {
      mp.xi0 = ForwardCurve(to_list(en, *xu), to_list(en, *xv));
    } catch (const std::invalid_argument& ex) {
      en.fail(xv->line, ex.what());
    }
  }

  const auto fail_at = [&](std::initializer_list<const char*> keys, const std::string& msg) {
    std::size_t line = 0;
    for (const char* k : keys) line = std::max(line, en.line_of(k));
    en.fail(line, msg);
  };
  if (!(mp.alpha > 0.5 && mp.alpha < 1.0))
    fail_at({"model.hurst", "model.alpha", "model.preset"},
            "alpha = hurst + 1/2 must lie in (1/2, 1), got " + std::to_string(mp.alpha));
  if (!(std::abs(mp.rho) < 1.0)) fail_at({"model.rho"}, "|rho| must be < 1");
  if (!(std::abs(mp.eta) < 1.0)) fail_at({"model.eta"}, "|eta| must be < 1");
  if (!(mp.theta >= 0.0)) fail_at({"model.theta"}, "theta must be >= 0");
  if (!(mp.gamma >= 0.0)) fail_at({"model.gamma"}, "gamma must be >= 0");
  if (!(mp.delta > 0.0)) fail_at({"model.vix_window"}, "vix_window must be positive");
}

void parse_ctmc(Entries& en, ModelParams& mp) {
  const Entry* values = en.find("ctmc.values");
  const Entry* intens = en.find("ctmc.intensities");
  const Entry* trans = en.find("ctmc.transition");
  const Entry* init = en.find("ctmc.initial_state");
  if (!values && !intens && !trans && !init) return;

  std::vector<double> v = values ? to_list(en, *values) : mp.ctmc.values();
  std::vector<double> q = intens ? to_list(en, *intens) : mp.ctmc.intensities();
  if (values && !intens && v.size() != q.size()) q.assign(v.size(), 0.0);
  for (double x : q)
    if (x < 0.0) en.fail(intens->line, "intensities must be >= 0");
  if (v.size() != q.size())
    en.fail((intens ? intens : values)->line,
            "values and intensities have different lengths (" + std::to_string(v.size()) +
                " and " + std::to_string(q.size()) + ")");
  std::size_t s0 = mp.ctmc.initial_state();
  if (init) s0 = to_count(en, *init, init->value);

  std::vector<std::vector<double>> p;
  if (trans) {
    for (const auto& row : split(trans->value, ';')) {
      std::vector<double> r;
      for (const auto& item : split(row, ',')) r.push_back(to_double(en, *trans, item));
      p.push_back(std::move(r));
    }
  } else if (!values && !intens) {
    p = mp.ctmc.transition_matrix();
  }
  const std::size_t line = std::max({values ? values->line : 0, intens ? intens->line : 0,
                                     trans ? trans->line : 0, init ? init->line : 0});
  try {
    mp.ctmc = p.empty() ? ctmc::CtmcSpec::uniform_jumps(v, q, s0)
                        : ctmc::CtmcSpec(v, q, p, s0);
  } catch (const std::invalid_argument& ex) {
    en.fail(line, ex.what());
  }
}

void parse_simulation(Entries& en, SimulationConfig& sim) {
  read_choice(en, "simulation.instrument", sim.instrument, {"vix", "spx"});
  read(en, "simulation.method", sim.method, to_method);
  if (const Entry* e = en.find("simulation.seed")) sim.seed = to_count(en, *e, e->value);
  read_count(en, "simulation.paths", sim.paths);
  read_count(en, "simulation.steps", sim.steps);
  if (const Entry* e = en.find("simulation.maturities")) {
    sim.maturities = to_list(en, *e);
    for (double t : sim.maturities)
      if (!(t > 0.0)) en.fail(e->line, "maturities must be positive");
  }
  if (const Entry* e = en.find("simulation.strikes")) sim.strikes = to_list(en, *e);
  std::string mode = sim.strike_mode == StrikeMode::moneyness ? "moneyness" : "absolute";
  read_choice(en, "simulation.strike_mode", mode, {"moneyness", "absolute"});
  sim.strike_mode = mode == "moneyness" ? StrikeMode::moneyness : StrikeMode::absolute;
  read_count(en, "simulation.k_max", sim.k_max);
  read_count(en, "simulation.n_min", sim.n_min);
  if (const Entry* e = en.find("simulation.kappa")) {
    const auto k = to_count(en, *e, e->value);
    if (k < 1 || k > 8) en.fail(e->line, "kappa must be between 1 and 8");
    sim.kappa = static_cast<int>(k);
  }
  read_count(en, "simulation.vix_nodes", sim.vix_nodes);
  read(en, "simulation.gsurface_method", sim.gsurface_method, to_method);
  if (sim.gsurface_method == Method::cv)
    en.fail(en.line_of("simulation.gsurface_method"), "gsurface_method must be simple or mcvr");
  read_count(en, "simulation.gsurface_paths", sim.gsurface_paths);
  read_count(en, "simulation.tau_points", sim.tau_points);
  if (sim.tau_points < 4) en.fail(en.line_of("simulation.tau_points"), "tau_points must be >= 4");
  read_double(en, "simulation.tau_max", sim.tau_max);
  if (const Entry* e = en.find("simulation.gsurface_file")) sim.gsurface_file = e->value;
  if (const Entry* e = en.find("simulation.workers"))
    sim.workers = static_cast<unsigned>(std::max<std::size_t>(1, to_count(en, *e, e->value)));
  if (sim.paths == 0) en.fail(en.line_of("simulation.paths"), "paths must be positive");
  if (sim.vix_nodes < 2) en.fail(en.line_of("simulation.vix_nodes"), "vix_nodes must be >= 2");
}

void parse_compare(Entries& en, CompareConfig& cmp) {
  if (const Entry* e = en.find("compare.methods")) {
    cmp.methods.clear();
    for (const auto& name : split(e->value, ',')) {
      Entry item{name, e->line, true};
      cmp.methods.push_back(to_method(en, item));
    }
  }
  read_count(en, "compare.repeats", cmp.repeats);
  if (cmp.repeats == 0) en.fail(en.line_of("compare.repeats"), "repeats must be positive");
  for (const auto& [suffix, e] : en.with_prefix("compare.paths_")) {
    Entry item{suffix, e->line, true};
    cmp.paths[to_method(en, item)] = to_count(en, *e, e->value);
  }
}

void parse_calibration(Entries& en, CalibrationConfig& cal) {
  read_choice(en, "calibration.target", cal.target, {"spx", "vix", "joint"});
  if (const Entry* e = en.find("calibration.quotes")) cal.quotes = e->value;
  if (const Entry* e = en.find("calibration.algorithm")) {
    try {
      cal.optimizer.algorithm = optim::parse_algorithm(e->value);
    } catch (const std::invalid_argument& ex) {
      en.fail(e->line, ex.what());
    }
  }
  read_count(en, "calibration.max_iterations", cal.optimizer.max_iterations);
  read_double(en, "calibration.fd_step", cal.optimizer.fd_step);
  read_double(en, "calibration.ftol", cal.optimizer.ftol);
  read_double(en, "calibration.xtol", cal.optimizer.xtol);
  auto& loss = cal.loss;
  read_double(en, "calibration.option_weight", loss.option_weight);
  read_double(en, "calibration.future_weight", loss.future_weight);
  read_double(en, "calibration.spx_weight", loss.spx_weight);
  read_double(en, "calibration.vix_weight", loss.vix_weight);
  read_double(en, "calibration.tau_step", loss.tau_step);
  read_count(en, "calibration.gsurface_paths", loss.gsurface.n_paths);
  read_count(en, "calibration.vix_paths", loss.vix.n_paths);
  read_count(en, "calibration.spx_paths", loss.spx.n_paths);
  read(en, "calibration.vix_method", loss.vix.method, to_method);
  read(en, "calibration.spx_method", loss.spx.method, to_method);
  if (loss.spx.method == Method::cv)
    en.fail(en.line_of("calibration.spx_method"), "spx_method must be simple or mcvr");
  if (const Entry* e = en.find("calibration.fixed")) cal.fixed = split(e->value, ',');
  for (const auto& [name, e] : en.with_prefix("calibration.bound.")) {
    const auto v = to_list(en, *e);
    if (v.size() != 2 || !(v[0] <= v[1]))
      en.fail(e->line, "bound." + name + " needs 'min, max' with min <= max");
    cal.bounds[name] = {v[0], v[1]};
  }
}

}  // namespace

calib::ParamBox CalibrationConfig::box(std::size_t n_states) const {
  calib::ParamBox b = target == "spx"   ? calib::ParamBox::spx_default(n_states)
                      : target == "vix" ? calib::ParamBox::vix_default(n_states)
                                        : calib::ParamBox::joint_default(n_states);
  for (const auto& [name, range] : bounds) {
    auto& bd = b.bound(name);
    bd.min = range.first;
    bd.max = range.second;
  }
  for (const auto& name : fixed) b.bound(name).fixed = true;
  return b;
}

double RunConfig::surface_horizon() const {
  if (simulation.tau_max > 0.0) return simulation.tau_max;
  const double t = *std::max_element(simulation.maturities.begin(), simulation.maturities.end());
  return (simulation.instrument == "vix" ? t + model.delta : t) * 1.001;
}

GSurfaceOptions RunConfig::gsurface_options() const {
  GSurfaceOptions o;
  o.method = simulation.gsurface_method;
  o.n_paths = simulation.gsurface_paths;
  o.n_min = simulation.n_min;
  o.sampling.seed = derive_seed(simulation.seed, {0x9u});
  o.sampling.workers = simulation.workers;
  return o;
}

PricingOptions RunConfig::pricing_options(Method method) const {
  PricingOptions o;
  o.method = method;
  o.n_paths = simulation.paths;
  o.n_steps = simulation.steps;
  o.n_u = simulation.vix_nodes;
  o.k_max = simulation.k_max;
  o.n_min = simulation.n_min;
  o.kappa = simulation.kappa;
  o.sampling.seed = simulation.seed;
  o.sampling.workers = simulation.workers;
  return o;
}

RunConfig parse(std::istream& is, const std::string& source) {
  Entries en(source);
  static const std::vector<std::string> sections = {"model", "ctmc", "simulation", "compare",
                                                    "calibration"};
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') en.fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end())
        en.fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) en.fail(line_no, "expected 'key = value'");
    if (section.empty()) en.fail(line_no, "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) en.fail(line_no, "empty key");
    en.add(section + "." + key, trim(line.substr(eq + 1)), line_no);
  }

  RunConfig cfg;
  cfg.source = source;
  parse_model(en, cfg.model);
  parse_ctmc(en, cfg.model);
  parse_simulation(en, cfg.simulation);
  parse_compare(en, cfg.compare);
  parse_calibration(en, cfg.calibration);
  en.reject_unused();
  try {
    cfg.model.validate();
    cfg.calibration.box(cfg.model.ctmc.size());
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(source, 0, ex.what());
  }
  cfg.calibration.loss.workers = cfg.simulation.workers;
  return cfg;
}

RunConfig load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path, 0, "cannot open configuration file");
  return parse(is, path);
}

}  // namespace fouvol::config
