#pragma once

// Run configuration: a flat key = value file with [model], [ctmc],
// [simulation], [compare] and [calibration] sections. '#' starts a comment;
// lists are comma separated. Every key is optional and one file
// fully determines a run together with the command-line overrides.
//
//   [model]
//   preset = vix            # spx | vix | joint, Table values as the base
//   hurst = 0.0938          # or alpha = 0.5938
//   rho = -0.95
//   eta = 0.1373
//   theta = 5.9165
//   gamma = 0.1751
//   xi0 = 0.0654            # flat, or xi0_u / xi0_values lists
//   x0 = 0
//   vix_window = 0.0821918
//
//   [ctmc]
//   values = 0.1239, 4.8671
//   intensities = 0.699, 13.4365
//   transition = 0, 1; 1, 0 # rows separated by ';', uniform by default
//   initial_state = 0
//
//   [simulation]
//   instrument = vix        # vix | spx
//   method = mcvr           # simple | cv | mcvr
//   seed = 1
//   paths = 20000
//   steps = 0               # 0: 312 per year
//   maturities = 0.25
//   strikes = 0.8, 0.9, 1, 1.1, 1.2, 1.3
//   strike_mode = moneyness # moneyness (of the forward) | absolute
//   k_max = 4
//   n_min = 64
//   kappa = 1
//   vix_nodes = 32
//   gsurface_method = mcvr
//   gsurface_paths = 20000
//   tau_points = 64
//   tau_max = 0             # 0: longest maturity plus the VIX window
//   gsurface_file =         # load a surface written by `gsurface`
//   workers = 1
//
//   [compare]
//   methods = simple, cv, mcvr
//   repeats = 200
//   paths_simple = 2000     # per-method budgets, default simulation.paths
//
//   [calibration]
//   target = vix            # spx | vix | joint
//   quotes = quotes.csv
//   algorithm = lm          # lm | tr
//   max_iterations = 50
//   fd_step = 0.001
//   option_weight = 1
//   future_weight = 1
//   gsurface_paths = 4000
//   vix_paths = 4000
//   spx_paths = 4000
//   vix_method = mcvr
//   spx_method = simple
//   fixed = rho, x0
//   bound.theta = 0.1, 10

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fouvol/calibration.hpp"
#include "fouvol/estimate.hpp"
#include "fouvol/fou.hpp"
#include "fouvol/optimizer.hpp"

namespace fouvol::config {

/// Invalid configuration; what() carries "source:line: message" when the
/// offending line is known.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class StrikeMode { moneyness, absolute };

struct SimulationConfig {
  std::string instrument = "vix";
  Method method = Method::mcvr;
  std::uint64_t seed = 1;
  std::size_t paths = 20000;
  std::size_t steps = 0;
  std::vector<double> maturities = {0.25};
  std::vector<double> strikes = {0.8, 0.9, 1.0, 1.1, 1.2, 1.3};
  StrikeMode strike_mode = StrikeMode::moneyness;
  std::size_t k_max = 4;
  std::size_t n_min = 64;
  int kappa = 1;
  std::size_t vix_nodes = 32;
  Method gsurface_method = Method::mcvr;
  std::size_t gsurface_paths = 20000;
  std::size_t tau_points = 64;
  double tau_max = 0.0;
  std::string gsurface_file;
  unsigned workers = 1;
  bool reproducible = false;
};

struct CompareConfig {
  std::vector<Method> methods = {Method::simple, Method::cv, Method::mcvr};
  std::size_t repeats = 200;
  std::map<Method, std::size_t> paths;  ///< per-method budget overrides
};

struct CalibrationConfig {
  std::string target = "vix";
  std::string quotes;
  optim::Options optimizer;
  calib::LossConfig loss = calib::default_loss_config();
  std::vector<std::string> fixed;
  std::map<std::string, std::pair<double, double>> bounds;

  /// Default box of the target with the fixed/bound overrides applied.
  calib::ParamBox box(std::size_t n_states) const;
};

struct RunConfig {
  std::string source = "<config>";
  ModelParams model;
  SimulationConfig simulation;
  CompareConfig compare;
  CalibrationConfig calibration;

  /// Horizon of the G surface needed by the configured maturities.
  double surface_horizon() const;
  GSurfaceOptions gsurface_options() const;
  PricingOptions pricing_options(Method method) const;
};

/// Throws ConfigError for syntax errors, unknown keys, malformed values and
/// parameters the model rejects (alpha outside (1/2, 1), |rho| >= 1,
/// |eta| >= 1, negative intensities, malformed chains).
RunConfig parse(std::istream& is, const std::string& source = "<config>");
RunConfig load(const std::string& path);

}  // namespace fouvol::config
