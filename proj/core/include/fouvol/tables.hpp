#pragma once

// Delimited output tables and the repeated-smile comparison of estimators.

#include <chrono>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fouvol/g_surface.hpp"
#include "fouvol/pricing_vix.hpp"

namespace fouvol {

enum class Underlying { vix, spx };

/// "vix" or "spx"; throws std::invalid_argument otherwise.
Underlying parse_underlying(const std::string& name);
const char* to_string(Underlying u);

/// Dispatches to price_vix or price_spx.
Smile price_smile(Underlying u, const ModelParams& mp, const GSurface& gsurf, double t,
                  std::span<const double> strikes, const PricingOptions& opt);

/// Rows maturity,kind,strike,price,stderr,implied_vol: one future row (the
/// VIX future, or E[S_T] for the index) followed by one call row per strike.
/// Implied vols use the estimated forward for the VIX and 1 for the index;
/// an empty field means no implied vol exists for the price.
void write_smile_header(std::ostream& os);
void write_smile(std::ostream& os, Underlying u, const Smile& smile);

struct CompareRow {
  Method method = Method::simple;
  double strike = 0.0;
  double mean_price = 0.0;
  double std_price = 0.0;
  double mean_iv = 0.0;
  double std_iv = 0.0;
  std::size_t iv_count = 0;  ///< repeats with an implied vol
};

struct CompareResult {
  std::vector<CompareRow> rows;            ///< strikes x methods, method-major
  std::map<Method, double> seconds;        ///< wall clock per method over all repeats
  std::map<Method, double> forward_std;    ///< std of the future across repeats
};

/// Prices `repeats` independent smiles per method (seeds derived from
/// base.sampling.seed, the repeat index and the method) and reports the mean
/// and sample standard deviation of each strike's price and implied vol.
/// `paths` overrides base.n_paths per method.
CompareResult compare_methods(Underlying u, const ModelParams& mp, const GSurface& gsurf, double t,
                              std::span<const double> strikes, std::span<const Method> methods,
                              std::size_t repeats, const PricingOptions& base,
                              const std::map<Method, std::size_t>& paths = {});

/// Header method,strike,mean_price,std_price,mean_iv,std_iv.
void write_compare(std::ostream& os, const CompareResult& res);

}  // namespace fouvol
