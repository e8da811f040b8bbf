#include "fouvol/tables.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fouvol/black_scholes.hpp"
#include "fouvol/pricing_equity.hpp"

namespace fouvol {

Underlying parse_underlying(const std::string& name) {
  if (name == "vix") return Underlying::vix;
  if (name == "spx") return Underlying::spx;
  throw std::invalid_argument("unknown instrument '" + name + "' (expected vix or spx)");
}

const char* to_string(Underlying u) { return u == Underlying::vix ? "vix" : "spx"; }

Smile price_smile(Underlying u, const ModelParams& mp, const GSurface& gsurf, double t,
                  std::span<const double> strikes, const PricingOptions& opt) {
  return u == Underlying::vix ? price_vix(mp, gsurf, t, strikes, opt)
                              : price_spx(mp, gsurf, t, strikes, opt);
}

namespace {

double smile_forward(Underlying u, const Smile& s) {
  return u == Underlying::vix ? s.forward.value : 1.0;
}

}  // namespace

void write_smile_header(std::ostream& os) {
  os << "maturity,kind,strike,price,stderr,implied_vol\n";
}

void write_smile(std::ostream& os, Underlying u, const Smile& smile) {
  const auto old = os.precision(12);
  os << smile.maturity << ",future,0," << smile.forward.value << ',' << smile.forward.std_error
     << ",\n";
  const double f = smile_forward(u, smile);
  for (std::size_t j = 0; j < smile.strikes.size(); ++j) {
    const auto& c = smile.calls[j];
    os << smile.maturity << ",call," << smile.strikes[j] << ',' << c.value << ',' << c.std_error
       << ',';
    if (auto iv = implied_vol(c.value, f, smile.strikes[j], smile.maturity)) os << *iv;
    os << '\n';
  }
  os.precision(old);
}

CompareResult compare_methods(Underlying u, const ModelParams& mp, const GSurface& gsurf, double t,
                              std::span<const double> strikes, std::span<const Method> methods,
                              std::size_t repeats, const PricingOptions& base,
                              const std::map<Method, std::size_t>& paths) {
  if (repeats == 0) throw std::invalid_argument("compare_methods: repeats must be positive");
  CompareResult res;
  for (Method m : methods) {
    PricingOptions opt = base;
    opt.method = m;
    if (auto it = paths.find(m); it != paths.end()) opt.n_paths = it->second;
    std::vector<RunningStats> price(strikes.size()), iv(strikes.size());
    RunningStats fwd;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t r = 0; r < repeats; ++r) {
      opt.sampling.seed = derive_seed(base.sampling.seed, {0xc0u, static_cast<std::uint64_t>(m), r});
      const Smile s = price_smile(u, mp, gsurf, t, strikes, opt);
      fwd.add(s.forward.value);
      const double f = smile_forward(u, s);
      for (std::size_t j = 0; j < strikes.size(); ++j) {
        price[j].add(s.calls[j].value);
        if (auto v = implied_vol(s.calls[j].value, f, strikes[j], t)) iv[j].add(*v);
      }
    }
    res.seconds[m] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.forward_std[m] = std::sqrt(fwd.variance());
    for (std::size_t j = 0; j < strikes.size(); ++j)
      res.rows.push_back({m, strikes[j], price[j].mean(), std::sqrt(price[j].variance()),
                          iv[j].mean(), std::sqrt(iv[j].variance()), iv[j].count()});
  }
  return res;
}

void write_compare(std::ostream& os, const CompareResult& res) {
  const auto old = os.precision(12);
  os << "method,strike,mean_price,std_price,mean_iv,std_iv\n";
  for (const auto& r : res.rows) {
    os << to_string(r.method) << ',' << r.strike << ',' << r.mean_price << ',' << r.std_price << ',';
    if (r.iv_count > 0) os << r.mean_iv << ',' << r.std_iv;
    else os << ',';
    os << '\n';
  }
  os.precision(old);
}

}  // namespace fouvol
