#pragma once

// Index (SPX) calls by full path simulation, plain or with the regime path
// drawn by the importance-sampled stratified estimator. S0 = 1; strikes are
// moneyness.

#include <span>

#include "fouvol/g_surface.hpp"
#include "fouvol/pricing_vix.hpp"

namespace fouvol {

std::vector<std::size_t> spx_allocation(const ModelParams& mp, double T, const PricingOptions& opt);

/// Method::simple or Method::mcvr; Method::cv throws std::invalid_argument.
/// Smile::forward estimates E[S_T].
Smile price_spx(const ModelParams& mp, const GSurface& gsurf, double T,
                std::span<const double> strikes, const PricingOptions& opt);

Smile price_spx_simple_mc(const ModelParams& mp, const GSurface& gsurf, double T,
                          std::span<const double> strikes, PricingOptions opt);
Smile mcvr_spx(const ModelParams& mp, const GSurface& gsurf, double T,
               std::span<const double> strikes, PricingOptions opt);

}  // namespace fouvol
