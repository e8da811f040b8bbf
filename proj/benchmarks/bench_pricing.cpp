#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "fouvol/g_surface.hpp"
#include "fouvol/presets.hpp"
#include "fouvol/pricing_equity.hpp"
#include "fouvol/pricing_vix.hpp"

namespace {

using namespace fouvol;

const GSurface& vix_surface() {
  static const GSurface gs = [] {
    const auto mp = presets::vix_calibrated();
    GSurfaceOptions go;
    go.n_paths = 4000;
    return build_g_surface(mp, default_tau_grid(0.25 + mp.delta + 0.01, 64), go);
  }();
  return gs;
}

void BM_GSurface(benchmark::State& state) {
  const auto mp = presets::vix_calibrated();
  GSurfaceOptions go;
  go.n_paths = static_cast<std::size_t>(state.range(0));
  const auto tau = default_tau_grid(0.35, 32);
  for (auto _ : state) benchmark::DoNotOptimize(build_g_surface(mp, tau, go));
}
BENCHMARK(BM_GSurface)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_VixSmile(benchmark::State& state) {
  const auto mp = presets::vix_calibrated();
  const auto& gs = vix_surface();
  const std::vector<double> k = {0.18, 0.2, 0.22, 0.25, 0.3};
  PricingOptions po;
  po.method = static_cast<Method>(state.range(0));
  po.n_paths = 5000;
  for (auto _ : state) benchmark::DoNotOptimize(price_vix(mp, gs, 0.25, k, po));
  state.SetLabel(std::string(to_string(po.method)));
}
BENCHMARK(BM_VixSmile)
    ->Arg(static_cast<int>(Method::simple))
    ->Arg(static_cast<int>(Method::cv))
    ->Arg(static_cast<int>(Method::mcvr))
    ->Unit(benchmark::kMillisecond);

void BM_SpxSmile(benchmark::State& state) {
  const auto mp = presets::vix_calibrated();
  const auto& gs = vix_surface();
  const std::vector<double> k = {0.9, 0.95, 1.0, 1.05, 1.1};
  PricingOptions po;
  po.method = static_cast<Method>(state.range(0));
  po.n_paths = 5000;
  for (auto _ : state) benchmark::DoNotOptimize(price_spx(mp, gs, 0.25, k, po));
  state.SetLabel(std::string(to_string(po.method)));
}
BENCHMARK(BM_SpxSmile)
    ->Arg(static_cast<int>(Method::simple))
    ->Arg(static_cast<int>(Method::mcvr))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
