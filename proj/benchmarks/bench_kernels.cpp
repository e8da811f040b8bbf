#include <benchmark/benchmark.h>

#include <vector>

#include "fouvol/ml_table.hpp"
#include "fouvol/random.hpp"
#include "fouvol/specfun.hpp"
#include "fouvol/volterra.hpp"

namespace {

using namespace fouvol;

void BM_MittagLeffler(benchmark::State& state) {
  const double z = -static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(specfun::mittag_leffler(0.6, 0.6, z));
}
BENCHMARK(BM_MittagLeffler)->Arg(1)->Arg(10)->Arg(100);

void BM_KernelTableBuild(benchmark::State& state) {
  const specfun::KernelParams kp(0.5938, 5.9165);
  for (auto _ : state) {
    specfun::KernelTable table(kp, 1.0);
    benchmark::DoNotOptimize(table.psi(0.5));
  }
}
BENCHMARK(BM_KernelTableBuild)->Unit(benchmark::kMillisecond);

void BM_KernelTableLookup(benchmark::State& state) {
  const specfun::KernelTable table(specfun::KernelParams(0.5938, 5.9165), 1.0);
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-4;
    if (x > 1.0) x = 1e-4;
    benchmark::DoNotOptimize(table.e_theta(x));
  }
}
BENCHMARK(BM_KernelTableLookup);

void BM_HybridPath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TimeGrid grid{0.25, n};
  const HybridScheme scheme(KernelKind::e_theta, specfun::KernelParams(0.5938, 5.9165), grid);
  RandomStream rng(1);
  VolterraDriver d;
  std::vector<double> out(n + 1);
  for (auto _ : state) {
    draw_driver(scheme.law(), n, rng, d);
    scheme.simulate(d, out);
    benchmark::DoNotOptimize(out.back());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HybridPath)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNSquared);

}  // namespace
