#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace fouvol {

/// splitmix64 finaliser; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the stream identified by (master, ids...). Distinct id tuples give
/// statistically independent streams; the mapping is stable across runs.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t id : ids) h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
  return h;
}

/// A single random stream. Not shared between threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t master, std::initializer_list<std::uint64_t> ids)
      : engine_(derive_seed(master, ids)) {}

  double normal() { return normal_(engine_); }
  /// Uniform on the open interval (0, 1).
  double uniform() {
    double u;
    do {
      u = uniform_(engine_);
    } while (u == 0.0);
    return u;
  }
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace fouvol
