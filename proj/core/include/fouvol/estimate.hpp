#pragma once

#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

namespace fouvol {

enum class Method { simple, cv, mcvr };

std::string_view to_string(Method m);
/// Throws std::invalid_argument for unknown names.
Method parse_method(std::string_view name);

/// Monte Carlo result.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  Method method = Method::simple;
};

/// Welford accumulator; merge() combines partial results of independent blocks.
class RunningStats {
 public:
  void add(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const RunningStats& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
  }

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const noexcept {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

  Estimate estimate(Method m) const noexcept { return {mean_, std_error(), n_, m}; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace fouvol
