#pragma once

// Box-constrained nonlinear least squares: projected Levenberg-Marquardt and
// a projected dogleg trust region. Both work in coordinates scaled to the
// unit box and only accept steps that lower the loss, so the loss trace is
// non-increasing and every iterate lies inside the box.

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fouvol::optim {

enum class Algorithm { levenberg_marquardt, trust_region };

Algorithm parse_algorithm(const std::string& name);
const char* to_string(Algorithm a);

/// Residual vectors for a batch of points; the batch form lets callers
/// evaluate finite-difference columns in parallel.
using BatchResiduals =
    std::function<std::vector<std::vector<double>>(const std::vector<std::vector<double>>&)>;

struct Options {
  Algorithm algorithm = Algorithm::levenberg_marquardt;
  std::size_t max_iterations = 50;
  double fd_step = 1e-3;   ///< relative forward-difference step
  double ftol = 1e-8;      ///< stop when an accepted step lowers the loss by less than ftol * loss
  double xtol = 1e-8;      ///< stop when the scaled step is shorter than xtol
  double lambda0 = 1e-3;   ///< initial damping
  double radius0 = 0.1;    ///< initial trust radius in scaled units
};

struct Result {
  std::vector<double> x;
  double loss = 0.0;
  std::vector<double> loss_trace;  ///< loss after every accepted iterate, starting at x0
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::string status;
};

/// Minimises sum r(x)^2 over lo <= x <= hi starting from x0 (projected into
/// the box). Throws std::invalid_argument for inconsistent bounds.
Result least_squares(const BatchResiduals& residuals, std::vector<double> x0,
                     const std::vector<double>& lo, const std::vector<double>& hi,
                     const Options& opt = {});

}  // namespace fouvol::optim
