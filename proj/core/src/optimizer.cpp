#include "fouvol/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fouvol::optim {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "levenberg_marquardt" || name == "lm") return Algorithm::levenberg_marquardt;
  if (name == "trust_region" || name == "tr") return Algorithm::trust_region;
  throw std::invalid_argument("unknown optimizer '" + name +
                              "' (expected levenberg_marquardt or trust_region)");
}

const char* to_string(Algorithm a) {
  return a == Algorithm::levenberg_marquardt ? "levenberg_marquardt" : "trust_region";
}

namespace {

class Problem {
 public:
  Problem(const BatchResiduals& f, const std::vector<double>& lo, const std::vector<double>& hi,
          const Options& opt)
      : f_(f), lo_(lo), hi_(hi), opt_(opt) {}

  std::size_t dim() const { return lo_.size(); }

  std::vector<double> to_x(const Eigen::VectorXd& y) const {
    std::vector<double> x(dim());
    for (std::size_t i = 0; i < dim(); ++i) x[i] = lo_[i] + y[i] * (hi_[i] - lo_[i]);
    return x;
  }

  Eigen::VectorXd clamp(Eigen::VectorXd y) const {
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = std::clamp(y[i], 0.0, 1.0);
    return y;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& y) {
    auto r = f_({to_x(y)});
    ++evaluations;
    return Eigen::Map<Eigen::VectorXd>(r[0].data(), static_cast<Eigen::Index>(r[0].size()));
  }

  /// Forward differences in scaled coordinates; columns evaluated as a batch.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& y, const Eigen::VectorXd& r) {
    const std::size_t n = dim();
    std::vector<std::vector<double>> points;
    std::vector<double> dy(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double span = hi_[i] - lo_[i];
      if (span <= 0.0) continue;
      const double x = lo_[i] + y[i] * span;
      double h = opt_.fd_step * std::max(std::abs(x), 1e-3 * span) / span;
      if (y[i] + h > 1.0) h = -h;
      dy[i] = h;
      Eigen::VectorXd yp = y;
      yp[i] += h;
      points.push_back(to_x(yp));
    }
    const auto cols = points.empty() ? std::vector<std::vector<double>>{} : f_(points);
    evaluations += points.size();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(r.size(), static_cast<Eigen::Index>(n));
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dy[i] == 0.0) continue;
      const auto& ri = cols[c++];
      for (Eigen::Index k = 0; k < r.size(); ++k) J(k, i) = (ri[k] - r[k]) / dy[i];
    }
    return J;
  }

  std::size_t evaluations = 0;

 private:
  const BatchResiduals& f_;
  const std::vector<double>& lo_;
  const std::vector<double>& hi_;
  const Options& opt_;
};

}  // namespace

Result least_squares(const BatchResiduals& residuals, std::vector<double> x0,
                     const std::vector<double>& lo, const std::vector<double>& hi,
                     const Options& opt) {
  const std::size_t n = x0.size();
  if (lo.size() != n || hi.size() != n)
    throw std::invalid_argument("least_squares: bounds and start differ in size");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lo[i] <= hi[i])) throw std::invalid_argument("least_squares: lower bound above upper");

  Problem prob(residuals, lo, hi, opt);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double span = hi[i] - lo[i];
    y[i] = span > 0.0 ? std::clamp((x0[i] - lo[i]) / span, 0.0, 1.0) : 0.0;
  }
  Eigen::VectorXd r = prob.residual(y);
  double f = r.squaredNorm();

  Result res;
  res.loss_trace.push_back(f);
  double lambda = opt.lambda0;
  double radius = opt.radius0;
  res.status = "iteration limit reached";

  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    res.iterations = it + 1;
    if (f == 0.0) {
      res.converged = true;
      res.status = "zero residual";
      break;
    }
    const Eigen::MatrixXd J = prob.jacobian(y, r);
    Eigen::MatrixXd A = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * r;
    // Coordinates on a bound whose gradient points outward are held fixed for
    // this iteration; otherwise clamping would distort the step of the others.
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const bool pinned = (y[i] <= 0.0 && g[i] > 0.0) || (y[i] >= 1.0 && g[i] < 0.0);
      if (!pinned) continue;
      A.row(i).setZero();
      A.col(i).setZero();
      g[i] = 0.0;
    }
    bool accepted = false;
    bool stop = false;

    if (opt.algorithm == Algorithm::levenberg_marquardt) {
      const double diag_floor = std::max(1e-12, 1e-12 * A.diagonal().maxCoeff());
      for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
        Eigen::MatrixXd M = A;
        for (Eigen::Index i = 0; i < M.rows(); ++i)
          M(i, i) += lambda * std::max(A(i, i), diag_floor);
        const Eigen::VectorXd delta = M.ldlt().solve(-g);
        const Eigen::VectorXd y_new = prob.clamp(y + delta);
        if ((y_new - y).norm() < opt.xtol) {
          res.converged = true;
          res.status = "step below xtol";
          stop = true;
          break;
        }
        const Eigen::VectorXd r_new = prob.residual(y_new);
        const double f_new = r_new.squaredNorm();
        if (std::isfinite(f_new) && f_new < f) {
          const double gain = f - f_new;
          y = y_new;
          r = r_new;
          f = f_new;
          accepted = true;
          lambda = std::max(lambda / 3.0, 1e-12);
          if (gain < opt.ftol * f_new) {
            res.converged = true;
            res.status = "relative loss reduction below ftol";
            stop = true;
          }
        } else {
          lambda *= 4.0;
          if (lambda > 1e10) {
            res.status = "stagnation: damping exhausted";
            stop = true;
            break;
          }
        }
      }
    } else {
      for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
        Eigen::MatrixXd B = A;
        B.diagonal().array() += 1e-12 * std::max(1.0, A.diagonal().maxCoeff());
        const Eigen::VectorXd p_gn = B.ldlt().solve(-g);
        const double gBg = g.dot(A * g);
        const Eigen::VectorXd p_sd = gBg > 0.0 ? Eigen::VectorXd(-(g.squaredNorm() / gBg) * g)
                                               : Eigen::VectorXd(-g);
        Eigen::VectorXd p;
        if (p_gn.norm() <= radius) {
          p = p_gn;
        } else if (p_sd.norm() >= radius) {
          p = radius * p_sd / p_sd.norm();
        } else {
          const Eigen::VectorXd d = p_gn - p_sd;
          const double a = d.squaredNorm();
          const double b = 2.0 * p_sd.dot(d);
          const double c = p_sd.squaredNorm() - radius * radius;
          const double tau = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
          p = p_sd + tau * d;
        }
        const Eigen::VectorXd y_new = prob.clamp(y + p);
        const Eigen::VectorXd s = y_new - y;
        if (s.norm() < opt.xtol) {
          res.converged = true;
          res.status = "step below xtol";
          stop = true;
          break;
        }
        const double predicted = -(2.0 * g.dot(s) + s.dot(A * s));
        const Eigen::VectorXd r_new = prob.residual(y_new);
        const double f_new = r_new.squaredNorm();
        const double actual = f - f_new;
        const double ratio = predicted > 0.0 ? actual / predicted : -1.0;
        if (ratio > 0.75 && s.norm() > 0.9 * radius) radius *= 2.0;
        else if (ratio < 0.25) radius *= 0.25;
        if (std::isfinite(f_new) && actual > 0.0) {
          y = y_new;
          r = r_new;
          f = f_new;
          accepted = true;
          if (actual < opt.ftol * f_new) {
            res.converged = true;
            res.status = "relative loss reduction below ftol";
            stop = true;
          }
        } else if (radius < opt.xtol) {
          res.status = "stagnation: trust radius collapsed";
          stop = true;
          break;
        }
      }
    }
    if (accepted) res.loss_trace.push_back(f);
    if (stop) break;
    if (!accepted) {
      res.status = "stagnation: no decreasing step found";
      break;
    }
  }
  res.x = prob.to_x(y);
  res.loss = f;
  res.evaluations = prob.evaluations;
  return res;
}

}  // namespace fouvol::optim
