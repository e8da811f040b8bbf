#include "fouvol/volterra.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "fouvol/ml_table.hpp"

namespace fouvol {

namespace {

double integrate01(const auto& f) {
  thread_local boost::math::quadrature::tanh_sinh<double> ts(10);
  return ts.integrate(f, 0.0, 1.0, 1e-11);
}

// Kernel values, exact kernel mass over [d, d + h] and the moment against r^a.
class KernelEval {
 public:
  KernelEval(KernelKind kind, const specfun::KernelParams& kp, double tau_max)
      : kind_(kind), kp_(kp), a_(kp.alpha() - 1.0) {
    if (kind_ == KernelKind::e_theta && kp.theta() > 0.0)
      table_ = std::make_unique<specfun::KernelTable>(kp, tau_max);
  }

  bool plain() const noexcept { return !table_; }

  double operator()(double x) const {
    return plain() ? std::pow(x, a_) : table_->e_theta(x);
  }

  double slowly_varying(double x) const { return plain() ? 1.0 : table_->psi(x); }

  /// int_0^h k(d + r) dr
  double mass(double d, double h) const {
    if (plain()) return (std::pow(d + h, kp_.alpha()) - std::pow(d, kp_.alpha())) / kp_.alpha();
    if (kp_.theta() >= 1e-3) return (table_->ml1(d) - table_->ml1(d + h)) / kp_.theta();
    return moment(d, h, 0.0);
  }

  /// int_0^h k(d + r) r^a dr
  double moment_r_a(double d, double h) const {
    if (plain() && d == 0.0) return std::pow(h, 2.0 * a_ + 1.0) / (2.0 * a_ + 1.0);
    return moment(d, h, a_);
  }

  /// int_0^h k(d + r) (d + r)^a dr
  double moment_shifted(double d, double h) const {
    if (d == 0.0) return moment_r_a(0.0, h);
    return h * integrate01([&](double v) {
      const double x = d + h * v;
      return (*this)(x) * std::pow(x, a_);
    });
  }

 private:
  // int_0^h k(d + r) r^p dr with r = h v^(1/(p+1)); for d = 0 the kernel's
  // own power is absorbed as well so the integrand stays bounded.
  double moment(double d, double h, double p) const {
    if (d == 0.0) {
      const double q = a_ + p + 1.0;
      auto f = [&](double v) { return slowly_varying(h * std::pow(v, 1.0 / q)); };
      return std::pow(h, q) / q * integrate01(f);
    }
    const double e = 1.0 / (p + 1.0);
    auto f = [&](double v) { return (*this)(d + h * std::pow(v, e)); };
    return std::pow(h, p + 1.0) / (p + 1.0) * integrate01(f);
  }

  KernelKind kind_;
  specfun::KernelParams kp_;
  double a_;
  std::unique_ptr<specfun::KernelTable> table_;
};

void check_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0))
    throw std::domain_error("hybrid scheme: alpha must lie in (1/2, 1)");
}

}  // namespace

HybridCellLaw::HybridCellLaw(double alpha, double dt, int kappa)
    : alpha_(alpha), dt_(dt), kappa_(kappa) {
  check_alpha(alpha);
  if (!(dt > 0.0)) throw std::domain_error("hybrid scheme: dt must be positive");
  if (kappa < 1) throw std::domain_error("hybrid scheme: kappa must be >= 1");
  const double a = alpha - 1.0;
  const int n = kappa + 1;
  Eigen::MatrixXd cov(n, n);
  cov(0, 0) = dt;
  for (int k = 1; k <= kappa; ++k) {
    cov(0, k) = cov(k, 0) =
        std::pow(dt, a + 1.0) * (std::pow(k, a + 1.0) - std::pow(k - 1, a + 1.0)) / (a + 1.0);
    cov(k, k) = std::pow(dt, 2.0 * a + 1.0) *
                (std::pow(k, 2.0 * a + 1.0) - std::pow(k - 1, 2.0 * a + 1.0)) / (2.0 * a + 1.0);
    for (int l = 1; l < k; ++l) {
      const double v = integrate01(
          [&](double x) { return std::pow(k - x, a) * std::pow(l - x, a); });
      cov(k, l) = cov(l, k) = std::pow(dt, 2.0 * a + 1.0) * v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("hybrid scheme: cell covariance is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  cov_.resize(n * n);
  chol_.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cov_[i * n + j] = cov(i, j);
      chol_[i * n + j] = l(i, j);
    }
}

void HybridCellLaw::sample(RandomStream& rng, std::span<double> out) const {
  const int n = kappa_ + 1;
  double z[16];
  double* zp = n <= 16 ? z : nullptr;
  std::vector<double> zv;
  if (!zp) {
    zv.resize(n);
    zp = zv.data();
  }
  for (int i = 0; i < n; ++i) zp[i] = rng.normal();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j <= i; ++j) s += chol_[i * n + j] * zp[j];
    out[i] = s;
  }
}

void draw_driver(const HybridCellLaw& law, std::size_t n_steps, RandomStream& rng,
                 VolterraDriver& out) {
  const int kappa = law.kappa();
  out.n_steps = n_steps;
  out.kappa = kappa;
  out.dz.resize(n_steps);
  out.near.resize(static_cast<std::size_t>(kappa) * n_steps);
  if (kappa == 1) {
    const auto& c = law.covariance();
    const double sd = std::sqrt(c[0]);
    const double beta = c[1] / c[0];
    const double resid = std::sqrt(c[3] - beta * c[1]);
    for (std::size_t j = 0; j < n_steps; ++j) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      out.dz[j] = sd * z1;
      out.near[j] = beta * out.dz[j] + resid * z2;
    }
    return;
  }
  std::vector<double> cell(kappa + 1);
  for (std::size_t j = 0; j < n_steps; ++j) {
    law.sample(rng, cell);
    out.dz[j] = cell[0];
    for (int k = 0; k < kappa; ++k) out.near[k * n_steps + j] = cell[k + 1];
  }
}

VolterraDriver draw_driver(const HybridCellLaw& law, std::size_t n_steps, RandomStream& rng) {
  VolterraDriver d;
  draw_driver(law, n_steps, rng, d);
  return d;
}

HybridScheme::HybridScheme(KernelKind kind, const specfun::KernelParams& kp, TimeGrid grid,
                           int kappa)
    : grid_(grid), kappa_(kappa), law_(kp.alpha(), grid.dt(), kappa) {
  const std::size_t n = grid.n_steps;
  const double h = grid.dt();
  const double a = kp.alpha() - 1.0;
  const KernelEval k(kind, kp, grid.horizon * 1.01);
  near_w_.assign(kappa, 1.0);
  near_dz_w_.assign(kappa, 0.0);
  far_w_.assign(n + 1, 0.0);
  if (k.plain()) {
    for (std::size_t lag = static_cast<std::size_t>(kappa) + 1; lag <= n; ++lag) {
      const double l = static_cast<double>(lag);
      const double b = std::pow((std::pow(l, a + 1.0) - std::pow(l - 1.0, a + 1.0)) / (a + 1.0), 1.0 / a);
      far_w_[n - lag] = k(b * h);
    }
    return;
  }
  // E_theta is far from constant on a cell once theta * h^alpha is not small,
  // so the weights come from exact kernel moments: near cells are projected
  // onto (dZ, I_k), far cells onto dZ alone.
  const auto& c = law_.covariance();
  const int m = kappa + 1;
  for (int i = 1; i <= kappa; ++i) {
    const double d = (i - 1) * h;
    const double s00 = c[0], s01 = c[i], s11 = c[i * m + i];
    const double det = s00 * s11 - s01 * s01;
    const double c1 = k.mass(d, h);
    const double c2 = k.moment_shifted(d, h);
    near_dz_w_[i - 1] = (s11 * c1 - s01 * c2) / det;
    near_w_[i - 1] = (s00 * c2 - s01 * c1) / det;
  }
  for (std::size_t lag = static_cast<std::size_t>(kappa) + 1; lag <= n; ++lag)
    far_w_[n - lag] = k.mass(static_cast<double>(lag - 1) * h, h) / h;
}

double HybridScheme::value_at(const VolterraDriver& d, std::size_t i) const {
  const std::size_t n = grid_.n_steps;
  if (d.n_steps != n || d.kappa < kappa_)
    throw std::invalid_argument("HybridScheme: driver does not match the grid");
  double s = 0.0;
  const std::size_t kmax = std::min<std::size_t>(i, static_cast<std::size_t>(kappa_));
  for (std::size_t k = 1; k <= kmax; ++k)
    s += near_w_[k - 1] * d.near[(k - 1) * n + (i - k)] + near_dz_w_[k - 1] * d.dz[i - k];
  if (i > static_cast<std::size_t>(kappa_)) {
    const double* w = far_w_.data() + (n - i);
    const double* z = d.dz.data();
    const std::size_t m = i - static_cast<std::size_t>(kappa_);
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t j = 0; j < m; ++j) acc += w[j] * z[j];
    s += acc;
  }
  return s;
}

void HybridScheme::simulate(const VolterraDriver& d, std::span<double> out) const {
  if (out.size() != grid_.n_steps + 1)
    throw std::invalid_argument("HybridScheme: output must have n_steps + 1 entries");
  out[0] = 0.0;
  for (std::size_t i = 1; i <= grid_.n_steps; ++i) out[i] = value_at(d, i);
}

std::vector<double> simulate_volterra_hybrid(KernelKind kind, const specfun::KernelParams& kp,
                                             const TimeGrid& grid, const VolterraDriver& d,
                                             int kappa) {
  const HybridScheme scheme(kind, kp, grid, kappa);
  std::vector<double> out(grid.n_steps + 1);
  scheme.simulate(d, out);
  return out;
}

VolterraProjection::VolterraProjection(KernelKind kind, const specfun::KernelParams& kp,
                                       TimeGrid grid, std::vector<double> u_grid)
    : grid_(grid), u_(std::move(u_grid)) {
  check_alpha(kp.alpha());
  const double t = grid.horizon;
  const std::size_t n = grid.n_steps;
  const double h = grid.dt();
  const double a = kp.alpha() - 1.0;
  double u_max = t;
  for (double u : u_) {
    if (u < t * (1.0 - 1e-12)) throw std::invalid_argument("VolterraProjection: need u >= t");
    u_max = std::max(u_max, u);
  }
  const KernelEval k(kind, kp, u_max * 1.01);

  const double s00 = h;
  const double s01 = std::pow(h, a + 1.0) / (a + 1.0);
  const double s11 = std::pow(h, 2.0 * a + 1.0) / (2.0 * a + 1.0);
  const double det = s00 * s11 - s01 * s01;

  a_.assign(u_.size() * n, 0.0);
  b_.assign(u_.size() * n, 0.0);
  cov_.assign(u_.size(), 0.0);
  for (std::size_t iu = 0; iu < u_.size(); ++iu) {
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::max(0.0, u_[iu] - grid.time(j + 1));
      const double c1 = k.mass(d, h);
      const double c2 = k.moment_r_a(d, h);
      const double wa = (s11 * c1 - s01 * c2) / det;
      const double wb = (s00 * c2 - s01 * c1) / det;
      a_[iu * n + j] = wa;
      b_[iu * n + j] = wb;
      var += wa * c1 + wb * c2;
    }
    cov_[iu] = var;
  }
}

void VolterraProjection::apply(const VolterraDriver& d, std::span<double> out) const {
  const std::size_t n = grid_.n_steps;
  if (d.n_steps != n || out.size() != u_.size())
    throw std::invalid_argument("VolterraProjection: size mismatch");
  const double* z = d.dz.data();
  const double* in = d.near.data();
  for (std::size_t iu = 0; iu < u_.size(); ++iu) {
    const double* wa = a_.data() + iu * n;
    const double* wb = b_.data() + iu * n;
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t j = 0; j < n; ++j) acc += wa[j] * z[j] + wb[j] * in[j];
    out[iu] = acc;
  }
}

double VolterraProjection::projected_variance(std::size_t i) const { return cov_.at(i); }

std::vector<double> projected_volterra(KernelKind kind, const specfun::KernelParams& kp,
                                       std::span<const double> u_grid, const TimeGrid& grid,
                                       const VolterraDriver& d) {
  const VolterraProjection proj(kind, kp, grid, std::vector<double>(u_grid.begin(), u_grid.end()));
  std::vector<double> out(u_grid.size());
  proj.apply(d, out);
  return out;
}

}  // namespace fouvol
