#include "superlw/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace superlw {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOrthTol = 1e-15;

struct Columns {
  std::size_t rows;
  std::vector<std::vector<double>> cols;
};

Columns columns_of(const Matrix& a) {
  Columns c{a.rows(), std::vector<std::vector<double>>(a.cols(), std::vector<double>(a.rows()))};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.cols[j][i] = a(i, j);
  return c;
}

void rotate(std::vector<double>& a, std::vector<double>& b, double c, double s) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double ak = a[k];
    const double bk = b[k];
    a[k] = c * ak - s * bk;
    b[k] = s * ak + c * bk;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Hestenes Jacobi for a tall (rows >= cols) matrix: orthogonalizes the columns
// of W = A V by plane rotations applied to W and V alike.
void hestenes(const Matrix& a, Matrix& u, Vector& sigma, Matrix& v) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Columns w = columns_of(a);
  std::vector<std::vector<double>> vc(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) vc[j][j] = 1.0;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = dot(w.cols[i], w.cols[i]);
        const double beta = dot(w.cols[j], w.cols[j]);
        const double gamma = dot(w.cols[i], w.cols[j]);
        if (gamma == 0.0 || std::abs(gamma) <= kOrthTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(w.cols[i], w.cols[j], c, s);
        rotate(vc[i], vc[j], c, s);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(dot(w.cols[j], w.cols[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  u = Matrix(m, n);
  v = Matrix(n, n);
  sigma = Vector(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    sigma[k] = norms[j];
    for (std::size_t i = 0; i < m; ++i) u(i, k) = norms[j] > 0.0 ? w.cols[j][i] / norms[j] : 0.0;
    for (std::size_t i = 0; i < n; ++i) v(i, k) = vc[j][i];
  }
}

}  // namespace

SvdFactorization SvdFactorization::compute(const Matrix& a, double rank_tol) {
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("SVD of an empty matrix");
  if (!(rank_tol > 0.0)) throw std::invalid_argument("rank_tol must be positive");
  SvdFactorization f;
  f.rank_tol_ = rank_tol;
  if (a.rows() >= a.cols()) {
    hestenes(a, f.u_, f.sigma_, f.v_);
  } else {
    hestenes(a.transposed(), f.v_, f.sigma_, f.u_);
  }
  const double cutoff = rank_tol * f.sigma_[0];
  f.rank_ = 0;
  while (f.rank_ < f.sigma_.size() && f.sigma_[f.rank_] > cutoff) ++f.rank_;
  return f;
}

Matrix SvdFactorization::reconstruct() const {
  Matrix a(rows(), cols());
  for (std::size_t k = 0; k < sigma_.size(); ++k)
    for (std::size_t i = 0; i < rows(); ++i) {
      const double us = u_(i, k) * sigma_[k];
      for (std::size_t j = 0; j < cols(); ++j) a(i, j) += us * v_(j, k);
    }
  return a;
}

Vector SvdFactorization::solve(const Vector& y) const {
  require_length(y.size(), rows(), "pseudoinverse data");
  Vector x(cols());
  for (std::size_t k = 0; k < rank_; ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i < rows(); ++i) c += u_(i, k) * y[i];
    c /= sigma_[k];
    for (std::size_t j = 0; j < cols(); ++j) x[j] += c * v_(j, k);
  }
  return x;
}

Vector SvdFactorization::project_to_kernel(const Vector& x) const {
  require_length(x.size(), cols(), "kernel projection");
  Vector out = x;
  for (std::size_t k = 0; k < rank_; ++k) {
    double c = 0.0;
    for (std::size_t j = 0; j < cols(); ++j) c += v_(j, k) * x[j];
    for (std::size_t j = 0; j < cols(); ++j) out[j] -= c * v_(j, k);
  }
  return out;
}

Vector pseudoinverse_solve(const Matrix& a, const Vector& y, double rank_tol) {
  return SvdFactorization::compute(a, rank_tol).solve(y);
}

namespace {

constexpr double kFeasibilityTol = 1e-8;
constexpr double kRestartAgreementTol = 1e-4;
constexpr long kReprojectEvery = 1000;

struct Descent {
  Vector best;
  double best_value;
};

Descent descend(const SvdFactorization& svd, const Vector& particular, const Regularizer& r,
                Vector x, long budget, double step0) {
  const auto snap = [&](const Vector& z) { return particular + svd.project_to_kernel(z); };
  x = snap(x);
  Descent d{x, r.value(x)};
  for (long j = 0; j < budget; ++j) {
    const Vector g = svd.project_to_kernel(r.subgradient(x));
    const double gn = norm(g);
    if (gn == 0.0) break;  // 0 in the subdifferential restricted to the solution set
    x.axpy(-step0 / (static_cast<double>(j) + 1.0) / gn, g);
    if ((j + 1) % kReprojectEvery == 0) x = snap(x);
    const double v = r.value(x);
    if (v < d.best_value) {
      d.best_value = v;
      d.best = x;
    }
  }
  d.best = snap(d.best);
  d.best_value = r.value(d.best);
  return d;
}

}  // namespace

RMinResult r_min_solve(const Matrix& a, const Vector& y, const Regularizer& r,
                       const RMinOptions& options) {
  if (options.budget < 0) throw std::invalid_argument("r_min_solve: negative budget");
  if (options.restarts < 1) throw std::invalid_argument("r_min_solve: need at least one restart");
  const SvdFactorization svd = SvdFactorization::compute(a, options.rank_tol);
  const Vector particular = svd.solve(y);
  const double scale = std::max(1.0, norm(particular));

  RMinResult result;
  if (svd.rank() == svd.cols()) {
    // Trivial kernel: the solution set is a single point.
    result.x = particular;
    result.value = r.value(particular);
    result.restart_values.assign(static_cast<std::size_t>(options.restarts), result.value);
  } else {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    bool have_best = false;
    for (int restart = 0; restart < options.restarts; ++restart) {
      Vector start = particular;
      if (restart > 0) {
        Vector noise(svd.cols());
        for (double& e : noise) e = gauss(rng);
        Vector kernel_part = svd.project_to_kernel(noise);
        const double kn = norm(kernel_part);
        if (kn > 0.0) start.axpy(scale / kn, kernel_part);
      }
      const Descent d = descend(svd, particular, r, std::move(start), options.budget, scale);
      result.restart_values.push_back(d.best_value);
      if (!have_best || d.best_value < result.value) {
        result.x = d.best;
        result.value = d.best_value;
        have_best = true;
      }
    }
  }

  result.restarts_agree = std::all_of(result.restart_values.begin(), result.restart_values.end(),
                                      [&](double v) { return v - result.value <= kRestartAgreementTol; });
  Vector res = a.multiply(result.x);
  res -= y;
  result.residual_norm = norm(res);
  result.feasible = result.residual_norm <= kFeasibilityTol;
  return result;
}

}  // namespace superlw
