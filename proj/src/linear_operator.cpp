#include "superlw/linear_operator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace superlw {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require_length(data_.size(), rows * cols, "matrix entries");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw DimensionError("matrix must have at least one row and one column");
  }
  const std::size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_length(rows[i].size(), cols, "matrix row " + std::to_string(i));
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    out[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector Matrix::multiply(const Vector& x) const {
  require_length(x.size(), cols_, "matrix-vector product");
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    const double* row = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
    out[i] = s;
  }
  return out;
}

Vector Matrix::multiply_transposed(const Vector& y) const {
  require_length(y.size(), rows_, "transposed matrix-vector product");
  Vector out(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double yi = y[i];
    const double* row = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) out[j] += row[j] * yi;
  }
  return out;
}

double Matrix::frobenius_norm() const noexcept { return norm(Vector(data_)); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_length(b.rows(), a.cols(), "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_length(b.rows(), a.rows(), "matrix difference rows");
  require_length(b.cols(), a.cols(), "matrix difference cols");
  std::vector<double> d(a.row_major());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b.row_major()[i];
  return Matrix(a.rows(), a.cols(), std::move(d));
}

std::string_view to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::dense_matrix:
      return "dense-matrix";
    case OperatorKind::convolution_1d:
      return "convolution-1d";
  }
  return "unknown";
}

Vector LinearOperator::apply(const Vector& x) const {
  require_length(x.size(), domain_dim(), "apply");
  Vector out(range_dim());
  do_apply(x, out);
  return out;
}

Vector LinearOperator::apply_adjoint(const Vector& y) const {
  require_length(y.size(), range_dim(), "apply_adjoint");
  Vector out(domain_dim());
  do_apply_adjoint(y, out);
  return out;
}

DenseMatrixOperator::DenseMatrixOperator(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.cols() == 0) {
    throw DimensionError("dense operator needs positive dimensions");
  }
}

void DenseMatrixOperator::do_apply(const Vector& x, Vector& out) const { out = matrix_.multiply(x); }

void DenseMatrixOperator::do_apply_adjoint(const Vector& y, Vector& out) const {
  out = matrix_.multiply_transposed(y);
}

ConvolutionOperator1D::ConvolutionOperator1D(std::size_t n, Vector kernel)
    : n_(n), kernel_(std::move(kernel)) {
  if (n_ == 0) throw DimensionError("convolution signal length must be positive");
  if (kernel_.size() % 2 == 0) throw std::invalid_argument("convolution kernel length must be odd");
  if (!kernel_.all_finite()) throw std::invalid_argument("convolution kernel must be finite");
}

// out_i = sum_j k_j x_{i + j - h}
void ConvolutionOperator1D::do_apply(const Vector& x, Vector& out) const {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  const auto w = static_cast<std::ptrdiff_t>(kernel_.size());
  const std::ptrdiff_t h = (w - 1) / 2;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < w; ++j) {
      const std::ptrdiff_t c = i + j - h;
      if (c >= 0 && c < n) s += kernel_[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(c)];
    }
    out[static_cast<std::size_t>(i)] = s;
  }
}

// out_l = sum_j k_j y_{l - j + h}
void ConvolutionOperator1D::do_apply_adjoint(const Vector& y, Vector& out) const {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  const auto w = static_cast<std::ptrdiff_t>(kernel_.size());
  const std::ptrdiff_t h = (w - 1) / 2;
  for (std::ptrdiff_t l = 0; l < n; ++l) {
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < w; ++j) {
      const std::ptrdiff_t r = l - j + h;
      if (r >= 0 && r < n) s += kernel_[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(r)];
    }
    out[static_cast<std::size_t>(l)] = s;
  }
}

Matrix to_dense(const LinearOperator& op) {
  Matrix m(op.range_dim(), op.domain_dim());
  Vector e(op.domain_dim());
  for (std::size_t j = 0; j < op.domain_dim(); ++j) {
    e[j] = 1.0;
    const Vector col = op.apply(e);
    for (std::size_t i = 0; i < op.range_dim(); ++i) m(i, j) = col[i];
    e[j] = 0.0;
  }
  return m;
}

NormEstimate estimate_norm(const LinearOperator& op, double tol, int max_iter, std::uint64_t seed) {
  if (!(tol > 0.0)) throw std::invalid_argument("estimate_norm: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("estimate_norm: max_iter must be at least 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(op.domain_dim());
  for (double& e : v) e = gauss(rng);
  v *= 1.0 / norm(v);

  NormEstimate est;
  double prev_mu = 0.0;
  double prev_gain = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    est.iterations = it;
    Vector w = op.apply_adjoint(op.apply(v));
    const double mu = dot(v, w);
    if (mu <= 0.0) {
      // v is in the null space of A*A (to rounding); for a random start this
      // only happens for the null operator.
      est.value = 0.0;
      est.converged = norm(w) == 0.0;
      if (est.converged) return est;
    } else {
      est.value = std::sqrt(mu);
      Vector r = w;
      r.axpy(-mu, v);
      if (norm(r) <= tol * mu) {
        est.converged = true;
        return est;
      }
      // Clustered top eigenvalues keep the residual large while mu is already
      // accurate. The Rayleigh quotients increase geometrically towards the
      // top eigenvalue; extrapolate the remaining gain from the last ratio.
      const double gain = mu - prev_mu;
      if (it > 2 && gain >= 0.0 && prev_gain > 0.0) {
        const double ratio = gain / prev_gain;
        if (ratio < 1.0 && gain * ratio / (1.0 - ratio) <= tol * mu) {
          est.converged = true;
          return est;
        }
      }
      prev_gain = gain;
      prev_mu = mu;
    }
    const double wn = norm(w);
    if (wn == 0.0) {
      est.converged = true;
      return est;
    }
    v = (1.0 / wn) * std::move(w);
  }
  return est;
}

double admissible_lambda(const LinearOperator& op, double factor) {
  if (!(factor > 0.0 && factor < 1.0)) {
    throw std::invalid_argument("admissible_lambda: factor must lie in (0, 1)");
  }
  const NormEstimate est = estimate_norm(op);
  if (est.value == 0.0) throw std::domain_error("admissible_lambda: operator norm is zero");
  const double inflated = kNormInflation * est.value;
  return factor / (inflated * inflated);
}

}  // namespace superlw
