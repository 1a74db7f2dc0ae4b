#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "superlw/vector.hpp"

namespace superlw {

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);
  /// Builds from nested rows; all rows must have equal length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  [[nodiscard]] const std::vector<double>& row_major() const noexcept { return data_; }
  [[nodiscard]] std::vector<std::vector<double>> to_rows() const;

  [[nodiscard]] Matrix transposed() const;
  [[nodiscard]] Vector multiply(const Vector& x) const;
  [[nodiscard]] Vector multiply_transposed(const Vector& y) const;
  [[nodiscard]] double frobenius_norm() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

enum class OperatorKind { dense_matrix, convolution_1d };

std::string_view to_string(OperatorKind kind) noexcept;

/// Bounded linear map A : R^n -> R^m together with its adjoint.
///
/// Implementations are immutable after construction; apply and apply_adjoint
/// are pure and may be called concurrently.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  [[nodiscard]] virtual std::size_t domain_dim() const noexcept = 0;
  [[nodiscard]] virtual std::size_t range_dim() const noexcept = 0;
  [[nodiscard]] virtual OperatorKind kind() const noexcept = 0;

  /// Ax. Throws DimensionError if x.size() != domain_dim().
  [[nodiscard]] Vector apply(const Vector& x) const;
  /// A*y. Throws DimensionError if y.size() != range_dim().
  [[nodiscard]] Vector apply_adjoint(const Vector& y) const;

 protected:
  virtual void do_apply(const Vector& x, Vector& out) const = 0;
  virtual void do_apply_adjoint(const Vector& y, Vector& out) const = 0;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

class DenseMatrixOperator final : public LinearOperator {
 public:
  explicit DenseMatrixOperator(Matrix matrix);

  [[nodiscard]] std::size_t domain_dim() const noexcept override { return matrix_.cols(); }
  [[nodiscard]] std::size_t range_dim() const noexcept override { return matrix_.rows(); }
  [[nodiscard]] OperatorKind kind() const noexcept override { return OperatorKind::dense_matrix; }
  [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }

 protected:
  void do_apply(const Vector& x, Vector& out) const override;
  void do_apply_adjoint(const Vector& y, Vector& out) const override;

 private:
  Matrix matrix_;
};

/// Same-size 1-D convolution with an odd-length kernel centred on each sample,
/// zero padding outside [0, n). The adjoint is correlation with the same kernel.
class ConvolutionOperator1D final : public LinearOperator {
 public:
  ConvolutionOperator1D(std::size_t n, Vector kernel);

  [[nodiscard]] std::size_t domain_dim() const noexcept override { return n_; }
  [[nodiscard]] std::size_t range_dim() const noexcept override { return n_; }
  [[nodiscard]] OperatorKind kind() const noexcept override { return OperatorKind::convolution_1d; }
  [[nodiscard]] const Vector& kernel() const noexcept { return kernel_; }

 protected:
  void do_apply(const Vector& x, Vector& out) const override;
  void do_apply_adjoint(const Vector& y, Vector& out) const override;

 private:
  std::size_t n_;
  Vector kernel_;
};

/// Materializes any operator as a dense matrix by applying it to unit vectors.
[[nodiscard]] Matrix to_dense(const LinearOperator& op);

struct NormEstimate {
  double value = 0.0;
  bool converged = false;  // false: max_iter reached, value is the best estimate so far
  int iterations = 0;
};

inline constexpr std::uint64_t kDefaultNormSeed = 42;
inline constexpr double kNormInflation = 1.01;

/// Power iteration on A*A from a seeded Gaussian start.
///
/// Stops once the eigen-residual ||A*Av - mu v|| of the unit iterate v falls
/// below tol * mu, which bounds the relative error of sqrt(mu) by about tol/2
/// for the eigenvalue it approximates, or once the geometric extrapolation of
/// the remaining Rayleigh-quotient gain drops below tol * mu.
[[nodiscard]] NormEstimate estimate_norm(const LinearOperator& op, double tol = 1e-8,
                                         int max_iter = 100000,
                                         std::uint64_t seed = kDefaultNormSeed);

/// factor / (1.01 L)^2 with L from estimate_norm; the inflation keeps
/// lambda * ||A||^2 < factor despite estimation error. Requires 0 < factor < 1.
[[nodiscard]] double admissible_lambda(const LinearOperator& op, double factor = 0.9);

}  // namespace superlw
