#pragma once

#include <cstdint>
#include <vector>

#include "superlw/linear_operator.hpp"
#include "superlw/regularizer.hpp"
#include "superlw/vector.hpp"

namespace superlw {

inline constexpr double kDefaultRankTol = 1e-12;

/// Thin SVD A = U diag(sigma) V^T computed by one-sided (Hestenes) Jacobi.
///
/// With p = min(m, n), U is m x p, V is n x p and sigma holds p non-negative
/// values sorted descending. Only singular values above rank_tol * sigma_1 count
/// toward the rank used by solve() and project_to_kernel().
class SvdFactorization {
 public:
  static SvdFactorization compute(const Matrix& a, double rank_tol = kDefaultRankTol);

  [[nodiscard]] const Vector& singular_values() const noexcept { return sigma_; }
  [[nodiscard]] const Matrix& left() const noexcept { return u_; }
  [[nodiscard]] const Matrix& right() const noexcept { return v_; }
  [[nodiscard]] double rank_tol() const noexcept { return rank_tol_; }
  [[nodiscard]] std::size_t rank() const noexcept { return rank_; }
  [[nodiscard]] std::size_t rows() const noexcept { return u_.rows(); }
  [[nodiscard]] std::size_t cols() const noexcept { return v_.rows(); }

  [[nodiscard]] Matrix reconstruct() const;

  /// sum over retained i of (u_i . y / sigma_i) v_i
  [[nodiscard]] Vector solve(const Vector& y) const;

  /// Orthogonal projection onto the numerical null space of A.
  [[nodiscard]] Vector project_to_kernel(const Vector& x) const;

 private:
  Matrix u_;
  Vector sigma_;
  Matrix v_;
  double rank_tol_ = kDefaultRankTol;
  std::size_t rank_ = 0;
};

/// Minimal-norm least-squares solution A^+ y.
[[nodiscard]] Vector pseudoinverse_solve(const Matrix& a, const Vector& y,
                                         double rank_tol = kDefaultRankTol);

struct RMinResult {
  Vector x;
  double value = 0.0;
  double residual_norm = 0.0;
  bool feasible = false;          // residual_norm <= 1e-8
  bool restarts_agree = false;    // every restart within 1e-4 of the best r-value
  std::vector<double> restart_values;
};

struct RMinOptions {
  long budget = 1000000;  // inner steps per restart
  int restarts = 3;
  std::uint64_t seed = 7;
  double rank_tol = kDefaultRankTol;
};

/// Approximate argmin { r(x) | Ax = y } by projected subgradient descent with
/// harmonic steps on the affine solution set, which is parametrized exactly
/// through the SVD as A^+ y + ker(A). The first restart starts at A^+ y, the
/// others at seeded random points of the solution set; the best r-value wins.
[[nodiscard]] RMinResult r_min_solve(const Matrix& a, const Vector& y, const Regularizer& r,
                                     const RMinOptions& options = {});

}  // namespace superlw
