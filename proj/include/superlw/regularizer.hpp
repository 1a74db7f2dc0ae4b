#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "superlw/vector.hpp"

namespace superlw {

enum class RegularizerKind { squared_norm, l1, tv_1d };

std::string_view to_string(RegularizerKind kind) noexcept;
/// Accepts "squared-norm", "l1", "tv-1d". Throws std::invalid_argument otherwise.
RegularizerKind parse_regularizer_kind(std::string_view name);

/// Convex, nonnegative functional r with a deterministic subgradient selection.
class Regularizer {
 public:
  explicit Regularizer(RegularizerKind kind, double weight = 1.0);

  [[nodiscard]] RegularizerKind kind() const noexcept { return kind_; }
  [[nodiscard]] double weight() const noexcept { return weight_; }

  /// squared-norm: w||x||^2, l1: w sum|x_i|, tv-1d: w sum|x_{i+1} - x_i|.
  [[nodiscard]] double value(const Vector& x) const;

  /// An element of the subdifferential at x, using sign(0) = 0.
  ///
  /// For tv-1d with s_i = sign(x_{i+1} - x_i), entry i is w (s_{i-1} - s_i),
  /// where out-of-range s are taken as zero.
  [[nodiscard]] Vector subgradient(const Vector& x) const;

  friend bool operator==(const Regularizer&, const Regularizer&) = default;

 private:
  RegularizerKind kind_;
  double weight_;
};

enum class PerturbationMode { unconditional, monotone };

std::string_view to_string(PerturbationMode mode) noexcept;
PerturbationMode parse_perturbation_mode(std::string_view name);

inline constexpr double kDefaultSmoothingEps = 1e-8;

/// Continuous, 1-bounded perturbation built from the normalized negative
/// subgradient of a regularizer.
class PerturbationMap {
 public:
  explicit PerturbationMap(Regularizer regularizer, double smoothing_eps = kDefaultSmoothingEps,
                           PerturbationMode mode = PerturbationMode::unconditional);

  [[nodiscard]] const Regularizer& regularizer() const noexcept { return regularizer_; }
  [[nodiscard]] double smoothing_eps() const noexcept { return smoothing_eps_; }
  [[nodiscard]] PerturbationMode mode() const noexcept { return mode_; }

  /// -D / max(||D||, eps) with D the subgradient at x; zero when D = 0.
  [[nodiscard]] Vector direction(const Vector& x) const;

  /// x + t direction(x). In monotone mode the candidate is rejected (x is
  /// returned unchanged) when it would increase r. Requires t >= 0.
  [[nodiscard]] Vector perturb(const Vector& x, double t) const;

  friend bool operator==(const PerturbationMap&, const PerturbationMap&) = default;

 private:
  Regularizer regularizer_;
  double smoothing_eps_;
  PerturbationMode mode_;
};

}  // namespace superlw
