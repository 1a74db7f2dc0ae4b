#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "superlw/linear_operator.hpp"
#include "superlw/vector.hpp"

namespace superlw {

enum class Generator { deconvolution_1d, decay_spectrum, explicit_matrix };
enum class TruthProfile { piecewise_constant, smooth_bump, sparse_spikes };

std::string_view to_string(Generator g) noexcept;
Generator parse_generator(std::string_view name);
std::string_view to_string(TruthProfile p) noexcept;
TruthProfile parse_truth_profile(std::string_view name);

struct ProblemSpec {
  Generator generator = Generator::deconvolution_1d;
  std::size_t n = 32;
  std::size_t m = 32;
  std::size_t kernel_width = 5;         // deconvolution-1d: odd tap count, < n
  std::optional<double> kernel_sigma;   // Gaussian std dev; kernel_width / 5 when absent
  double decay_exponent = 2.0;          // decay-spectrum: sigma_i = i^-s
  TruthProfile profile = TruthProfile::piecewise_constant;
  std::uint64_t seed = 1;
  std::optional<Matrix> matrix;         // explicit-matrix
  std::optional<Vector> x_true;         // explicit-matrix

  [[nodiscard]] double effective_kernel_sigma() const noexcept;
  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

struct Problem {
  ProblemSpec spec;
  OperatorPtr op;
  Vector x_true;
  Vector y;  // exact data A x_true
};

/// Deterministic in spec.seed. Throws DimensionError for inconsistent sizes.
[[nodiscard]] Problem generate_problem(const ProblemSpec& spec);

/// Normalized Gaussian taps exp(-j^2 / (2 sigma^2)), j = -h..h.
[[nodiscard]] Vector gaussian_kernel(std::size_t width, double sigma);

[[nodiscard]] Vector truth_profile(TruthProfile profile, std::size_t n, std::uint64_t seed);

/// Random orthogonal n x n matrix (Gram-Schmidt on a seeded Gaussian matrix).
[[nodiscard]] Matrix random_orthogonal(std::size_t n, std::uint64_t seed);

struct NoiseSpec {
  double delta = 0.0;
  std::uint64_t seed = 2024;
};

/// y + delta u with u a seeded Gaussian direction of unit norm. The result is
/// nudged by single ulps so that ||y_delta - y|| evaluates to delta as
/// closely as double rounding allows.
[[nodiscard]] Vector inject_noise(const Vector& y, const NoiseSpec& spec);

}  // namespace superlw
