#include "superlw/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace superlw {

std::string_view to_string(Generator g) noexcept {
  switch (g) {
    case Generator::deconvolution_1d:
      return "deconvolution-1d";
    case Generator::decay_spectrum:
      return "decay-spectrum";
    case Generator::explicit_matrix:
      return "explicit-matrix";
  }
  return "unknown";
}

Generator parse_generator(std::string_view name) {
  if (name == "deconvolution-1d") return Generator::deconvolution_1d;
  if (name == "decay-spectrum") return Generator::decay_spectrum;
  if (name == "explicit-matrix") return Generator::explicit_matrix;
  throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
}

std::string_view to_string(TruthProfile p) noexcept {
  switch (p) {
    case TruthProfile::piecewise_constant:
      return "piecewise-constant";
    case TruthProfile::smooth_bump:
      return "smooth-bump";
    case TruthProfile::sparse_spikes:
      return "sparse-spikes";
  }
  return "unknown";
}

TruthProfile parse_truth_profile(std::string_view name) {
  if (name == "piecewise-constant") return TruthProfile::piecewise_constant;
  if (name == "smooth-bump") return TruthProfile::smooth_bump;
  if (name == "sparse-spikes") return TruthProfile::sparse_spikes;
  throw std::invalid_argument("unknown truth profile '" + std::string(name) + "'");
}

double ProblemSpec::effective_kernel_sigma() const noexcept {
  return kernel_sigma.value_or(static_cast<double>(kernel_width) / 5.0);
}

Vector gaussian_kernel(std::size_t width, double sigma) {
  if (width % 2 == 0) throw std::invalid_argument("kernel width must be odd");
  if (!(sigma > 0.0)) throw std::invalid_argument("kernel sigma must be positive");
  const auto h = static_cast<double>((width - 1) / 2);
  Vector k(width);
  double sum = 0.0;
  for (std::size_t j = 0; j < width; ++j) {
    const double d = static_cast<double>(j) - h;
    k[j] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += k[j];
  }
  k *= 1.0 / sum;
  return k;
}

Vector truth_profile(TruthProfile profile, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(n);
  switch (profile) {
    case TruthProfile::piecewise_constant: {
      // 4 interior breakpoints, levels in [-1, 1]; the outermost segments stay at zero
      std::vector<std::size_t> cuts;
      for (int i = 0; i < 4; ++i) cuts.push_back(1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(n - 1)));
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double level = 2.0 * unit(rng) - 1.0;
        for (std::size_t i = cuts[s]; i < cuts[s + 1]; ++i) x[i] = level;
      }
      break;
    }
    case TruthProfile::smooth_bump: {
      const int bumps = 1 + static_cast<int>(unit(rng) * 3.0);
      for (int b = 0; b < bumps; ++b) {
        const double centre = 0.2 + 0.6 * unit(rng);
        const double width = 0.05 + 0.1 * unit(rng);
        const double amp = 0.5 + 0.5 * unit(rng);
        for (std::size_t i = 0; i < n; ++i) {
          const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
          const double z = (t - centre) / width;
          x[i] += amp * std::exp(-z * z);
        }
      }
      break;
    }
    case TruthProfile::sparse_spikes: {
      const std::size_t spikes = std::max<std::size_t>(1, n / 10);
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t s = 0; s < spikes; ++s) {
        const double amp = 0.5 + 0.5 * unit(rng);
        x[idx[s]] = unit(rng) < 0.5 ? -amp : amp;
      }
      break;
    }
  }
  return x;
}

Matrix random_orthogonal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Vector> q;
  q.reserve(n);
  while (q.size() < n) {
    Vector v(n);
    for (double& e : v) e = gauss(rng);
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : q) v.axpy(-dot(b, v), b);
    const double nv = norm(v);
    if (nv < 1e-8) continue;
    v *= 1.0 / nv;
    q.push_back(std::move(v));
  }
  Matrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = q[j][i];
  return m;
}

namespace {

Problem finish(const ProblemSpec& spec, OperatorPtr op, Vector x_true) {
  Problem p{spec, std::move(op), std::move(x_true), {}};
  p.y = p.op->apply(p.x_true);
  return p;
}

}  // namespace

Problem generate_problem(const ProblemSpec& spec) {
  switch (spec.generator) {
    case Generator::deconvolution_1d: {
      if (spec.n == 0) throw DimensionError("deconvolution-1d: n must be positive");
      if (spec.m != spec.n) throw DimensionError("deconvolution-1d: m must equal n");
      if (spec.kernel_width % 2 == 0 || spec.kernel_width >= spec.n) {
        throw DimensionError("deconvolution-1d: kernel width must be odd and below n");
      }
      auto op = std::make_shared<ConvolutionOperator1D>(
          spec.n, gaussian_kernel(spec.kernel_width, spec.effective_kernel_sigma()));
      return finish(spec, std::move(op), truth_profile(spec.profile, spec.n, spec.seed));
    }
    case Generator::decay_spectrum: {
      if (spec.n == 0 || spec.m == 0) throw DimensionError("decay-spectrum: dimensions must be positive");
      const Matrix u = random_orthogonal(spec.m, spec.seed);
      const Matrix v = random_orthogonal(spec.n, spec.seed + 1);
      Matrix a(spec.m, spec.n);
      for (std::size_t k = 0; k < std::min(spec.m, spec.n); ++k) {
        const double s = std::pow(static_cast<double>(k + 1), -spec.decay_exponent);
        for (std::size_t i = 0; i < spec.m; ++i)
          for (std::size_t j = 0; j < spec.n; ++j) a(i, j) += s * u(i, k) * v(j, k);
      }
      auto op = std::make_shared<DenseMatrixOperator>(std::move(a));
      return finish(spec, std::move(op), truth_profile(spec.profile, spec.n, spec.seed + 2));
    }
    case Generator::explicit_matrix: {
      if (!spec.matrix || !spec.x_true) {
        throw std::invalid_argument("explicit-matrix: matrix and x_true are required");
      }
      require_length(spec.x_true->size(), spec.matrix->cols(), "explicit-matrix x_true");
      auto op = std::make_shared<DenseMatrixOperator>(*spec.matrix);
      return finish(spec, std::move(op), *spec.x_true);
    }
  }
  throw std::invalid_argument("unknown generator");
}

Vector inject_noise(const Vector& y, const NoiseSpec& spec) {
  if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta)) {
    throw std::invalid_argument("noise level must be finite and non-negative");
  }
  if (spec.delta == 0.0) return y;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss;
  Vector u(y.size());
  for (double& e : u) e = gauss(rng);
  u *= 1.0 / norm(u);

  Vector yd = y;
  yd.axpy(spec.delta, u);

  // Greedy ulp refinement, coarse components first.
  const auto gap = [&] { return std::abs(distance(yd, y) - spec.delta); };
  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(u[a]) > std::abs(u[b]); });
  double best = gap();
  for (std::size_t i : order) {
    if (best == 0.0) break;
    for (const double toward : {std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity()}) {
      for (int steps = 0; steps < 64; ++steps) {
        const double old = yd[i];
        yd[i] = std::nextafter(old, toward);
        const double g = gap();
        if (g < best) {
          best = g;
        } else {
          yd[i] = old;
          break;
        }
      }
    }
  }
  // Opposite single-ulp moves on two components resolve differences finer
  // than any one component's ulp.
  for (int pass = 0; pass < 4 && best > 0.0; ++pass) {
    bool improved = false;
    for (std::size_t i = 0; i < yd.size(); ++i) {
      for (std::size_t j = i + 1; j < yd.size(); ++j) {
        for (const double si : {1.0, -1.0}) {
          for (const double sj : {1.0, -1.0}) {
            const double oi = yd[i];
            const double oj = yd[j];
            yd[i] = std::nextafter(oi, si * std::numeric_limits<double>::infinity());
            yd[j] = std::nextafter(oj, sj * std::numeric_limits<double>::infinity());
            const double g = gap();
            if (g < best) {
              best = g;
              improved = true;
            } else {
              yd[i] = oi;
              yd[j] = oj;
            }
          }
        }
      }
    }
    if (!improved) break;
  }
  return yd;
}

}  // namespace superlw
