#pragma once

#include <cstdint>
#include <random>

#include "superlw/linear_operator.hpp"
#include "superlw/problem.hpp"
#include "superlw/vector.hpp"

namespace superlw::testing {

inline Vector random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (double& e : v) e = g(rng);
  return v;
}

inline Matrix random_matrix(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = g(rng);
  return a;
}

/// Small desk problems shared across suites.
inline std::vector<ProblemSpec> desk_specs() {
  std::vector<ProblemSpec> specs;
  ProblemSpec deconv;
  deconv.generator = Generator::deconvolution_1d;
  deconv.n = deconv.m = 32;
  deconv.kernel_width = 5;
  deconv.profile = TruthProfile::sparse_spikes;
  specs.push_back(deconv);

  ProblemSpec decay;
  decay.generator = Generator::decay_spectrum;
  decay.m = 12;
  decay.n = 24;
  decay.decay_exponent = 1.0;
  decay.profile = TruthProfile::smooth_bump;
  specs.push_back(decay);

  ProblemSpec tall = decay;
  tall.m = 20;
  tall.n = 16;
  tall.profile = TruthProfile::piecewise_constant;
  tall.seed = 5;
  specs.push_back(tall);
  return specs;
}

}  // namespace superlw::testing
