#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "superlw/iterate.hpp"
#include "superlw/oracle.hpp"
#include "superlw/problem.hpp"
#include "test_support.hpp"

using namespace superlw;
using superlw::testing::desk_specs;
using superlw::testing::random_matrix;
using superlw::testing::random_vector;

namespace {

const std::array<Regularizer, 3> kAll = {Regularizer(RegularizerKind::squared_norm),
                                         Regularizer(RegularizerKind::l1),
                                         Regularizer(RegularizerKind::tv_1d)};

Vector eigen_pinv_solve(const Matrix& a, const Vector& y) {
  Eigen::MatrixXd e(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
  Eigen::VectorXd b(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) b(static_cast<Eigen::Index>(i)) = y[i];
  const Eigen::VectorXd x = e.completeOrthogonalDecomposition().solve(b);
  Vector out(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) out[j] = x(static_cast<Eigen::Index>(j));
  return out;
}

// Minimum of l1 over the line {x | x1 + 2 x2 = 2} = {(2 - 2s, s)} by vertex
// enumeration: the objective is piecewise linear with breakpoints where a
// coordinate vanishes, s in {0, 1}.
std::pair<Vector, double> l1_min_on_row_12() {
  double best = std::numeric_limits<double>::infinity();
  Vector arg;
  for (double s : {0.0, 1.0}) {
    const Vector x{2.0 - 2.0 * s, s};
    const double v = l1_norm(x);
    if (v < best) {
      best = v;
      arg = x;
    }
  }
  return {arg, best};
}

}  // namespace

TEST_CASE("jacobi svd reconstructs and sorts") {
  std::mt19937_64 rng(1);
  for (auto [m, n] : {std::pair{6, 4}, std::pair{4, 6}, std::pair{9, 9}, std::pair{1, 5}}) {
    const Matrix a = random_matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n), rng);
    const SvdFactorization f = SvdFactorization::compute(a);
    const Vector& s = f.singular_values();
    CHECK(s.size() == static_cast<std::size_t>(std::min(m, n)));
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i] >= 0.0);
      if (i > 0) CHECK(s[i] <= s[i - 1]);
    }
    CHECK((f.reconstruct() - a).frobenius_norm() <= 1e-9 * a.frobenius_norm());
    // orthonormal right singular vectors
    const Matrix vtv = f.right().transposed() * f.right();
    CHECK((vtv - Matrix::identity(vtv.rows())).frobenius_norm() <= 1e-12);
  }
}

TEST_CASE("jacobi svd resolves graded singular values") {
  ProblemSpec spec;
  spec.generator = Generator::decay_spectrum;
  spec.n = spec.m = 16;
  spec.decay_exponent = 4.0;
  const Problem p = generate_problem(spec);
  const SvdFactorization f = SvdFactorization::compute(to_dense(*p.op));
  for (std::size_t i = 0; i < 16; ++i) {
    const double expected = std::pow(static_cast<double>(i + 1), -4.0);
    CHECK(std::abs(f.singular_values()[i] - expected) <= 1e-12);
  }
  CHECK(f.rank() == 16);
}

TEST_CASE("pseudoinverse examples") {
  CHECK(distance(pseudoinverse_solve(Matrix::diagonal(Vector{2, 1}), Vector{2, 1}), Vector{1, 1}) <= 1e-15);
  CHECK(distance(pseudoinverse_solve(Matrix::from_rows({{1, 2}}), Vector{2}), Vector{0.4, 0.8}) <= 1e-15);
  CHECK(distance(pseudoinverse_solve(Matrix::from_rows({{1, 1}}), Vector{2}), Vector{1, 1}) <= 1e-15);
  CHECK(pseudoinverse_solve(Matrix(2, 3), Vector{1, 1}) == Vector(3));
}

TEST_CASE("pseudoinverse agrees with an independent least-squares solver") {
  std::mt19937_64 rng(2);
  for (auto [m, n] : {std::pair{5, 9}, std::pair{9, 5}, std::pair{7, 7}}) {
    const Matrix a = random_matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n), rng);
    const Vector y = random_vector(static_cast<std::size_t>(m), rng);
    CHECK(distance(pseudoinverse_solve(a, y), eigen_pinv_solve(a, y)) <= 1e-10);
  }
}

TEST_CASE("r_min examples") {
  const Matrix row12 = Matrix::from_rows({{1, 2}});
  RMinOptions opts;
  opts.budget = 200000;

  const RMinResult sq = r_min_solve(row12, Vector{2}, Regularizer(RegularizerKind::squared_norm), opts);
  CHECK(distance(sq.x, Vector{0.4, 0.8}) <= 1e-6);
  CHECK(sq.feasible);

  const auto [vertex, best] = l1_min_on_row_12();
  CHECK(best == 1.0);
  const RMinResult l1 = r_min_solve(row12, Vector{2}, Regularizer(RegularizerKind::l1), opts);
  CHECK(l1.feasible);
  CHECK(l1.restarts_agree);
  CHECK(std::abs(l1.value - best) <= 1e-4);
  CHECK(distance(l1.x, vertex) <= 1e-3);

  const RMinResult tv = r_min_solve(Matrix::from_rows({{1, 1}}), Vector{2}, Regularizer(RegularizerKind::tv_1d), opts);
  CHECK(tv.feasible);
  CHECK(distance(tv.x, Vector{1, 1}) <= 1e-6);
  CHECK(tv.value <= 1e-6);
}

TEST_CASE("r_min on desk problems: feasibility and ordering against the pseudoinverse") {
  RMinOptions opts;
  opts.budget = 20000;
  for (const ProblemSpec& spec : desk_specs()) {
    const Problem p = generate_problem(spec);
    const Matrix a = to_dense(*p.op);
    const Vector pinv = pseudoinverse_solve(a, p.y);
    for (const Regularizer& r : kAll) {
      const RMinResult res = r_min_solve(a, p.y, r, opts);
      CHECK(res.feasible);
      CHECK(r.value(res.x) <= r.value(pinv) + 1e-6);
    }
  }
}

TEST_CASE("r_min rejects bad options") {
  RMinOptions opts;
  opts.restarts = 0;
  CHECK_THROWS_AS((void)r_min_solve(Matrix::identity(2), Vector{1, 1}, Regularizer(RegularizerKind::l1), opts),
                  std::invalid_argument);
}

TEST_CASE("pseudoinverse equals the unperturbed landweber limit on desk problems") {
  for (const ProblemSpec& spec : desk_specs()) {
    if (spec.generator == Generator::deconvolution_1d) continue;  // too ill-conditioned for a unit test budget
    const Problem p = generate_problem(spec);
    IterationConfig c;
    c.lambda = admissible_lambda(*p.op);
    c.max_iter = 100000;
    c.record_every = 100000;
    c.detect_convergence = true;
    StoppingRule rule;
    rule.cap = 100000;
    const RunResult r = run_iteration(*p.op, p.y, c, rule);
    CHECK(r.status == RunStatus::converged);
    CHECK(distance(r.state.x, pseudoinverse_solve(to_dense(*p.op), p.y)) <= 1e-6);
  }
}
