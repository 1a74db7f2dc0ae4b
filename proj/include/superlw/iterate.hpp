#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "superlw/linear_operator.hpp"
#include "superlw/regularizer.hpp"
#include "superlw/stopping.hpp"
#include "superlw/vector.hpp"

namespace superlw {

/// Summable, non-negative perturbation step sizes t_k = t0 ratio^k.
class StepSequence {
 public:
  enum class Kind { geometric, zero };

  static StepSequence zero() noexcept { return StepSequence(Kind::zero, 0.0, 0.0); }
  /// Requires t0 >= 0 and 0 <= ratio < 1.
  static StepSequence geometric(double t0, double ratio);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] double t0() const noexcept { return t0_; }
  [[nodiscard]] double ratio() const noexcept { return ratio_; }

  [[nodiscard]] double at(std::size_t k) const noexcept;
  /// sum_{j > k} t_j
  [[nodiscard]] double tail_sum(std::size_t k) const noexcept;
  /// sum_{j >= 0} t_j
  [[nodiscard]] double total() const noexcept;

  friend bool operator==(const StepSequence&, const StepSequence&) = default;

 private:
  StepSequence(Kind kind, double t0, double ratio) : kind_(kind), t0_(t0), ratio_(ratio) {}

  Kind kind_;
  double t0_;
  double ratio_;
};

std::string_view to_string(StepSequence::Kind kind) noexcept;

struct IterationConfig {
  double lambda = 0.0;
  StepSequence steps = StepSequence::zero();
  std::optional<PerturbationMap> perturbation;
  long max_iter = 100000;
  long record_every = 1;
  /// Functional reported as reg_value. Falls back to the perturbation's
  /// regularizer, then to the squared norm.
  std::optional<Regularizer> monitor;
  /// Starting point; zero when absent.
  std::optional<Vector> x0;
  /// Stop once ||x_{k+1} - x_k|| <= convergence_tol (1 + ||x_k||) and the
  /// remaining perturbation budget sum_{j>k} t_j <= convergence_tol.
  bool detect_convergence = false;
  double convergence_tol = 1e-10;

  [[nodiscard]] Regularizer monitored_regularizer() const;
  /// Checks 0 < lambda (1.01 ||A||)^2 < 1 and the counters; throws std::invalid_argument.
  void validate(const LinearOperator& op) const;
};

struct IterationState {
  std::size_t k = 0;
  Vector x;       // x_k
  Vector x_half;  // last half-step x_{k-1/2}; equals x before the first step
  double residual_norm = 0.0;  // ||A x_k - y||
  double reg_value = 0.0;      // r(x_k)
};

/// x - lambda A*(Ax - y).
[[nodiscard]] Vector landweber_step(const LinearOperator& op, const Vector& y, const Vector& x,
                                    double lambda);

[[nodiscard]] IterationState initial_state(const LinearOperator& op, const Vector& y,
                                           const IterationConfig& config);

/// Perturb by t_k along the perturbation direction, then take one Landweber
/// step from the half-step. Without a perturbation map, or with t_k = 0, this
/// is exactly landweber_step.
[[nodiscard]] IterationState superiorized_step(const LinearOperator& op, const Vector& y,
                                               const IterationState& state,
                                               const IterationConfig& config);

enum class RunStatus { rule_fired, converged, budget_exhausted };

std::string_view to_string(RunStatus status) noexcept;

struct HistoryRow {
  std::size_t k = 0;
  double residual_norm = 0.0;
  double reg_value = 0.0;
  std::optional<double> error_to_pinv;
  std::optional<double> error_to_rmin;
  std::optional<double> error_to_exact_limit;

  friend bool operator==(const HistoryRow&, const HistoryRow&) = default;
};

/// Reference points against which recorded iterates are measured.
struct References {
  std::optional<Vector> pinv;
  std::optional<Vector> rmin;
  std::optional<Vector> exact_limit;
};

struct RunResult {
  IterationState state;
  std::vector<HistoryRow> history;
  RunStatus status = RunStatus::budget_exhausted;
};

/// Called after every step with the states before and after it.
using StepObserver = std::function<void(const IterationState&, const IterationState&)>;

/// Iterates superiorized_step from x0 until the stopping rule fires, the
/// convergence detector fires, or the budget min(config.max_iter, rule.cap)
/// runs out. Rows are recorded at k = 0, every record_every steps, and at the
/// final iterate.
[[nodiscard]] RunResult run_iteration(const LinearOperator& op, const Vector& y,
                                      const IterationConfig& config, const StoppingRule& rule,
                                      const References& refs = {},
                                      const StepObserver& observer = {});

}  // namespace superlw
