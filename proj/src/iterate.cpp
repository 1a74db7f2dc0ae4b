#include "superlw/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace superlw {

StepSequence StepSequence::geometric(double t0, double ratio) {
  if (!(t0 >= 0.0) || !std::isfinite(t0)) throw std::invalid_argument("step t0 must be >= 0");
  if (!(ratio >= 0.0 && ratio < 1.0)) throw std::invalid_argument("step ratio must lie in [0, 1)");
  return StepSequence(Kind::geometric, t0, ratio);
}

double StepSequence::at(std::size_t k) const noexcept {
  if (kind_ == Kind::zero) return 0.0;
  return t0_ * std::pow(ratio_, static_cast<double>(k));
}

double StepSequence::tail_sum(std::size_t k) const noexcept {
  if (kind_ == Kind::zero) return 0.0;
  return t0_ * std::pow(ratio_, static_cast<double>(k + 1)) / (1.0 - ratio_);
}

double StepSequence::total() const noexcept {
  return kind_ == Kind::zero ? 0.0 : t0_ / (1.0 - ratio_);
}

std::string_view to_string(StepSequence::Kind kind) noexcept {
  return kind == StepSequence::Kind::zero ? "zero" : "geometric";
}

Regularizer IterationConfig::monitored_regularizer() const {
  if (monitor) return *monitor;
  if (perturbation) return perturbation->regularizer();
  return Regularizer(RegularizerKind::squared_norm);
}

void IterationConfig::validate(const LinearOperator& op) const {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (record_every < 1) throw std::invalid_argument("record_every must be at least 1");
  if (!(convergence_tol > 0.0)) throw std::invalid_argument("convergence_tol must be positive");
  if (x0) require_length(x0->size(), op.domain_dim(), "initial iterate");
  const NormEstimate est = estimate_norm(op);
  const double inflated = kNormInflation * est.value;
  if (!(lambda > 0.0) || !(lambda * inflated * inflated < 1.0)) {
    throw std::invalid_argument("lambda must lie in (0, 1/L^2) for the inflated norm estimate L = " +
                                std::to_string(inflated));
  }
}

Vector landweber_step(const LinearOperator& op, const Vector& y, const Vector& x, double lambda) {
  Vector residual = op.apply(x);
  residual -= y;
  Vector next = x;
  next.axpy(-lambda, op.apply_adjoint(residual));
  return next;
}

namespace {

double residual_norm(const LinearOperator& op, const Vector& y, const Vector& x) {
  Vector r = op.apply(x);
  r -= y;
  return norm(r);
}

HistoryRow make_row(const IterationState& s, const References& refs) {
  HistoryRow row{s.k, s.residual_norm, s.reg_value, {}, {}, {}};
  if (refs.pinv) row.error_to_pinv = distance(s.x, *refs.pinv);
  if (refs.rmin) row.error_to_rmin = distance(s.x, *refs.rmin);
  if (refs.exact_limit) row.error_to_exact_limit = distance(s.x, *refs.exact_limit);
  return row;
}

}  // namespace

IterationState initial_state(const LinearOperator& op, const Vector& y,
                             const IterationConfig& config) {
  require_length(y.size(), op.range_dim(), "data");
  IterationState s;
  s.x = config.x0 ? *config.x0 : Vector(op.domain_dim());
  s.x_half = s.x;
  s.residual_norm = residual_norm(op, y, s.x);
  s.reg_value = config.monitored_regularizer().value(s.x);
  return s;
}

IterationState superiorized_step(const LinearOperator& op, const Vector& y,
                                 const IterationState& state, const IterationConfig& config) {
  IterationState next;
  next.k = state.k + 1;
  const double t = config.perturbation ? config.steps.at(state.k) : 0.0;
  next.x_half = t > 0.0 ? config.perturbation->perturb(state.x, t) : state.x;
  next.x = landweber_step(op, y, next.x_half, config.lambda);
  next.residual_norm = residual_norm(op, y, next.x);
  next.reg_value = config.monitored_regularizer().value(next.x);
  return next;
}

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::rule_fired:
      return "fired";
    case RunStatus::converged:
      return "converged";
    case RunStatus::budget_exhausted:
      return "budget-exhausted";
  }
  return "unknown";
}

RunResult run_iteration(const LinearOperator& op, const Vector& y, const IterationConfig& config,
                        const StoppingRule& rule, const References& refs,
                        const StepObserver& observer) {
  config.validate(op);
  rule.validate();

  const auto budget = static_cast<std::size_t>(std::min(config.max_iter, rule.cap));
  std::optional<std::size_t> apriori_target;
  if (rule.kind == StopKind::a_priori) {
    apriori_target = static_cast<std::size_t>(apriori_index(rule, rule.delta));
  } else if (rule.kind == StopKind::discrepancy && !(rule.delta > 0.0)) {
    throw std::invalid_argument("discrepancy principle needs delta > 0");
  }
  const auto stride = static_cast<std::size_t>(config.record_every);

  RunResult result;
  result.state = initial_state(op, y, config);
  result.history.push_back(make_row(result.state, refs));

  for (;;) {
    const IterationState& cur = result.state;
    if (rule.kind == StopKind::discrepancy && discrepancy_fired(rule, cur.residual_norm)) {
      result.status = RunStatus::rule_fired;
      break;
    }
    if (apriori_target && cur.k == *apriori_target) {
      result.status = RunStatus::rule_fired;
      break;
    }
    if (cur.k >= budget) {
      const bool cap_is_rule = rule.kind == StopKind::max_iter &&
                               static_cast<long>(cur.k) == rule.cap;
      result.status = cap_is_rule ? RunStatus::rule_fired : RunStatus::budget_exhausted;
      break;
    }

    IterationState next = superiorized_step(op, y, cur, config);
    if (observer) observer(cur, next);

    bool converged = false;
    if (config.detect_convergence) {
      const double tail = config.perturbation ? config.steps.tail_sum(cur.k) : 0.0;
      converged = distance(next.x, cur.x) <= config.convergence_tol * (1.0 + norm(cur.x)) &&
                  tail <= config.convergence_tol;
    }
    result.state = std::move(next);
    if (result.state.k % stride == 0) result.history.push_back(make_row(result.state, refs));
    if (converged) {
      result.status = RunStatus::converged;
      break;
    }
  }

  if (result.history.back().k != result.state.k) {
    result.history.push_back(make_row(result.state, refs));
  }
  return result;
}

}  // namespace superlw
