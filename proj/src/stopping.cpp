#include "superlw/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace superlw {

std::string_view to_string(StopKind kind) noexcept {
  switch (kind) {
    case StopKind::a_priori:
      return "a-priori";
    case StopKind::discrepancy:
      return "discrepancy";
    case StopKind::max_iter:
      return "max-iter";
  }
  return "unknown";
}

StopKind parse_stop_kind(std::string_view name) {
  if (name == "a-priori") return StopKind::a_priori;
  if (name == "discrepancy") return StopKind::discrepancy;
  if (name == "max-iter") return StopKind::max_iter;
  throw std::invalid_argument("unknown stopping rule '" + std::string(name) + "'");
}

void StoppingRule::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("stopping rule: c must be positive");
  if (!(p > 0.0)) throw std::invalid_argument("stopping rule: p must be positive");
  if (!(tau > 1.0)) throw std::invalid_argument("stopping rule: tau must exceed 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("stopping rule: delta must be non-negative");
  if (cap < 1) throw std::invalid_argument("stopping rule: cap must be at least 1");
}

long apriori_index(const StoppingRule& rule, double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("a-priori rule needs delta > 0; run exact data to convergence");
  }
  const double raw = rule.c * std::pow(delta, -rule.p);
  if (!std::isfinite(raw) || raw >= static_cast<double>(rule.cap)) return rule.cap;
  const double nearest = std::round(raw);
  const double k = std::abs(raw - nearest) <= 1e-12 * std::max(1.0, nearest) ? nearest : std::ceil(raw);
  return std::min(static_cast<long>(k), rule.cap);
}

bool discrepancy_fired(const StoppingRule& rule, double residual_norm) {
  if (!(rule.delta > 0.0)) throw std::invalid_argument("discrepancy principle needs delta > 0");
  if (!(rule.tau > 1.0)) throw std::invalid_argument("discrepancy principle needs tau > 1");
  return residual_norm <= rule.tau * rule.delta;
}

}  // namespace superlw
