#pragma once

#include <string_view>

namespace superlw {

enum class StopKind { a_priori, discrepancy, max_iter };

std::string_view to_string(StopKind kind) noexcept;
/// Accepts "a-priori", "discrepancy", "max-iter".
StopKind parse_stop_kind(std::string_view name);

/// Parameter-choice rule that turns the iterate family into a regularization
/// method. Every kind is wrapped by the hard `cap`.
struct StoppingRule {
  StopKind kind = StopKind::max_iter;
  double c = 1.0;      // a-priori: kappa(delta) = ceil(c delta^-p)
  double p = 0.5;
  double tau = 1.5;    // discrepancy: stop once ||Ax - y_delta|| <= tau delta
  double delta = 0.0;  // noise level
  long cap = 100000;

  /// Throws std::invalid_argument on c <= 0, p <= 0, tau <= 1, delta < 0 or cap < 1.
  void validate() const;

  friend bool operator==(const StoppingRule&, const StoppingRule&) = default;
};

/// min(ceil(c delta^-p), cap). The ceiling tolerates 1e-12 relative
/// representation error so that e.g. 0.01^-0.5 maps to 10. Throws
/// std::invalid_argument for delta <= 0.
[[nodiscard]] long apriori_index(const StoppingRule& rule, double delta);

/// residual_norm <= tau delta. Throws std::invalid_argument unless delta > 0 and tau > 1.
[[nodiscard]] bool discrepancy_fired(const StoppingRule& rule, double residual_norm);

}  // namespace superlw
