#include "superlw/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace superlw {

namespace {

double sign(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::string_view to_string(RegularizerKind kind) noexcept {
  switch (kind) {
    case RegularizerKind::squared_norm:
      return "squared-norm";
    case RegularizerKind::l1:
      return "l1";
    case RegularizerKind::tv_1d:
      return "tv-1d";
  }
  return "unknown";
}

RegularizerKind parse_regularizer_kind(std::string_view name) {
  if (name == "squared-norm") return RegularizerKind::squared_norm;
  if (name == "l1") return RegularizerKind::l1;
  if (name == "tv-1d") return RegularizerKind::tv_1d;
  throw std::invalid_argument("unknown regularizer '" + std::string(name) + "'");
}

std::string_view to_string(PerturbationMode mode) noexcept {
  return mode == PerturbationMode::monotone ? "monotone" : "unconditional";
}

PerturbationMode parse_perturbation_mode(std::string_view name) {
  if (name == "unconditional") return PerturbationMode::unconditional;
  if (name == "monotone") return PerturbationMode::monotone;
  throw std::invalid_argument("unknown perturbation mode '" + std::string(name) + "'");
}

Regularizer::Regularizer(RegularizerKind kind, double weight) : kind_(kind), weight_(weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("regularizer weight must be positive and finite");
  }
}

double Regularizer::value(const Vector& x) const {
  double s = 0.0;
  switch (kind_) {
    case RegularizerKind::squared_norm:
      s = dot(x, x);
      break;
    case RegularizerKind::l1:
      s = l1_norm(x);
      break;
    case RegularizerKind::tv_1d:
      for (std::size_t i = 0; i + 1 < x.size(); ++i) s += std::abs(x[i + 1] - x[i]);
      break;
  }
  return weight_ * s;
}

Vector Regularizer::subgradient(const Vector& x) const {
  Vector d(x.size());
  switch (kind_) {
    case RegularizerKind::squared_norm:
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = 2.0 * weight_ * x[i];
      break;
    case RegularizerKind::l1:
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = weight_ * sign(x[i]);
      break;
    case RegularizerKind::tv_1d:
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double s = weight_ * sign(x[i + 1] - x[i]);
        d[i] -= s;
        d[i + 1] += s;
      }
      break;
  }
  return d;
}

PerturbationMap::PerturbationMap(Regularizer regularizer, double smoothing_eps,
                                 PerturbationMode mode)
    : regularizer_(regularizer), smoothing_eps_(smoothing_eps), mode_(mode) {
  if (!(smoothing_eps > 0.0)) throw std::invalid_argument("smoothing_eps must be positive");
}

Vector PerturbationMap::direction(const Vector& x) const {
  Vector d = regularizer_.subgradient(x);
  const double nd = norm(d);
  if (nd == 0.0) return d;
  d *= -1.0 / std::max(nd, smoothing_eps_);
  return d;
}

Vector PerturbationMap::perturb(const Vector& x, double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("perturbation step must be non-negative");
  if (t == 0.0) return x;
  Vector candidate = x;
  candidate.axpy(t, direction(x));
  if (mode_ == PerturbationMode::monotone && regularizer_.value(candidate) > regularizer_.value(x)) {
    return x;
  }
  return candidate;
}

}  // namespace superlw
