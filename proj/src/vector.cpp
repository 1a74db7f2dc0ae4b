#include "superlw/vector.hpp"

#include <algorithm>
#include <cmath>

namespace superlw {

void require_length(std::size_t actual, std::size_t expected, const std::string& what) {
  if (actual != expected) {
    throw DimensionError(what + ": expected length " + std::to_string(expected) + ", got " +
                         std::to_string(actual));
  }
}

Vector& Vector::operator+=(const Vector& other) {
  require_length(other.size(), size(), "vector addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_length(other.size(), size(), "vector subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vector& Vector::operator*=(double alpha) noexcept {
  for (double& v : data_) v *= alpha;
  return *this;
}

Vector& Vector::axpy(double alpha, const Vector& x) {
  require_length(x.size(), size(), "axpy");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * x.data_[i];
  return *this;
}

bool Vector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double alpha, Vector x) { return x *= alpha; }

double dot(const Vector& a, const Vector& b) {
  require_length(b.size(), a.size(), "dot product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Scaled accumulation so that tiny and huge entries neither underflow nor overflow.
double norm(const Vector& v) noexcept {
  double scale = 0.0;
  double ssq = 1.0;
  for (double x : v) {
    if (x == 0.0) continue;
    const double ax = std::abs(x);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double l1_norm(const Vector& v) noexcept {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double distance(const Vector& a, const Vector& b) { return norm(a - b); }

}  // namespace superlw
