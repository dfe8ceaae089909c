#pragma once

#include <cmath>
#include <numbers>

namespace fsw {

/// Compensated (Neumaier) accumulator; keeps long sums of doubles accurate
/// regardless of magnitude ordering.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Normalized sinc: sin(pi x) / (pi x), with sinc(0) = 1.
inline double sinc(double x) {
  if (x == 0.0) {
    return 1.0;
  }
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

/// Fused t * sinc(2 xi t). Returns 0 at t = 0 for every xi, and t at xi = 0;
/// no explicit division by xi anywhere.
inline double t_sinc(double t, double xi) {
  if (t == 0.0) {
    return 0.0;
  }
  return t * sinc(2.0 * xi * t);
}

}  // namespace fsw
