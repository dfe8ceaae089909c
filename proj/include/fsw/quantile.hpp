#pragma once

#include <span>
#include <vector>

#include "fsw/measure.hpp"

namespace fsw {

/// Quantile function of a 1-D distribution: a right-continuous nondecreasing
/// step function on [0, 1]. values()[k] is taken on the piece
/// [breakpoints()[k], breakpoints()[k+1]); the value at t = 1 is the last
/// value (essential max). Breakpoints are strictly increasing, start at 0 and
/// end at exactly 1.
class StepQuantile {
 public:
  StepQuantile(std::vector<double> breakpoints, std::vector<double> values);

  /// Right-continuous evaluation; t outside [0, 1] is an error.
  double eval(double t) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }

 private:
  std::vector<double> breakpoints_;  // size pieces() + 1
  std::vector<double> values_;
};

/// Pushforward of mu under x -> v^T x: a 1-D measure with the same weights.
/// v must be a unit vector (within 1e-10).
DiscreteMeasure project(const DiscreteMeasure& mu, std::span<const double> direction);
ProbabilityMeasure project(const ProbabilityMeasure& mu, std::span<const double> direction);

/// Builds the quantile step function of a 1-D probability measure. Support is
/// sorted by value (ties kept in original index order); zero-weight atoms are
/// dropped; cumulative weights are accumulated with compensated summation and
/// the final breakpoint is forced to exactly 1.
StepQuantile quantile(const ProbabilityMeasure& nu);

/// L^p distance of two step quantiles over [0, 1], computed exactly on the
/// merged breakpoint partition. Equals W_p of the underlying 1-D measures.
/// p = inf gives the sup over pieces (the t = 1 endpoint takes the last
/// piece's value, so it is covered).
double quantile_lp_distance(const StepQuantile& a, const StepQuantile& b, double p);

/// 2-Wasserstein distance of two uniform distributions on n values each:
/// (1/sqrt(n)) * || sort(x) - sort(y) ||.
double wasserstein_sorted(std::span<const double> x, std::span<const double> y);

}  // namespace fsw
