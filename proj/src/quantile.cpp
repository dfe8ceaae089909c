#include "fsw/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fsw/numeric.hpp"

namespace fsw {

StepQuantile::StepQuantile(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1) {
    throw std::invalid_argument("StepQuantile: need K values and K+1 breakpoints");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw std::invalid_argument("StepQuantile: breakpoints must start at 0 and end at 1");
  }
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] < breakpoints_[k + 1])) {
      throw std::invalid_argument("StepQuantile: breakpoints must be strictly increasing");
    }
  }
  for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
    if (values_[k] > values_[k + 1]) {
      throw std::invalid_argument("StepQuantile: values must be nondecreasing");
    }
  }
}

double StepQuantile::eval(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("StepQuantile::eval: t outside [0, 1]");
  }
  if (t == 1.0) {
    return values_.back();  // essential max
  }
  // First breakpoint strictly above t; piece index is one less.
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto piece = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return values_[piece];
}

namespace {

void check_unit_direction(const DiscreteMeasure& mu, std::span<const double> direction) {
  if (direction.size() != mu.dim()) {
    throw std::invalid_argument("project: direction dimension mismatch");
  }
  double norm_sq = 0.0;
  for (double x : direction) {
    norm_sq += x * x;
  }
  if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-10) {
    throw std::invalid_argument("project: direction must be a unit vector");
  }
}

Matrix projected_row(const DiscreteMeasure& mu, std::span<const double> direction) {
  Matrix row(1, mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto x = mu.point(i);
    double dot = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      dot += direction[a] * x[a];
    }
    row(0, i) = dot;
  }
  return row;
}

}  // namespace

DiscreteMeasure project(const DiscreteMeasure& mu, std::span<const double> direction) {
  check_unit_direction(mu, direction);
  return {projected_row(mu, direction), mu.weights()};
}

ProbabilityMeasure project(const ProbabilityMeasure& mu, std::span<const double> direction) {
  check_unit_direction(mu, direction);
  return {projected_row(mu, direction), mu.weights()};
}

StepQuantile quantile(const ProbabilityMeasure& nu) {
  if (nu.dim() != 1) {
    throw std::invalid_argument("quantile: measure must be one-dimensional");
  }
  const std::size_t n = nu.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = nu.points()(0, a);
    const double vb = nu.points()(0, b);
    return va < vb || (va == vb && a < b);
  });

  std::size_t last_positive = n;
  for (std::size_t k = n; k-- > 0;) {
    if (nu.weight(order[k]) > 0.0) {
      last_positive = k;
      break;
    }
  }
  if (last_positive == n) {
    throw std::invalid_argument("quantile: measure has no positive-weight atoms");
  }

  std::vector<double> breakpoints{0.0};
  std::vector<double> values;
  CompensatedSum cumulative;
  for (std::size_t k = 0; k <= last_positive; ++k) {
    const std::size_t i = order[k];
    const double w = nu.weight(i);
    if (w == 0.0) {
      continue;
    }
    cumulative.add(w);
    // The final breakpoint is pinned to exactly 1; rounding can make an
    // intermediate sum touch a neighbor, in which case the zero-length piece
    // is dropped.
    const double c = (k == last_positive) ? 1.0 : std::min(cumulative.value(), 1.0);
    if (c <= breakpoints.back()) {
      continue;
    }
    breakpoints.push_back(c);
    values.push_back(nu.points()(0, i));
  }
  if (values.empty()) {
    throw std::invalid_argument("quantile: degenerate cumulative weights");
  }
  return {std::move(breakpoints), std::move(values)};
}

double quantile_lp_distance(const StepQuantile& a, const StepQuantile& b, double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("quantile_lp_distance: p must lie in [1, inf]");
  }
  const auto& ba = a.breakpoints();
  const auto& bb = b.breakpoints();
  std::size_t ia = 1;
  std::size_t ib = 1;
  double t_prev = 0.0;
  CompensatedSum integral;
  double sup = 0.0;
  while (t_prev < 1.0) {
    const double t_next = std::min(ba[ia], bb[ib]);
    const double diff = std::abs(a.values()[ia - 1] - b.values()[ib - 1]);
    if (p == kInfinity) {
      sup = std::max(sup, diff);
    } else if (p == 1.0) {
      integral.add((t_next - t_prev) * diff);
    } else if (p == 2.0) {
      integral.add((t_next - t_prev) * diff * diff);
    } else {
      integral.add((t_next - t_prev) * std::pow(diff, p));
    }
    if (ba[ia] == t_next) {
      ++ia;
    }
    if (bb[ib] == t_next) {
      ++ib;
    }
    t_prev = t_next;
  }
  if (p == kInfinity) {
    return sup;
  }
  const double total = std::max(integral.value(), 0.0);
  if (p == 1.0) {
    return total;
  }
  if (p == 2.0) {
    return std::sqrt(total);
  }
  return std::pow(total, 1.0 / p);
}

double wasserstein_sorted(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || x.size() != y.size()) {
    throw std::invalid_argument("wasserstein_sorted: vectors must have equal positive length");
  }
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  CompensatedSum sum;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double diff = xs[i] - ys[i];
    sum.add(diff * diff);
  }
  return std::sqrt(sum.value() / static_cast<double>(xs.size()));
}

}  // namespace fsw
