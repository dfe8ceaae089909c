#include "fsw/measure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "fsw/numeric.hpp"

namespace fsw {

Matrix Matrix::from_columns(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) {
    return {};
  }
  Matrix out(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != out.rows()) {
      throw std::invalid_argument("Matrix::from_columns: ragged columns");
    }
    for (std::size_t r = 0; r < out.rows(); ++r) {
      out(r, c) = columns[c][r];
    }
  }
  return out;
}

DiscreteMeasure::DiscreteMeasure(Matrix points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw std::invalid_argument("DiscreteMeasure: need d >= 1 and N >= 1");
  }
  if (weights_.size() != points_.cols()) {
    throw std::invalid_argument("DiscreteMeasure: one weight per support point required");
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("DiscreteMeasure: weights must be finite and nonnegative");
    }
  }
  for (std::size_t c = 0; c < points_.cols(); ++c) {
    for (double x : points_.col(c)) {
      if (!std::isfinite(x)) {
        throw std::invalid_argument("DiscreteMeasure: coordinates must be finite");
      }
    }
  }
}

ProbabilityMeasure::ProbabilityMeasure(DiscreteMeasure base) : DiscreteMeasure(std::move(base)) {
  const double mass = total_mass(*this);
  if (std::abs(mass - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("ProbabilityMeasure: weights sum to " + std::to_string(mass) +
                                ", not 1");
  }
}

ProbabilityMeasure::ProbabilityMeasure(Matrix points, std::vector<double> weights)
    : ProbabilityMeasure(DiscreteMeasure(std::move(points), std::move(weights))) {}

ProbabilityMeasure from_multiset(Matrix points) {
  if (points.cols() == 0) {
    throw std::invalid_argument("from_multiset: the empty multiset has no distribution");
  }
  // n * fl(1/n) is within an ulp of 1, far inside the simplex tolerance.
  const double w = 1.0 / static_cast<double>(points.cols());
  std::vector<double> weights(points.cols(), w);
  return {std::move(points), std::move(weights)};
}

double total_mass(const DiscreteMeasure& mu) {
  CompensatedSum sum;
  for (double w : mu.weights()) {
    sum.add(w);
  }
  return sum.value();
}

ProbabilityMeasure normalize(const DiscreteMeasure& mu) {
  const double mass = total_mass(mu);
  if (!(mass > 0.0)) {
    throw std::domain_error("normalize: undefined at the zero measure");
  }
  std::vector<double> weights(mu.weights());
  for (double& w : weights) {
    w /= mass;
  }
  // Guard against accumulated rounding pushing the sum off the simplex.
  CompensatedSum sum;
  for (double w : weights) {
    sum.add(w);
  }
  const double correction = sum.value();
  if (correction != 1.0 && correction > 0.0) {
    for (double& w : weights) {
      w /= correction;
    }
  }
  return {mu.points(), std::move(weights)};
}

ProbabilityMeasure regularize(const DiscreteMeasure& mu, double rho) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("regularize: rho must be positive");
  }
  const double mass = total_mass(mu);
  if (mass >= rho) {
    return normalize(mu);
  }
  const std::size_t n = mu.size();
  Matrix points(mu.dim(), n + 1);
  for (std::size_t c = 0; c < n; ++c) {
    auto dst = points.col(c);
    auto src = mu.point(c);
    for (std::size_t r = 0; r < mu.dim(); ++r) {
      dst[r] = src[r];
    }
  }
  // Column n stays at the origin and absorbs the complementary mass.
  std::vector<double> weights(n + 1, 0.0);
  CompensatedSum scaled;
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = mu.weight(i) / rho;
    scaled.add(weights[i]);
  }
  weights[n] = 1.0 - scaled.value();
  if (weights[n] < 0.0) {
    weights[n] = 0.0;
  }
  return {std::move(points), std::move(weights)};
}

double pseudonorm(const ProbabilityMeasure& mu, double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("pseudonorm: p must lie in [1, inf]");
  }
  if (p == kInfinity) {
    double best = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu.weight(i) > 0.0) {
        double norm_sq = 0.0;
        for (double x : mu.point(i)) {
          norm_sq += x * x;
        }
        best = std::max(best, std::sqrt(norm_sq));
      }
    }
    return best;
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double norm_sq = 0.0;
    for (double x : mu.point(i)) {
      norm_sq += x * x;
    }
    sum.add(mu.weight(i) * std::pow(std::sqrt(norm_sq), p));
  }
  return std::pow(sum.value(), 1.0 / p);
}

namespace {

Matrix scaled_points(const DiscreteMeasure& mu, double alpha) {
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("scale_points: alpha must be nonnegative");
  }
  Matrix points = mu.points();
  for (std::size_t c = 0; c < points.cols(); ++c) {
    for (double& x : points.col(c)) {
      x *= alpha;
    }
  }
  return points;
}

}  // namespace

DiscreteMeasure scale_points(const DiscreteMeasure& mu, double alpha) {
  return {scaled_points(mu, alpha), mu.weights()};
}

ProbabilityMeasure scale_points(const ProbabilityMeasure& mu, double alpha) {
  return {scaled_points(mu, alpha), mu.weights()};
}

}  // namespace fsw
