#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace fsw {

/// Dense column-major matrix of doubles. Points are stored as columns, so a
/// single support point is contiguous in memory.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_columns(const std::vector<std::vector<double>>& columns);

  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }

  std::span<const double> col(std::size_t c) const {
    return {data_.data() + c * rows_, rows_};
  }
  std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// mu = sum_i w_i delta_{x_i}: support points are the columns of a d x N
/// matrix, weights are nonnegative and finite. Zero-weight atoms are allowed
/// and carry no semantic content. Immutable after construction.
class DiscreteMeasure {
 public:
  DiscreteMeasure(Matrix points, std::vector<double> weights);

  std::size_t dim() const { return points_.rows(); }
  std::size_t size() const { return points_.cols(); }

  std::span<const double> point(std::size_t i) const { return points_.col(i); }
  double weight(std::size_t i) const { return weights_[i]; }

  const Matrix& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  Matrix points_;
  std::vector<double> weights_;
};

inline constexpr double kSimplexTolerance = 1e-12;
inline constexpr double kDefaultRho = 0.5;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A DiscreteMeasure whose weights sum to 1 within kSimplexTolerance,
/// checked at construction. Construction never renormalizes silently;
/// use normalize() for that.
class ProbabilityMeasure : public DiscreteMeasure {
 public:
  explicit ProbabilityMeasure(DiscreteMeasure base);
  ProbabilityMeasure(Matrix points, std::vector<double> weights);
};

/// Uniform distribution on the columns of `points` (weights 1/n each).
/// Multiplicity is carried by repeated columns. The empty multiset is
/// rejected.
ProbabilityMeasure from_multiset(Matrix points);

/// Sum of the weights.
double total_mass(const DiscreteMeasure& mu);

/// Divides the weights by the total mass; fails on the zero measure.
ProbabilityMeasure normalize(const DiscreteMeasure& mu);

/// If total mass >= rho, same as normalize(). Otherwise pads the measure
/// with an extra support point at the origin (appended as the last column)
/// carrying the complementary mass 1 - mass/rho, with the original weights
/// divided by rho. Defined for every measure including zero, where it
/// returns delta_0.
ProbabilityMeasure regularize(const DiscreteMeasure& mu, double rho = kDefaultRho);

/// W_p distance to the point mass at the origin: (sum_i w_i ||x_i||^p)^(1/p)
/// for finite p, and max ||x_i|| over positive-weight atoms for p = inf.
double pseudonorm(const ProbabilityMeasure& mu, double p);

/// Multiplies all support points by alpha >= 0; weights unchanged.
DiscreteMeasure scale_points(const DiscreteMeasure& mu, double alpha);
ProbabilityMeasure scale_points(const ProbabilityMeasure& mu, double alpha);

}  // namespace fsw
