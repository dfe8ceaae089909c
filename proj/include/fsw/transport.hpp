#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsw/measure.hpp"

namespace fsw {

/// Desk-scale guard for the exact solver.
inline constexpr std::size_t kExactSolverMaxSupport = 64;

/// Raised when an input exceeds the exact solver's support-size guard.
struct SupportSizeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Nonnegative matrix whose row sums match the source weights and column sums
/// match the target weights (within 1e-9). Entries are clamped to 0 on output.
class TransportPlan {
 public:
  TransportPlan(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct ExactDistance {
  double cost = 0.0;
  double p = 2.0;
  TransportPlan plan{0, 0};
  /// Most negative reduced cost at termination; >= -1e-9 certifies optimality.
  double max_dual_violation = 0.0;
};

/// Globally optimal p-Wasserstein distance between two discrete probability
/// measures, solved with the transportation simplex on the complete bipartite
/// graph (Bland's anti-cycling rule). Zero-weight atoms are dropped before
/// solving; the returned plan is indexed by the original supports with zero
/// rows/columns for dropped atoms. Supports larger than
/// kExactSolverMaxSupport are rejected; use sliced estimation instead.
ExactDistance wasserstein_exact(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                double p = 2.0);

struct SlicedEstimate {
  double estimate = 0.0;   // sqrt(mean of squared 1-D distances)
  double mean_sq = 0.0;    // mean of squared 1-D distances
  double std_error = 0.0;  // standard error of mean_sq
  std::int64_t directions = 0;
};

/// Monte-Carlo sliced Wasserstein: L uniform directions, each 1-D distance
/// computed exactly from the quantile functions. Directions come from a
/// dedicated seed namespace, independent of embedding parameters drawn from
/// the same seed.
SlicedEstimate sliced_wasserstein_mc(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                     std::int64_t directions, std::uint64_t seed);

/// Closed form for measures supported on one common line through the origin:
/// SW = W_2 / sqrt(d), with W_2 computed exactly in 1-D along the line.
/// Off-line support points (beyond 1e-10) are an error.
double sliced_wasserstein_collinear(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu);

/// The pair of uniform multisets { (i/(n+1)) * ones(d) : i = 1..n } for
/// n = n1 and n = n2. Distinct sizes required. Interpolation-based embeddings
/// identify the two; the FSW embedding separates them.
std::pair<ProbabilityMeasure, ProbabilityMeasure> pswe_counterexample_pair(std::size_t d,
                                                                           std::size_t n1,
                                                                           std::size_t n2);

/// {"cost":..., "p":..., "plan":[[...]...]} for audit.
nlohmann::json plan_to_json(const ExactDistance& result);

}  // namespace fsw
