#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fsw/measure.hpp"

namespace fsw {

/// The m (direction, frequency) pairs of the embedding. Regenerating from
/// (seed, d, m) reproduces the identical list; each pair is derived from its
/// own counter-based stream, so generation order does not matter.
struct EmbeddingParams {
  std::size_t d = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  Matrix directions;                // d x m, unit columns
  std::vector<double> frequencies;  // m nonnegative reals

  /// Directions are normalized standard Gaussians; frequencies are drawn from
  /// the density (1 + xi)^-2 by inverting its CDF xi / (1 + xi).
  static EmbeddingParams sample(std::size_t d, std::size_t m, std::uint64_t seed);

  /// The first `count` pairs, e.g. the inner block of a measure embedding.
  EmbeddingParams prefix(std::size_t count) const;

  std::span<const double> direction(std::size_t k) const { return directions.col(k); }

  /// {"d":..,"m":..,"seed":..} plus the parameter arrays when requested;
  /// arrays are honored verbatim when reading, and regenerated from the seed
  /// when absent.
  nlohmann::json to_json(bool include_arrays = false) const;
  static EmbeddingParams from_json(const nlohmann::json& j);
};

enum class EmbeddingVariant { basic, mass_plain, mass_regularized, mass_homogeneous };

std::string to_string(EmbeddingVariant variant);
EmbeddingVariant variant_from_string(std::string_view name);

struct EmbeddingVector {
  std::vector<double> coords;
  EmbeddingVariant variant = EmbeddingVariant::basic;
};

/// One coordinate of the embedding: 2 (1 + xi) times the cosine transform of
/// the quantile function of v^T mu at frequency xi. Evaluated in closed form
/// over the sorted projected support with the t*sinc(2 xi t) primitive, so it
/// is stable as xi -> 0. |result| <= 3 * pseudonorm(mu, inf).
double one_sample(const ProbabilityMeasure& mu, std::span<const double> v, double xi);

/// The m-dimensional embedding; coordinate k is one_sample with the k-th
/// (direction, frequency) pair. O(m N d + m N log N); parallel over
/// coordinates with value-identical results for any thread count.
EmbeddingVector embed(const ProbabilityMeasure& mu, const EmbeddingParams& params);

/// sqrt((1/m) ||e1 - e2||^2): the natural sliced-Wasserstein estimate.
double embedding_distance(const EmbeddingVector& a, const EmbeddingVector& b);

/// Extension to measures of arbitrary total mass. The first output coordinate
/// is a mass channel and the remaining m-1 coordinates embed a normalized
/// measure:
///   mass_plain:       [mass, embed(normalize(mu))]; zero mass is an error
///   mass_regularized: [mass, embed(regularize(mu, rho))]; total
///   mass_homogeneous: [||inner|| * mass, inner], inner as in regularized
EmbeddingVector embed_measure(const DiscreteMeasure& mu, const EmbeddingParams& params,
                              double rho, EmbeddingVariant variant);

/// Exact partial derivatives of every embedding coordinate with respect to
/// every point coordinate and weight. Requires generic position: projected
/// values must be distinct within each direction, otherwise the map is not
/// differentiable and an error naming the direction is raised.
struct EmbeddingGradient {
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> wrt_points;   // (k * n + i) * d + a
  std::vector<double> wrt_weights;  // k * n + i

  double point_grad(std::size_t k, std::size_t i, std::size_t a) const {
    return wrt_points[(k * n + i) * d + a];
  }
  double weight_grad(std::size_t k, std::size_t i) const { return wrt_weights[k * n + i]; }
};

EmbeddingGradient embed_grad(const ProbabilityMeasure& mu, const EmbeddingParams& params);

/// Embedding dimensions sufficient for almost-sure injectivity: 2 N d + 1 on
/// multisets and 2 N d + 2 N - 1 on distributions. Advisory defaults, not
/// enforced anywhere.
std::size_t injectivity_dim_multisets(std::size_t n, std::size_t d);
std::size_t injectivity_dim_measures(std::size_t n, std::size_t d);

namespace detail {

/// The raw closed-form feature over an arbitrary nonnegatively weighted
/// measure, without the probability-simplex check. Shared by the embedding
/// itself and by finite-difference oracles that perturb weights off the
/// simplex.
double cosine_feature(const DiscreteMeasure& mu, std::span<const double> v, double xi);

}  // namespace detail

}  // namespace fsw
