#include "fsw/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "fsw/numeric.hpp"
#include "fsw/parallel.hpp"
#include "fsw/rng.hpp"

namespace fsw {

EmbeddingParams EmbeddingParams::sample(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (d < 1 || m < 1) {
    throw std::invalid_argument("EmbeddingParams::sample: need d >= 1 and m >= 1");
  }
  EmbeddingParams params;
  params.d = d;
  params.m = m;
  params.seed = seed;
  params.directions = Matrix(d, m);
  params.frequencies.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    rng::Stream dir_stream(seed, rng::Space::embedding_direction, k);
    rng::sample_unit_vector(dir_stream, params.directions.col(k));
    rng::Stream freq_stream(seed, rng::Space::embedding_frequency, k);
    params.frequencies[k] = rng::sample_frequency(freq_stream);
  }
  return params;
}

EmbeddingParams EmbeddingParams::prefix(std::size_t count) const {
  if (count > m) {
    throw std::invalid_argument("EmbeddingParams::prefix: count exceeds m");
  }
  EmbeddingParams out;
  out.d = d;
  out.m = count;
  out.seed = seed;
  out.directions = Matrix(d, count);
  out.frequencies.assign(frequencies.begin(), frequencies.begin() + count);
  for (std::size_t k = 0; k < count; ++k) {
    auto dst = out.directions.col(k);
    auto src = directions.col(k);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

nlohmann::json EmbeddingParams::to_json(bool include_arrays) const {
  nlohmann::json j{{"d", d}, {"m", m}, {"seed", seed}};
  if (include_arrays) {
    nlohmann::json dirs = nlohmann::json::array();
    for (std::size_t k = 0; k < m; ++k) {
      auto v = directions.col(k);
      dirs.push_back(std::vector<double>(v.begin(), v.end()));
    }
    j["directions"] = std::move(dirs);
    j["frequencies"] = frequencies;
  }
  return j;
}

EmbeddingParams EmbeddingParams::from_json(const nlohmann::json& j) {
  const auto d = j.at("d").get<std::size_t>();
  const auto m = j.at("m").get<std::size_t>();
  const auto seed = j.at("seed").get<std::uint64_t>();
  if (!j.contains("directions") && !j.contains("frequencies")) {
    return sample(d, m, seed);
  }
  if (!j.contains("directions") || !j.contains("frequencies")) {
    throw std::invalid_argument("EmbeddingParams: directions and frequencies come together");
  }
  EmbeddingParams params;
  params.d = d;
  params.m = m;
  params.seed = seed;
  const auto& dirs = j.at("directions");
  if (dirs.size() != m) {
    throw std::invalid_argument("EmbeddingParams: expected m direction vectors");
  }
  params.directions = Matrix(d, m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto column = dirs.at(k).get<std::vector<double>>();
    if (column.size() != d) {
      throw std::invalid_argument("EmbeddingParams: direction dimension mismatch");
    }
    double norm_sq = 0.0;
    for (double x : column) {
      norm_sq += x * x;
    }
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-10) {
      throw std::invalid_argument("EmbeddingParams: direction " + std::to_string(k) +
                                  " is not a unit vector");
    }
    std::copy(column.begin(), column.end(), params.directions.col(k).begin());
  }
  params.frequencies = j.at("frequencies").get<std::vector<double>>();
  if (params.frequencies.size() != m) {
    throw std::invalid_argument("EmbeddingParams: expected m frequencies");
  }
  for (double xi : params.frequencies) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
      throw std::invalid_argument("EmbeddingParams: frequencies must be finite and nonnegative");
    }
  }
  return params;
}

std::string to_string(EmbeddingVariant variant) {
  switch (variant) {
    case EmbeddingVariant::basic:
      return "basic";
    case EmbeddingVariant::mass_plain:
      return "mass_plain";
    case EmbeddingVariant::mass_regularized:
      return "mass_regularized";
    case EmbeddingVariant::mass_homogeneous:
      return "mass_homogeneous";
  }
  throw std::logic_error("to_string: unknown embedding variant");
}

EmbeddingVariant variant_from_string(std::string_view name) {
  if (name == "basic") {
    return EmbeddingVariant::basic;
  }
  if (name == "mass_plain" || name == "mass-plain") {
    return EmbeddingVariant::mass_plain;
  }
  if (name == "mass_regularized" || name == "mass-reg") {
    return EmbeddingVariant::mass_regularized;
  }
  if (name == "mass_homogeneous" || name == "mass-homog") {
    return EmbeddingVariant::mass_homogeneous;
  }
  throw std::invalid_argument("unknown embedding variant: " + std::string(name));
}

namespace detail {

namespace {

struct FeatureScratch {
  std::vector<double> projections;
  std::vector<std::size_t> order;
  std::vector<double> cumulative;
};

void sort_projections(const DiscreteMeasure& mu, std::span<const double> v,
                      FeatureScratch& scratch) {
  const std::size_t n = mu.size();
  scratch.projections.resize(n);
  scratch.order.resize(n);
  scratch.cumulative.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = mu.point(i);
    double dot = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      dot += v[a] * x[a];
    }
    scratch.projections[i] = dot;
  }
  std::iota(scratch.order.begin(), scratch.order.end(), std::size_t{0});
  std::sort(scratch.order.begin(), scratch.order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = scratch.projections[a];
    const double pb = scratch.projections[b];
    return pa < pb || (pa == pb && a < b);
  });
  CompensatedSum cumulative;
  for (std::size_t k = 0; k < n; ++k) {
    cumulative.add(mu.weight(scratch.order[k]));
    scratch.cumulative[k] = cumulative.value();
  }
}

// E = 2 (1 + xi) sum_k T_k sinc(2 xi T_k) (s_k - s_{k+1}), with s sorted
// ascending, T the cumulative weights and s_{n+1} = 0. This is the
// Abel-summed sinc form of the defining integral; no division by xi.
double feature_from_sorted(const FeatureScratch& scratch, double xi) {
  const std::size_t n = scratch.order.size();
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    const double s_k = scratch.projections[scratch.order[k]];
    const double s_next = (k + 1 < n) ? scratch.projections[scratch.order[k + 1]] : 0.0;
    acc.add(t_sinc(scratch.cumulative[k], xi) * (s_k - s_next));
  }
  return 2.0 * (1.0 + xi) * acc.value();
}

double feature(const DiscreteMeasure& mu, std::span<const double> v, double xi,
               FeatureScratch& scratch) {
  sort_projections(mu, v, scratch);
  return feature_from_sorted(scratch, xi);
}

}  // namespace

double cosine_feature(const DiscreteMeasure& mu, std::span<const double> v, double xi) {
  if (v.size() != mu.dim()) {
    throw std::invalid_argument("cosine_feature: direction dimension mismatch");
  }
  FeatureScratch scratch;
  return feature(mu, v, xi, scratch);
}

}  // namespace detail

double one_sample(const ProbabilityMeasure& mu, std::span<const double> v, double xi) {
  if (v.size() != mu.dim()) {
    throw std::invalid_argument("one_sample: direction dimension mismatch");
  }
  double norm_sq = 0.0;
  for (double x : v) {
    norm_sq += x * x;
  }
  if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-10) {
    throw std::invalid_argument("one_sample: direction must be a unit vector");
  }
  if (!(xi >= 0.0) || !std::isfinite(xi)) {
    throw std::invalid_argument("one_sample: frequency must be finite and nonnegative");
  }
  return detail::cosine_feature(mu, v, xi);
}

EmbeddingVector embed(const ProbabilityMeasure& mu, const EmbeddingParams& params) {
  if (params.d != mu.dim()) {
    throw std::invalid_argument("embed: measure dimension " + std::to_string(mu.dim()) +
                                " does not match params.d " + std::to_string(params.d));
  }
  EmbeddingVector out;
  out.variant = EmbeddingVariant::basic;
  out.coords.resize(params.m);
  parallel_for(params.m, [&](std::size_t begin, std::size_t end) {
    detail::FeatureScratch scratch;
    for (std::size_t k = begin; k < end; ++k) {
      out.coords[k] =
          detail::feature(mu, params.direction(k), params.frequencies[k], scratch);
    }
  });
  return out;
}

double embedding_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.variant != b.variant) {
    throw std::invalid_argument("embedding_distance: variant mismatch");
  }
  if (a.coords.size() != b.coords.size()) {
    throw std::invalid_argument("embedding_distance: length mismatch");
  }
  if (a.coords.empty()) {
    return 0.0;
  }
  CompensatedSum sum;
  for (std::size_t k = 0; k < a.coords.size(); ++k) {
    const double diff = a.coords[k] - b.coords[k];
    sum.add(diff * diff);
  }
  return std::sqrt(sum.value() / static_cast<double>(a.coords.size()));
}

EmbeddingVector embed_measure(const DiscreteMeasure& mu, const EmbeddingParams& params,
                              double rho, EmbeddingVariant variant) {
  if (variant == EmbeddingVariant::basic) {
    throw std::invalid_argument("embed_measure: basic variant takes embed()");
  }
  if (params.m < 1) {
    throw std::invalid_argument("embed_measure: need m >= 1 for the mass channel");
  }
  const double mass = total_mass(mu);
  const EmbeddingParams inner_params = params.prefix(params.m - 1);

  std::vector<double> inner;
  if (variant == EmbeddingVariant::mass_plain) {
    if (!(mass > 0.0)) {
      throw std::domain_error("embed_measure: plain variant undefined at the zero measure");
    }
    inner = params.m > 1 ? embed(normalize(mu), inner_params).coords : std::vector<double>{};
  } else {
    inner = params.m > 1 ? embed(regularize(mu, rho), inner_params).coords
                         : std::vector<double>{};
  }

  EmbeddingVector out;
  out.variant = variant;
  out.coords.reserve(params.m);
  if (variant == EmbeddingVariant::mass_homogeneous) {
    CompensatedSum norm_sq;
    for (double x : inner) {
      norm_sq.add(x * x);
    }
    out.coords.push_back(std::sqrt(norm_sq.value()) * mass);
  } else {
    out.coords.push_back(mass);
  }
  out.coords.insert(out.coords.end(), inner.begin(), inner.end());
  return out;
}

EmbeddingGradient embed_grad(const ProbabilityMeasure& mu, const EmbeddingParams& params) {
  if (params.d != mu.dim()) {
    throw std::invalid_argument("embed_grad: measure dimension does not match params");
  }
  const std::size_t n = mu.size();
  const std::size_t d = mu.dim();
  const std::size_t m = params.m;
  EmbeddingGradient grad;
  grad.d = d;
  grad.n = n;
  grad.m = m;
  grad.wrt_points.assign(m * n * d, 0.0);
  grad.wrt_weights.assign(m * n, 0.0);

  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    detail::FeatureScratch scratch;
    std::vector<double> suffix(n);
    for (std::size_t k = begin; k < end; ++k) {
      const auto v = params.direction(k);
      const double xi = params.frequencies[k];
      detail::sort_projections(mu, v, scratch);
      for (std::size_t j = 0; j + 1 < n; ++j) {
        if (scratch.projections[scratch.order[j]] == scratch.projections[scratch.order[j + 1]]) {
          throw std::domain_error("embed_grad: tied projected values in direction " +
                                  std::to_string(k) + "; derivative undefined");
        }
      }
      const double scale = 2.0 * (1.0 + xi);

      // d/ds_j of sum_q g(T_q)(s_q - s_{q+1}) with g(t) = t sinc(2 xi t):
      // g(T_j) - g(T_{j-1}); chain through s_j = v . x_{order(j)}.
      for (std::size_t j = 0; j < n; ++j) {
        const double g_here = t_sinc(scratch.cumulative[j], xi);
        const double g_prev = (j > 0) ? t_sinc(scratch.cumulative[j - 1], xi) : 0.0;
        const double ds = scale * (g_here - g_prev);
        const std::size_t i = scratch.order[j];
        for (std::size_t a = 0; a < d; ++a) {
          grad.wrt_points[(k * n + i) * d + a] = ds * v[a];
        }
      }

      // dT_q/dw_l = 1 for every q at or after l's sorted rank, and
      // g'(t) = cos(2 pi xi t), so the weight gradient is a suffix sum.
      CompensatedSum tail;
      for (std::size_t j = n; j-- > 0;) {
        const double s_j = scratch.projections[scratch.order[j]];
        const double s_next = (j + 1 < n) ? scratch.projections[scratch.order[j + 1]] : 0.0;
        tail.add(std::cos(2.0 * std::numbers::pi * xi * scratch.cumulative[j]) * (s_j - s_next));
        suffix[j] = tail.value();
      }
      for (std::size_t j = 0; j < n; ++j) {
        grad.wrt_weights[k * n + scratch.order[j]] = scale * suffix[j];
      }
    }
  });
  return grad;
}

std::size_t injectivity_dim_multisets(std::size_t n, std::size_t d) { return 2 * n * d + 1; }

std::size_t injectivity_dim_measures(std::size_t n, std::size_t d) {
  return 2 * n * d + 2 * n - 1;
}

}  // namespace fsw
