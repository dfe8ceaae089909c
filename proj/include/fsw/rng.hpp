#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace fsw::rng {

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

/// FNV-1a hash of a name, used to derive per-check substreams.
std::uint64_t hash_name(std::string_view name);

/// Disjoint namespaces so that, e.g., slicing directions are independent of
/// embedding directions drawn from the same user seed.
enum class Space : std::uint64_t {
  embedding_direction = 1,
  embedding_frequency = 2,
  slicing_direction = 3,
  validation = 4,
};

/// Counter-based generator: the whole stream is a pure function of
/// (seed, space, index), so streams can be created per coordinate and
/// consumed in parallel without any ordering concerns.
class Stream {
 public:
  Stream(std::uint64_t seed, Space space, std::uint64_t index);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01();

  /// Standard normal (Box-Muller; pairs are cached).
  double normal();

  void fill_normal(std::span<double> out);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Uniform direction on the unit sphere in R^d, d = v.size().
void sample_unit_vector(Stream& stream, std::span<double> v);

/// Maps a uniform u in [0,1) through the inverse CDF of the frequency
/// distribution with density (1 + xi)^-2, i.e. xi = u / (1 - u).
double frequency_from_uniform(double u);

/// Draws a frequency from the distribution with density (1 + xi)^-2.
double sample_frequency(Stream& stream);

}  // namespace fsw::rng
