#include "fsw/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fsw::rng {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a offset basis
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

Stream::Stream(std::uint64_t seed, Space space, std::uint64_t index) {
  state_ = mix64(mix64(seed + kGolden) ^ mix64(static_cast<std::uint64_t>(space) * kGolden) ^
                 mix64(index + kGolden));
}

std::uint64_t Stream::next_u64() {
  state_ += kGolden;  // SplitMix64
  return mix64(state_);
}

double Stream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 shifted into (0, 1] so the log is finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

void Stream::fill_normal(std::span<double> out) {
  for (double& x : out) {
    x = normal();
  }
}

void sample_unit_vector(Stream& stream, std::span<double> v) {
  if (v.empty()) {
    throw std::invalid_argument("sample_unit_vector: dimension must be positive");
  }
  while (true) {
    stream.fill_normal(v);
    double norm_sq = 0.0;
    for (double x : v) {
      norm_sq += x * x;
    }
    const double norm = std::sqrt(norm_sq);
    if (norm > 1e-150) {
      for (double& x : v) {
        x /= norm;
      }
      return;
    }
    // astronomically unlikely; draw again
  }
}

double frequency_from_uniform(double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::invalid_argument("frequency_from_uniform: u must lie in [0, 1)");
  }
  return u / (1.0 - u);
}

double sample_frequency(Stream& stream) {
  return frequency_from_uniform(stream.uniform01());
}

}  // namespace fsw::rng
