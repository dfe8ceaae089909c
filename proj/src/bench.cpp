#include "fsw/bench.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <vector>

#include "fsw/embedding.hpp"
#include "fsw/rng.hpp"
#include "fsw/validate.hpp"

namespace fsw {

namespace {

// Keeps the optimizer from discarding the timed work.
volatile double g_bench_sink = 0.0;

double time_embed_ms(const ProbabilityMeasure& mu, const EmbeddingParams& params, int runs) {
  std::vector<double> times;
  times.reserve(runs);
  for (int r = 0; r < runs; ++r) {
    const auto start = std::chrono::steady_clock::now();
    const EmbeddingVector e = embed(mu, params);
    const auto stop = std::chrono::steady_clock::now();
    g_bench_sink = g_bench_sink + e.coords.front() + e.coords.back();
    times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace

std::vector<BenchCell> bench_embed_grid(const std::vector<std::size_t>& m_values,
                                        const std::vector<std::size_t>& n_values, std::size_t d,
                                        int runs, std::uint64_t seed) {
  if (m_values.empty() || n_values.empty() || runs < 1) {
    throw std::invalid_argument("bench_embed_grid: empty grid");
  }
  std::vector<BenchCell> cells;
  cells.reserve(m_values.size() * n_values.size());
  for (std::size_t n : n_values) {
    rng::Stream stream(seed, rng::Space::validation, rng::hash_name("bench"));
    const ProbabilityMeasure mu = random_multiset_in_ball(stream, n, d);
    for (std::size_t m : m_values) {
      const EmbeddingParams params = EmbeddingParams::sample(d, m, seed);
      // one warmup, then timed runs
      g_bench_sink = g_bench_sink + embed(mu, params).coords.front();
      BenchCell cell;
      cell.m = m;
      cell.n = n;
      cell.d = d;
      cell.median_ms = time_embed_ms(mu, params, runs);
      cells.push_back(cell);
    }
  }
  return cells;
}

double median_doubling_ratio(const std::vector<BenchCell>& cells) {
  if (cells.size() < 2) {
    throw std::invalid_argument("median_doubling_ratio: need at least two cells");
  }
  std::vector<double> ratios;
  ratios.reserve(cells.size() - 1);
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    ratios.push_back(cells[i + 1].median_ms / cells[i].median_ms);
  }
  std::sort(ratios.begin(), ratios.end());
  const std::size_t mid = ratios.size() / 2;
  if (ratios.size() % 2 == 1) {
    return ratios[mid];
  }
  return 0.5 * (ratios[mid - 1] + ratios[mid]);
}

}  // namespace fsw
