#pragma once

#include <cstdint>
#include <vector>

namespace fsw {

struct BenchCell {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  double median_ms = 0.0;
};

/// Wall-times embed() on random unit-ball multisets over the given grid;
/// median of `runs` repetitions per cell.
std::vector<BenchCell> bench_embed_grid(const std::vector<std::size_t>& m_values,
                                        const std::vector<std::size_t>& n_values, std::size_t d,
                                        int runs, std::uint64_t seed);

/// Median of consecutive time ratios along a doubling sequence of cells.
double median_doubling_ratio(const std::vector<BenchCell>& cells);

}  // namespace fsw
