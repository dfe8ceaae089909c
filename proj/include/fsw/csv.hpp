#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fsw/measure.hpp"

namespace fsw {

/// Parse failure with the 1-based line number it occurred on.
struct CsvError : std::runtime_error {
  CsvError(std::size_t line_number, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
        line(line_number) {}
  std::size_t line;
};

struct CsvMeasure {
  DiscreteMeasure measure;
  bool uniform_weights = false;  // true when the weight column was absent
};

/// Point-cloud CSV: header `x1,...,xd[,weight]`, one row per support point.
/// A missing weight column means uniform weights 1/n.
CsvMeasure read_measure_csv(std::istream& in);
CsvMeasure read_measure_csv_file(const std::string& path);

/// Writes coordinates (and weights, unless uniform) with 17 significant
/// digits so that parse-then-rewrite round-trips exactly.
void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu, bool include_weights);

}  // namespace fsw
