#include "fsw/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace fsw {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

double parse_double(const std::string& token, std::size_t line_number) {
  if (token.empty()) {
    throw CsvError(line_number, "empty numeric field");
  }
  const char* begin = token.data();
  const char* end = begin + token.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw CsvError(line_number, "cannot parse number '" + token + "'");
  }
  if (!std::isfinite(value)) {
    throw CsvError(line_number, "non-finite value '" + token + "'");
  }
  return value;
}

}  // namespace

CsvMeasure read_measure_csv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;

  // Header: x1,...,xd with an optional trailing weight column.
  if (!std::getline(in, line)) {
    throw CsvError(1, "missing header row");
  }
  ++line_number;
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  const auto header = split_fields(line);
  bool has_weight = false;
  std::size_t d = header.size();
  if (!header.empty() && header.back() == "weight") {
    has_weight = true;
    d = header.size() - 1;
  }
  if (d == 0) {
    throw CsvError(line_number, "no coordinate columns");
  }
  for (std::size_t a = 0; a < d; ++a) {
    const std::string expected = "x" + std::to_string(a + 1);
    if (header[a] != expected) {
      throw CsvError(line_number, "expected header column '" + expected + "', found '" +
                                      header[a] + "'");
    }
  }

  std::vector<std::vector<double>> columns;
  std::vector<double> weights;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_fields(line);
    const std::size_t expected = d + (has_weight ? 1 : 0);
    if (fields.size() != expected) {
      throw CsvError(line_number, "expected " + std::to_string(expected) + " fields, found " +
                                      std::to_string(fields.size()));
    }
    std::vector<double> point(d);
    for (std::size_t a = 0; a < d; ++a) {
      point[a] = parse_double(fields[a], line_number);
    }
    columns.push_back(std::move(point));
    if (has_weight) {
      const double w = parse_double(fields[d], line_number);
      if (w < 0.0) {
        throw CsvError(line_number, "negative weight");
      }
      weights.push_back(w);
    }
  }
  if (columns.empty()) {
    throw CsvError(line_number + 1, "no support points; the empty multiset is not a measure");
  }

  Matrix points = Matrix::from_columns(columns);
  if (!has_weight) {
    weights.assign(columns.size(), 1.0 / static_cast<double>(columns.size()));
  }
  return {DiscreteMeasure(std::move(points), std::move(weights)), !has_weight};
}

CsvMeasure read_measure_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CsvError(0, "cannot open '" + path + "'");
  }
  return read_measure_csv(in);
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu, bool include_weights) {
  char buffer[64];
  for (std::size_t a = 0; a < mu.dim(); ++a) {
    out << (a == 0 ? "x" : ",x") << (a + 1);
  }
  if (include_weights) {
    out << ",weight";
  }
  out << '\n';
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto x = mu.point(i);
    for (std::size_t a = 0; a < mu.dim(); ++a) {
      std::snprintf(buffer, sizeof buffer, "%.17g", x[a]);
      out << (a == 0 ? "" : ",") << buffer;
    }
    if (include_weights) {
      std::snprintf(buffer, sizeof buffer, "%.17g", mu.weight(i));
      out << ',' << buffer;
    }
    out << '\n';
  }
}

}  // namespace fsw
