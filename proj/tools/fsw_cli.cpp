#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsw/bench.hpp"
#include "fsw/csv.hpp"
#include "fsw/embedding.hpp"
#include "fsw/measure.hpp"
#include "fsw/quantile.hpp"
#include "fsw/transport.hpp"
#include "fsw/validate.hpp"

namespace {

// Exit contract for scripting: 0 ok, 1 validation fail, 2 parse, 3 shape,
// 4 oversize.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParse = 2;
constexpr int kExitShape = 3;
constexpr int kExitSize = 4;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed.has_value()) {
    return *seed;
  }
  std::random_device entropy;
  const std::uint64_t drawn =
      (static_cast<std::uint64_t>(entropy()) << 32) ^ static_cast<std::uint64_t>(entropy());
  std::fprintf(stderr, "seed: %" PRIu64 "\n", drawn);
  return drawn;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file '" + out_path + "'");
  }
  out << text;
}

fsw::ProbabilityMeasure as_probability(const fsw::CsvMeasure& csv, const std::string& path) {
  try {
    return fsw::ProbabilityMeasure(csv.measure);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("'" + path +
                                "': weights do not sum to 1; normalize them or use a mass-* "
                                "variant");
  }
}

struct EmbedOptions {
  std::vector<std::string> inputs;
  std::optional<std::uint64_t> seed;
  std::size_t m = 0;  // 0 = default 2 N d + 1
  std::string variant = "basic";
  double rho = fsw::kDefaultRho;
  std::string out;
};

int run_embed(const EmbedOptions& options) {
  const auto variant = fsw::variant_from_string(options.variant);
  std::vector<fsw::CsvMeasure> parsed;
  parsed.reserve(options.inputs.size());
  for (const auto& path : options.inputs) {
    parsed.push_back(fsw::read_measure_csv_file(path));
  }

  const std::size_t d = parsed.front().measure.dim();
  std::size_t max_n = 0;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].measure.dim() != d) {
      throw std::invalid_argument("'" + options.inputs[i] + "': dimension " +
                                  std::to_string(parsed[i].measure.dim()) +
                                  " does not match the first input's " + std::to_string(d));
    }
    max_n = std::max(max_n, parsed[i].measure.size());
  }

  const std::uint64_t seed = resolve_seed(options.seed);
  const std::size_t m = options.m > 0 ? options.m : fsw::injectivity_dim_multisets(max_n, d);
  const auto params = fsw::EmbeddingParams::sample(d, m, seed);

  auto embed_one = [&](const fsw::CsvMeasure& csv, const std::string& path) {
    nlohmann::json entry;
    entry["file"] = path;
    entry["weights"] = csv.uniform_weights ? "uniform" : "explicit";
    if (variant == fsw::EmbeddingVariant::basic) {
      entry["coords"] = fsw::embed(as_probability(csv, path), params).coords;
    } else {
      entry["coords"] = fsw::embed_measure(csv.measure, params, options.rho, variant).coords;
    }
    return entry;
  };

  nlohmann::json output;
  output["seed"] = seed;
  output["d"] = d;
  output["m"] = m;
  output["variant"] = fsw::to_string(variant);
  output["rho"] = options.rho;
  if (options.inputs.size() == 1) {
    output.update(embed_one(parsed.front(), options.inputs.front()));
  } else {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      entries.push_back(embed_one(parsed[i], options.inputs[i]));
    }
    output["embeddings"] = std::move(entries);
  }
  write_output(output.dump(2) + "\n", options.out);
  return kExitOk;
}

struct DistanceOptions {
  std::string input_a;
  std::string input_b;
  double p = 2.0;
  std::string plan_path;
};

int run_distance(const DistanceOptions& options) {
  const auto a = fsw::read_measure_csv_file(options.input_a);
  const auto b = fsw::read_measure_csv_file(options.input_b);
  const auto result = fsw::wasserstein_exact(as_probability(a, options.input_a),
                                             as_probability(b, options.input_b), options.p);
  std::printf("%.12g\n", result.cost);
  if (!options.plan_path.empty()) {
    write_output(fsw::plan_to_json(result).dump(2) + "\n", options.plan_path);
  }
  return kExitOk;
}

struct SwOptions {
  std::string input_a;
  std::string input_b;
  std::optional<std::uint64_t> seed;
  std::int64_t directions = 1000;
  std::size_t m = 0;
  bool exact_1d = false;
};

int run_sw(const SwOptions& options) {
  const auto a = as_probability(fsw::read_measure_csv_file(options.input_a), options.input_a);
  const auto b = as_probability(fsw::read_measure_csv_file(options.input_b), options.input_b);
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("inputs have different dimensions");
  }
  if (options.exact_1d) {
    if (a.dim() != 1) {
      throw std::invalid_argument("--exact-1d requires one-dimensional inputs");
    }
    const double w = fsw::quantile_lp_distance(fsw::quantile(a), fsw::quantile(b), 2.0);
    std::printf("%.12g\n", w);
    return kExitOk;
  }
  if (options.m > 0) {
    const std::uint64_t seed = resolve_seed(options.seed);
    const auto params = fsw::EmbeddingParams::sample(a.dim(), options.m, seed);
    const double distance = fsw::embedding_distance(fsw::embed(a, params), fsw::embed(b, params));
    std::printf("%.12g\n", distance);
    return kExitOk;
  }
  const std::uint64_t seed = resolve_seed(options.seed);
  const auto estimate = fsw::sliced_wasserstein_mc(a, b, options.directions, seed);
  std::printf("%.12g %.12g\n", estimate.estimate, estimate.std_error);
  return kExitOk;
}

struct ValidateOptions {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> only;
  double boundedness_bound = 3.0;
};

int run_validate(const ValidateOptions& options) {
  fsw::SuiteOptions suite;
  suite.seed = options.seed.value_or(1);
  suite.boundedness_bound = options.boundedness_bound;
  suite.only = options.only;

  const auto reports = fsw::run_suite(suite);
  std::printf("%-30s %14s %14s %12s %10s  %s\n", "check", "statistic", "bound", "std_error",
              "samples", "result");
  std::vector<std::string> failed;
  for (const auto& report : reports) {
    std::printf("%-30s %14.6g %14.6g %12.4g %10lld  %s\n", report.name.c_str(), report.statistic,
                report.bound, report.std_error, static_cast<long long>(report.samples),
                report.pass ? "pass" : "FAIL");
    if (!report.pass) {
      failed.push_back(report.name);
    }
  }
  if (!options.out.empty()) {
    write_output(fsw::reports_to_json(reports).dump(2) + "\n", options.out);
  }
  if (!failed.empty()) {
    std::fprintf(stderr, "failed checks:");
    for (const auto& name : failed) {
      std::fprintf(stderr, " %s", name.c_str());
    }
    std::fprintf(stderr, "\n");
    return kExitValidation;
  }
  return kExitOk;
}

struct BenchOptions {
  std::size_t d = 3;
  int runs = 5;
  std::optional<std::uint64_t> seed;
};

void print_cells(const std::vector<fsw::BenchCell>& cells) {
  std::printf("%8s %8s %12s %10s\n", "m", "N", "median_ms", "ratio");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i == 0) {
      std::printf("%8zu %8zu %12.3f %10s\n", cells[i].m, cells[i].n, cells[i].median_ms, "-");
    } else {
      std::printf("%8zu %8zu %12.3f %10.2f\n", cells[i].m, cells[i].n, cells[i].median_ms,
                  cells[i].median_ms / cells[i - 1].median_ms);
    }
  }
}

int run_bench(const BenchOptions& options) {
  const std::uint64_t seed = options.seed.value_or(1);
  const std::vector<std::size_t> m_grid{256, 512, 1024, 2048, 4096};
  const std::vector<std::size_t> n_grid{128, 256, 512, 1024, 2048};

  const auto m_cells = fsw::bench_embed_grid(m_grid, {512}, options.d, options.runs, seed);
  std::printf("m-scaling at N = 512, d = %zu (median of %d runs)\n", options.d, options.runs);
  print_cells(m_cells);
  std::printf("median m-doubling ratio: %.2f\n\n", fsw::median_doubling_ratio(m_cells));

  const auto n_cells = fsw::bench_embed_grid({512}, n_grid, options.d, options.runs, seed);
  std::printf("N-scaling at m = 512, d = %zu (median of %d runs)\n", options.d, options.runs);
  print_cells(n_cells);
  std::printf("median N-doubling ratio: %.2f\n", fsw::median_doubling_ratio(n_cells));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier sliced-Wasserstein embeddings and Wasserstein distances for point "
               "clouds and weighted measures"};
  app.require_subcommand(1);

  EmbedOptions embed_options;
  auto* embed_cmd = app.add_subcommand("embed", "Embed point-cloud CSV files into R^m");
  embed_cmd->add_option("inputs", embed_options.inputs, "input CSV files")
      ->required()
      ->expected(-1);
  embed_cmd->add_option("--seed", embed_options.seed, "RNG seed (drawn and printed if omitted)");
  embed_cmd->add_option("--m", embed_options.m, "embedding dimension (default 2Nd+1)");
  embed_cmd
      ->add_option("--variant", embed_options.variant,
                   "basic | mass-plain | mass-reg | mass-homog")
      ->default_val("basic");
  embed_cmd->add_option("--rho", embed_options.rho, "regularization threshold")
      ->check(CLI::PositiveNumber);
  embed_cmd->add_option("--out", embed_options.out, "output JSON path (default stdout)");

  DistanceOptions distance_options;
  auto* distance_cmd =
      app.add_subcommand("distance", "Exact p-Wasserstein distance (supports up to 64 points)");
  distance_cmd->add_option("a", distance_options.input_a, "first CSV")->required();
  distance_cmd->add_option("b", distance_options.input_b, "second CSV")->required();
  distance_cmd->add_option("--p", distance_options.p, "order p in [1, inf)")
      ->check(CLI::Range(1.0, 1e12));
  distance_cmd->add_option("--plan", distance_options.plan_path, "write the optimal plan JSON");

  SwOptions sw_options;
  auto* sw_cmd = app.add_subcommand(
      "sw", "Sliced-Wasserstein estimate: Monte-Carlo (--L), FSW (--m), or exact 1-D");
  sw_cmd->add_option("a", sw_options.input_a, "first CSV")->required();
  sw_cmd->add_option("b", sw_options.input_b, "second CSV")->required();
  sw_cmd->add_option("--seed", sw_options.seed, "RNG seed (drawn and printed if omitted)");
  sw_cmd->add_option("--L", sw_options.directions, "Monte-Carlo direction count")
      ->check(CLI::Range(static_cast<std::int64_t>(2), static_cast<std::int64_t>(1) << 31));
  sw_cmd->add_option("--m", sw_options.m, "use the FSW embedding distance with m coordinates");
  sw_cmd->add_flag("--exact-1d", sw_options.exact_1d, "exact quantile-integral W_2 (d = 1 only)");

  ValidateOptions validate_options;
  auto* validate_cmd = app.add_subcommand("validate", "Run the statistical validation suite");
  validate_cmd->add_option("--seed", validate_options.seed, "suite seed (default 1)");
  validate_cmd->add_option("--out", validate_options.out, "write the report JSON");
  validate_cmd->add_option("--only", validate_options.only,
                           "run only the named checks (repeatable)");
  validate_cmd->add_option("--boundedness-bound", validate_options.boundedness_bound,
                           "override the boundedness constant (default 3)");

  BenchOptions bench_options;
  auto* bench_cmd = app.add_subcommand("bench", "Time embed() over an (m, N) grid");
  bench_cmd->add_option("--d", bench_options.d, "ambient dimension")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--runs", bench_options.runs, "repetitions per cell")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench_options.seed, "measure/params seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (embed_cmd->parsed()) {
      return run_embed(embed_options);
    }
    if (distance_cmd->parsed()) {
      return run_distance(distance_options);
    }
    if (sw_cmd->parsed()) {
      return run_sw(sw_options);
    }
    if (validate_cmd->parsed()) {
      return run_validate(validate_options);
    }
    if (bench_cmd->parsed()) {
      return run_bench(bench_options);
    }
  } catch (const fsw::CsvError& error) {
    std::fprintf(stderr, "parse error: %s\n", error.what());
    return kExitParse;
  } catch (const fsw::SupportSizeError& error) {
    std::fprintf(stderr, "%s\n", error.what());
    return kExitSize;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return kExitShape;
  }
  return kExitOk;
}
