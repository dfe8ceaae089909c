#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsw/embedding.hpp"
#include "fsw/measure.hpp"
#include "fsw/rng.hpp"

namespace fsw {

/// Outcome of one statistical or structural check. `pass` holds exactly when
/// the check's stated inequality holds; the direction of that inequality is
/// the check's own (most compare statistic <= bound, separation compares >=).
struct CheckReport {
  std::string name;
  double statistic = 0.0;
  double bound = 0.0;
  double std_error = 0.0;  // 0 for deterministic checks
  bool pass = false;
  std::int64_t samples = 0;

  nlohmann::json to_json() const;
};

/// Uniform multiset of n points drawn uniformly from the unit ball of R^d.
ProbabilityMeasure random_multiset_in_ball(rng::Stream& stream, std::size_t n, std::size_t d);

/// Weighted probability measure: unit-ball points, Dirichlet(1) weights.
ProbabilityMeasure random_measure_in_ball(rng::Stream& stream, std::size_t n, std::size_t d);

/// Mean of Delta^2(mu,nu; v,xi) over i.i.d. (v, xi) draws against SW^2.
/// The target is exact in d = 1; otherwise it is estimated by MC slicing with
/// the direction count grown until its standard error drops below a third of
/// the Delta^2 side's. Passes within 3 combined standard errors.
CheckReport check_expectation_identity(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                       std::int64_t samples, std::uint64_t seed);

/// Same identity conditioned on a fixed direction: xi-only sampling against
/// the exact squared 1-D distance of the projections.
CheckReport check_expectation_identity_fixed_direction(const ProbabilityMeasure& mu,
                                                       const ProbabilityMeasure& nu,
                                                       std::span<const double> v,
                                                       std::int64_t samples, std::uint64_t seed);

/// Empirical std of Delta^2 against 13 R^2 (1 + 5 / sqrt(samples)), R being
/// the larger pseudonorm(., inf) of the pair.
CheckReport check_variance_bound(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                 std::int64_t samples, std::uint64_t seed);

/// Random unit-ball measures and (v, xi) draws, plus deterministic stress
/// probes along each measure's farthest support point; passes iff no sample
/// exceeds bound * pseudonorm(mu, inf). The default bound 3 is the analytic
/// one.
CheckReport check_boundedness(std::int64_t measure_count, std::int64_t samples_per,
                              std::uint64_t seed, double bound = 3.0);

struct SeparationRow {
  std::size_t m = 0;
  double mean_distance = 0.0;
  double sw_target = 0.0;
  double mean_abs_error = 0.0;      // mean |distance - sw_target| over seeds
  double separated_fraction = 0.0;  // fraction of seeds with distance > 1e-6
};

/// Embedding distances between the PSWE counterexample pair across
/// independent parameter draws, per embedding dimension, with the collinear
/// closed form as the target.
std::vector<SeparationRow> separation_experiment(std::size_t d, std::size_t n1, std::size_t n2,
                                                 const std::vector<std::size_t>& m_list,
                                                 std::size_t seeds, std::uint64_t seed);

struct DistortionScan {
  double c_hat = 0.0;
  double C_hat = 0.0;
  double distortion() const { return C_hat / c_hat; }
};

/// Min and max of ||E(mu) - E(nu)|| / W_2(mu, nu) over the given pairs, with
/// W_2 from the exact solver. A pair at distance zero is an error.
DistortionScan distortion_scan(
    const std::vector<std::pair<ProbabilityMeasure, ProbabilityMeasure>>& pairs,
    const EmbeddingParams& params);

/// The lower-Lipschitz failure construction: mu(theta) = (1-theta) delta_0 +
/// theta delta_x with theta_t = 2^-t, compared against the point-scaled
/// mu~_t = (theta_t / theta_{t-1})^(1/p) . mu(theta_{t-1}). Returns the
/// ratios r_t = ||E(mu(theta_t)) - E(mu~_t)|| / W_p for t = 2..steps; W_p is
/// exact (via quantiles) when d = 1 and the analytic lower bound
/// (theta_t / 2)^(1/p) ||x|| otherwise. The sequence decays toward 0.
std::vector<double> non_blip_demo(std::span<const double> x, double p, std::size_t steps,
                                  const EmbeddingParams& params);

/// Analytic gradients against central finite differences (step 1e-6) on
/// random generic-position measures; also exercises the tie error path.
/// Passes if the max relative error is <= 1e-5 (absolute floor 1e-8).
CheckReport gradient_suite(std::int64_t instances, std::uint64_t seed);

struct SuiteOptions {
  std::uint64_t seed = 1;
  double boundedness_bound = 3.0;
  std::vector<std::string> only;  // empty = all checks
};

/// The default desk-scale suite; every check derives its stream from
/// (suite seed, check name), so reruns reproduce statistics bit-exactly.
std::vector<CheckReport> run_suite(const SuiteOptions& options);

nlohmann::json reports_to_json(const std::vector<CheckReport>& reports);

}  // namespace fsw
