#include <doctest.h>

#include <cmath>
#include <vector>

#include "fsw/embedding.hpp"
#include "fsw/measure.hpp"
#include "fsw/rng.hpp"
#include "fsw/transport.hpp"
#include "fsw/validate.hpp"
#include "test_util.hpp"

using namespace fsw;

TEST_SUITE("validate") {

TEST_CASE("expectation identity passes trivially on identical measures") {
  rng::Stream stream(83, rng::Space::validation, 60);
  const auto mu = random_multiset_in_ball(stream, 8, 3);
  const auto report = check_expectation_identity(mu, mu, 2000, 7);
  CHECK(report.pass);
  CHECK(report.statistic == 0.0);
}

TEST_CASE("expectation identity on random pairs") {
  rng::Stream stream(89, rng::Space::validation, 61);
  const auto mu = random_multiset_in_ball(stream, 10, 3);
  const auto nu = random_multiset_in_ball(stream, 10, 3);
  const auto report = check_expectation_identity(mu, nu, 20000, 11);
  CHECK(report.pass);
  CHECK(report.samples == 20000);
  CHECK(report.std_error > 0.0);
}

TEST_CASE("expectation identity with an exact 1-D target") {
  rng::Stream stream(97, rng::Space::validation, 62);
  const auto mu = random_multiset_in_ball(stream, 6, 1);
  const auto nu = random_multiset_in_ball(stream, 4, 1);
  const auto report = check_expectation_identity(mu, nu, 20000, 13);
  CHECK(report.pass);
}

TEST_CASE("fixed-direction expectation matches the projected distance") {
  rng::Stream stream(101, rng::Space::validation, 63);
  const auto mu = random_multiset_in_ball(stream, 8, 3);
  const auto nu = random_multiset_in_ball(stream, 8, 3);
  std::vector<double> v(3);
  rng::sample_unit_vector(stream, v);
  const auto report = check_expectation_identity_fixed_direction(mu, nu, v, 20000, 17);
  CHECK(report.pass);
}

TEST_CASE("variance bound holds and scales with the radius") {
  rng::Stream stream(103, rng::Space::validation, 64);
  const auto mu = random_multiset_in_ball(stream, 10, 3);
  const auto nu = random_multiset_in_ball(stream, 10, 3);
  const auto report = check_variance_bound(mu, nu, 20000, 19);
  CHECK(report.pass);
  CHECK(report.bound <= 13.0 * (1.0 + 5.0 / std::sqrt(20000.0)) + 1e-12);

  const auto scaled = check_variance_bound(ProbabilityMeasure(scale_points(mu, 2.0)),
                                           ProbabilityMeasure(scale_points(nu, 2.0)), 20000, 19);
  CHECK(scaled.pass);
  CHECK(scaled.bound == doctest::Approx(4.0 * report.bound).epsilon(1e-9));
}

TEST_CASE("boundedness check passes at the analytic bound") {
  const auto report = check_boundedness(100, 100, 23);
  CHECK(report.pass);
  CHECK(report.statistic <= 3.0);
  CHECK(report.statistic > 2.0);  // the stress probes reach the empirical sup
}

TEST_CASE("boundedness check is falsifiable below the empirical sup") {
  const auto report = check_boundedness(100, 100, 23, 2.0);
  CHECK_FALSE(report.pass);
}

TEST_CASE("separation experiment separates the counterexample pair") {
  const auto rows = separation_experiment(3, 5, 200, {1, 100, 4096}, 100, 29);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].m == 1);
  CHECK(rows[0].separated_fraction >= 0.99);
  CHECK(rows[0].sw_target > 0.0);
  // matched seeds: mean |estimate - SW| shrinks as m grows
  CHECK(rows[2].mean_abs_error < rows[1].mean_abs_error);
  CHECK_THROWS_AS(separation_experiment(3, 5, 5, {1}, 10, 1), std::invalid_argument);
}

TEST_CASE("identical sizes give distance zero") {
  const auto [x1, x2] = pswe_counterexample_pair(3, 5, 200);
  const auto params = EmbeddingParams::sample(3, 16, 3);
  const auto e1 = embed(x1, params);
  CHECK(embedding_distance(e1, e1) == 0.0);
}

TEST_CASE("distortion scan") {
  rng::Stream stream(107, rng::Space::validation, 65);
  const auto params = EmbeddingParams::sample(2, 21, 31);

  std::vector<std::pair<ProbabilityMeasure, ProbabilityMeasure>> single;
  single.emplace_back(random_multiset_in_ball(stream, 5, 2),
                      random_multiset_in_ball(stream, 5, 2));
  const auto one = distortion_scan(single, params);
  CHECK(one.c_hat == one.C_hat);

  // 100 random 5-point pairs at the multiset injectivity dimension m = 21:
  // no collapse observed
  std::vector<std::pair<ProbabilityMeasure, ProbabilityMeasure>> pairs = single;
  for (int i = 0; i < 99; ++i) {
    pairs.emplace_back(random_multiset_in_ball(stream, 5, 2),
                       random_multiset_in_ball(stream, 5, 2));
  }
  const auto scan = distortion_scan(pairs, params);
  CHECK(scan.c_hat > 0.0);
  CHECK(scan.C_hat >= scan.c_hat);
  CHECK(scan.distortion() >= 1.0);

  // appending a scaled copy of every pair leaves the ratio range unchanged
  auto doubled = pairs;
  for (const auto& [mu, nu] : pairs) {
    doubled.emplace_back(scale_points(mu, 2.0), scale_points(nu, 2.0));
  }
  const auto scan2 = distortion_scan(doubled, params);
  CHECK(scan2.c_hat == doctest::Approx(scan.c_hat).epsilon(1e-10));
  CHECK(scan2.C_hat == doctest::Approx(scan.C_hat).epsilon(1e-10));

  std::vector<std::pair<ProbabilityMeasure, ProbabilityMeasure>> degenerate;
  degenerate.emplace_back(single[0].first, single[0].first);
  CHECK_THROWS_AS(distortion_scan(degenerate, params), std::domain_error);
}

TEST_CASE("non-blip ratios decay") {
  const auto params = EmbeddingParams::sample(1, 16, 37);
  const std::vector<double> x{1.0};
  const auto ratios = non_blip_demo(x, 2.0, 20, params);
  REQUIRE(ratios.size() == 19);
  CHECK(ratios.back() < 0.1 * ratios.front());

  // the ratio sequence is invariant under scaling x (bitwise for powers of 2)
  const std::vector<double> x2{2.0};
  const auto scaled = non_blip_demo(x2, 2.0, 20, params);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    CHECK(scaled[i] == doctest::Approx(ratios[i]).epsilon(1e-12));
  }

  const std::vector<double> zero{0.0};
  CHECK_THROWS_AS(non_blip_demo(zero, 2.0, 20, params), std::invalid_argument);
}

TEST_CASE("non-blip demo with the analytic lower bound in d > 1") {
  const auto params = EmbeddingParams::sample(2, 16, 41);
  const std::vector<double> x{0.6, -0.3};
  const auto ratios = non_blip_demo(x, 2.0, 16, params);
  CHECK(ratios.back() < ratios.front());
}

TEST_CASE("gradient suite passes") {
  const auto report = gradient_suite(10, 43);
  CHECK(report.pass);
  CHECK(report.statistic <= 1e-5);
}

TEST_CASE("suite runner") {
  SuiteOptions options;
  options.seed = 1;
  options.only = {"oracle_1d_lp", "oracle_1d_sort", "non_blip_decay"};
  const auto reports = run_suite(options);
  REQUIRE(reports.size() == 3);
  for (const auto& report : reports) {
    CHECK(report.pass);
  }

  // empty selection is an empty report
  options.only = {"does_not_exist"};
  CHECK(run_suite(options).empty());

  // bit-exact reproducibility of the serialized reports
  options.only = {"oracle_1d_lp"};
  const auto a = reports_to_json(run_suite(options)).dump();
  const auto b = reports_to_json(run_suite(options)).dump();
  CHECK(a == b);
}

}  // TEST_SUITE
