#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "fsw/csv.hpp"
#include "fsw/measure.hpp"
#include "fsw/rng.hpp"
#include "fsw/validate.hpp"
#include "test_util.hpp"

using namespace fsw;
using testutil::row_matrix;

TEST_SUITE("measure") {

TEST_CASE("from_multiset assigns uniform weights with multiplicity") {
  const auto mu = testutil::uniform_1d({2.0, 7.0, 7.0});
  CHECK(mu.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(mu.weight(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  CHECK(mu.points()(0, 1) == 7.0);
  CHECK(mu.points()(0, 2) == 7.0);
}

TEST_CASE("from_multiset on a single point is a unit point mass") {
  Matrix point(2, 1);
  point(0, 0) = 3.0;
  point(1, 0) = -1.0;
  const auto mu = from_multiset(std::move(point));
  CHECK(mu.weight(0) == 1.0);
  CHECK(total_mass(mu) == 1.0);
}

TEST_CASE("from_multiset rejects the empty multiset") {
  CHECK_THROWS_AS(from_multiset(Matrix(1, 0)), std::invalid_argument);
}

TEST_CASE("construction validates weights and coordinates") {
  CHECK_THROWS_AS(DiscreteMeasure(row_matrix({1.0}), {-0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure(row_matrix({1.0}), {std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure(row_matrix({kInfinity}), {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure(row_matrix({1.0}), {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ProbabilityMeasure(row_matrix({1.0}), {0.9}), std::invalid_argument);
  // within the simplex tolerance is fine
  CHECK_NOTHROW(ProbabilityMeasure(row_matrix({1.0, 2.0}), {0.5, 0.5 + 1e-13}));
}

TEST_CASE("total_mass sums weights") {
  const DiscreteMeasure mu(row_matrix({1.0, 2.0}), {0.2, 0.3});
  CHECK(total_mass(mu) == doctest::Approx(0.5).epsilon(1e-15));
  const DiscreteMeasure zero(row_matrix({1.0, 2.0}), {0.0, 0.0});
  CHECK(total_mass(zero) == 0.0);
  const auto prob = testutil::uniform_1d({1.0, 2.0, 3.0});
  CHECK(std::abs(total_mass(prob) - 1.0) <= 1e-12);
}

TEST_CASE("normalize rescales and rejects the zero measure") {
  const DiscreteMeasure mu(row_matrix({1.0, 2.0}), {0.2, 0.2});
  const auto prob = normalize(mu);
  CHECK(prob.weight(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(prob.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(prob.points() == mu.points());

  const auto again = normalize(prob);
  CHECK(again.weights() == prob.weights());

  const DiscreteMeasure zero(row_matrix({1.0}), {0.0});
  CHECK_THROWS_AS(normalize(zero), std::domain_error);
}

TEST_CASE("normalize is invariant under positive weight scaling") {
  rng::Stream stream(7, rng::Space::validation, 0);
  const auto mu = random_measure_in_ball(stream, 5, 2);
  for (double c : {0.25, 3.0, 1e-4}) {
    std::vector<double> scaled = mu.weights();
    for (double& w : scaled) {
      w *= c;
    }
    const auto renorm = normalize(DiscreteMeasure(mu.points(), scaled));
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CHECK(renorm.weight(i) == doctest::Approx(mu.weight(i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("regularize pads sub-threshold mass with an origin atom") {
  Matrix point(2, 1);
  point(0, 0) = 1.0;
  point(1, 0) = 2.0;
  const DiscreteMeasure mu(std::move(point), {0.2});
  const auto reg = regularize(mu, 0.5);
  REQUIRE(reg.size() == 2);
  CHECK(reg.weight(0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(reg.weight(1) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(reg.points()(0, 0) == 1.0);
  CHECK(reg.points()(0, 1) == 0.0);
  CHECK(reg.points()(1, 1) == 0.0);
}

TEST_CASE("regularize of the zero measure is the origin mass") {
  const DiscreteMeasure zero(row_matrix({5.0}), {0.0});
  for (double rho : {0.1, 0.5, 1.0}) {
    const auto reg = regularize(zero, rho);
    CHECK(total_mass(reg) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pseudonorm(reg, kInfinity) == 0.0);
  }
}

TEST_CASE("regularize above threshold is plain normalization") {
  const DiscreteMeasure mu(row_matrix({1.0, 3.0}), {1.5, 0.5});
  const auto reg = regularize(mu, 0.5);
  const auto norm = normalize(mu);
  CHECK(reg.size() == norm.size());
  for (std::size_t i = 0; i < reg.size(); ++i) {
    CHECK(reg.weight(i) == norm.weight(i));
  }
}

TEST_CASE("regularize branches agree at total mass = rho") {
  const double rho = 0.5;
  const DiscreteMeasure mu(row_matrix({2.0}), {rho});
  const auto reg = regularize(mu, rho);  // takes the normalize branch
  // Evaluate the padding branch by hand: weights / rho plus origin mass 0.
  CHECK(reg.weight(0) == doctest::Approx(rho / rho).epsilon(1e-15));
  for (double p : {1.0, 2.0, kInfinity}) {
    CHECK(pseudonorm(reg, p) == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("pseudonorm examples") {
  const auto origin = testutil::uniform_1d({0.0});
  for (double p : {1.0, 2.0, 4.0, kInfinity}) {
    CHECK(pseudonorm(origin, p) == 0.0);
  }

  Matrix points(2, 2);
  points(0, 0) = 3.0;
  points(1, 0) = 4.0;
  points(0, 1) = 0.0;
  points(1, 1) = 0.0;
  const ProbabilityMeasure mu(std::move(points), {0.5, 0.5});
  CHECK(pseudonorm(mu, kInfinity) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(pseudonorm(mu, 2.0) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-14));
}

TEST_CASE("pseudonorm ignores zero-weight atoms at p = inf") {
  Matrix points(1, 2);
  points(0, 0) = 1.0;
  points(0, 1) = 100.0;
  const ProbabilityMeasure mu(std::move(points), {1.0, 0.0});
  CHECK(pseudonorm(mu, kInfinity) == 1.0);
}

TEST_CASE("pseudonorm is nondecreasing in p") {
  rng::Stream stream(11, rng::Space::validation, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = random_measure_in_ball(stream, 6, 3);
    const std::vector<double> ps{1.0, 2.0, 4.0, kInfinity};
    double prev = 0.0;
    for (double p : ps) {
      const double value = pseudonorm(mu, p);
      CHECK(value >= prev - 1e-12);
      prev = value;
    }
  }
}

TEST_CASE("scale_points") {
  rng::Stream stream(13, rng::Space::validation, 2);
  const auto mu = random_measure_in_ball(stream, 4, 2);

  const auto same = scale_points(mu, 1.0);
  CHECK(same.points() == mu.points());

  const auto collapsed = scale_points(mu, 0.0);
  CHECK(pseudonorm(collapsed, kInfinity) == 0.0);
  CHECK(collapsed.weights() == mu.weights());

  for (double alpha : {0.5, 2.0, 7.25}) {
    const auto scaled = scale_points(mu, alpha);
    for (double p : {1.0, 2.0, kInfinity}) {
      CHECK(pseudonorm(scaled, p) ==
            doctest::Approx(alpha * pseudonorm(mu, p)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(scale_points(mu, -1.0), std::invalid_argument);
}

TEST_CASE("CSV parsing handles weights, scientific notation and CRLF") {
  std::istringstream with_weights(
      "x1,x2,weight\r\n1.5e-1,2,0.25\r\n-3E+0,4.0,0.75\r\n");
  const auto parsed = read_measure_csv(with_weights);
  CHECK_FALSE(parsed.uniform_weights);
  CHECK(parsed.measure.dim() == 2);
  CHECK(parsed.measure.point(0)[0] == 0.15);
  CHECK(parsed.measure.point(1)[0] == -3.0);
  CHECK(parsed.measure.weight(1) == 0.75);

  std::istringstream no_weights("x1\n1\n\n2\n");  // blank lines skipped
  const auto uniform = read_measure_csv(no_weights);
  CHECK(uniform.uniform_weights);
  CHECK(uniform.measure.weight(0) == 0.5);
}

TEST_CASE("CSV parse errors carry line numbers") {
  std::istringstream bad_number("x1\n1.0\nbogus\n");
  try {
    read_measure_csv(bad_number);
    FAIL("expected CsvError");
  } catch (const CsvError& error) {
    CHECK(error.line == 3);
  }
  std::istringstream bad_width("x1,x2\n1.0\n");
  CHECK_THROWS_AS(read_measure_csv(bad_width), CsvError);
  std::istringstream negative("x1,weight\n1.0,-0.5\n");
  CHECK_THROWS_AS(read_measure_csv(negative), CsvError);
  std::istringstream empty("x1\n");
  CHECK_THROWS_AS(read_measure_csv(empty), CsvError);
}

TEST_CASE("CSV write-then-read round-trips exactly") {
  rng::Stream stream(19, rng::Space::validation, 4);
  const auto mu = random_measure_in_ball(stream, 5, 3);
  std::ostringstream out;
  write_measure_csv(out, mu, true);
  std::istringstream in(out.str());
  const auto back = read_measure_csv(in);
  CHECK(back.measure.points() == mu.points());
  CHECK(back.measure.weights() == mu.weights());
}

TEST_CASE("permutation leaves mass and pseudonorm unchanged exactly") {
  rng::Stream stream(17, rng::Space::validation, 3);
  const auto mu = random_measure_in_ball(stream, 6, 3);
  Matrix reversed_points(mu.dim(), mu.size());
  std::vector<double> reversed_weights(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const std::size_t j = mu.size() - 1 - i;
    auto dst = reversed_points.col(i);
    auto src = mu.point(j);
    std::copy(src.begin(), src.end(), dst.begin());
    reversed_weights[i] = mu.weight(j);
  }
  const ProbabilityMeasure reversed(std::move(reversed_points), std::move(reversed_weights));
  CHECK(total_mass(reversed) == total_mass(mu));
  for (double p : {1.0, 2.0, kInfinity}) {
    CHECK(pseudonorm(reversed, p) == pseudonorm(mu, p));
  }
}

}  // TEST_SUITE
