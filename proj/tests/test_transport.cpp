#include <doctest.h>

#include <cmath>
#include <vector>

#include "fsw/measure.hpp"
#include "fsw/quantile.hpp"
#include "fsw/rng.hpp"
#include "fsw/transport.hpp"
#include "fsw/validate.hpp"
#include "test_util.hpp"

using namespace fsw;
using testutil::uniform_1d;

namespace {

void check_plan(const ExactDistance& result, const ProbabilityMeasure& mu,
                const ProbabilityMeasure& nu) {
  const auto rows = result.plan.row_sums();
  const auto cols = result.plan.col_sums();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CHECK(std::abs(rows[i] - mu.weight(i)) <= 1e-9);
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    CHECK(std::abs(cols[j] - nu.weight(j)) <= 1e-9);
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      CHECK(result.plan.at(i, j) >= 0.0);
    }
  }
  CHECK(result.max_dual_violation >= -1e-9);
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("identical measures are at distance zero") {
  rng::Stream stream(41, rng::Space::validation, 40);
  const auto mu = random_measure_in_ball(stream, 6, 3);
  const auto result = wasserstein_exact(mu, mu, 2.0);
  CHECK(result.cost == doctest::Approx(0.0).epsilon(1e-12));
  check_plan(result, mu, mu);
}

TEST_CASE("pure translation moves every atom by the shift") {
  Matrix a(2, 2);
  a(0, 0) = 0.0;
  a(1, 0) = 0.0;
  a(0, 1) = 1.0;
  a(1, 1) = 0.0;
  Matrix b(2, 2);
  b(0, 0) = 0.0;
  b(1, 0) = 1.0;
  b(0, 1) = 1.0;
  b(1, 1) = 1.0;
  const auto mu = from_multiset(std::move(a));
  const auto nu = from_multiset(std::move(b));
  const auto result = wasserstein_exact(mu, nu, 2.0);
  CHECK(result.cost == doctest::Approx(1.0).epsilon(1e-12));
  check_plan(result, mu, nu);
}

TEST_CASE("1-D instances agree with the quantile integral") {
  rng::Stream stream(43, rng::Space::validation, 41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = random_measure_in_ball(stream, 1 + stream.next_u64() % 8, 1);
    const auto nu = random_measure_in_ball(stream, 1 + stream.next_u64() % 8, 1);
    const auto result = wasserstein_exact(mu, nu, 2.0);
    const double oracle = quantile_lp_distance(quantile(mu), quantile(nu), 2.0);
    CHECK(std::abs(result.cost - oracle) <= 1e-9);
    check_plan(result, mu, nu);
  }
}

TEST_CASE("uniform instances agree with assignment enumeration") {
  rng::Stream stream(47, rng::Space::validation, 42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mu = random_multiset_in_ball(stream, 4, 2);
    const auto nu = random_multiset_in_ball(stream, 4, 2);
    for (double p : {1.0, 2.0, 3.0}) {
      const double via_lp = wasserstein_exact(mu, nu, p).cost;
      const double via_enum = testutil::wasserstein_bruteforce_uniform(mu, nu, p);
      CHECK(via_lp == doctest::Approx(via_enum).epsilon(1e-9));
    }
  }
}

TEST_CASE("zero-weight atoms are dropped but keep their plan slots") {
  Matrix a(1, 3);
  a(0, 0) = 0.0;
  a(0, 1) = 99.0;  // zero-weight atom far away
  a(0, 2) = 1.0;
  const ProbabilityMeasure mu(std::move(a), {0.5, 0.0, 0.5});
  const auto nu = uniform_1d({0.25, 0.75});
  const auto result = wasserstein_exact(mu, nu, 2.0);
  CHECK(result.cost == doctest::Approx(0.25).epsilon(1e-12));
  for (std::size_t j = 0; j < nu.size(); ++j) {
    CHECK(result.plan.at(1, j) == 0.0);
  }
  check_plan(result, mu, nu);
}

TEST_CASE("triangle inequality on random triples") {
  rng::Stream stream(53, rng::Space::validation, 43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_measure_in_ball(stream, 5, 2);
    const auto b = random_measure_in_ball(stream, 4, 2);
    const auto c = random_measure_in_ball(stream, 6, 2);
    const double ab = wasserstein_exact(a, b, 2.0).cost;
    const double bc = wasserstein_exact(b, c, 2.0).cost;
    const double ac = wasserstein_exact(a, c, 2.0).cost;
    CHECK(ac <= ab + bc + 1e-8);
  }
}

TEST_CASE("rigid rotation of both point sets preserves the distance") {
  rng::Stream stream(59, rng::Space::validation, 44);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = random_measure_in_ball(stream, 5, 3);
    const auto nu = random_measure_in_ball(stream, 5, 3);
    const Matrix rotation = testutil::random_rotation(stream, 3);
    const auto mu_rot = ProbabilityMeasure(testutil::rotate(mu, rotation));
    const auto nu_rot = ProbabilityMeasure(testutil::rotate(nu, rotation));
    const double before = wasserstein_exact(mu, nu, 2.0).cost;
    const double after = wasserstein_exact(mu_rot, nu_rot, 2.0).cost;
    CHECK(std::abs(before - after) <= 1e-9);
  }
}

TEST_CASE("equal-size uniform 1-D multisets match the sort formula") {
  rng::Stream stream(61, rng::Space::validation, 45);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + stream.next_u64() % 6;
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = 2.0 * stream.uniform01() - 1.0;
      ys[i] = 2.0 * stream.uniform01() - 1.0;
    }
    const double via_lp = wasserstein_exact(uniform_1d(xs), uniform_1d(ys), 2.0).cost;
    CHECK(std::abs(via_lp - wasserstein_sorted(xs, ys)) <= 1e-9);
  }
}

TEST_CASE("oversize supports are rejected with a pointer to sliced estimation") {
  Matrix points(1, 65);
  for (std::size_t i = 0; i < 65; ++i) {
    points(0, i) = static_cast<double>(i);
  }
  const auto big = from_multiset(std::move(points));
  const auto small = uniform_1d({0.0});
  CHECK_THROWS_AS(wasserstein_exact(big, small, 2.0), SupportSizeError);
  CHECK_THROWS_AS(wasserstein_exact(small, big, 2.0), SupportSizeError);
}

TEST_CASE("wasserstein_exact rejects p outside [1, inf)") {
  const auto mu = uniform_1d({0.0});
  CHECK_THROWS_AS(wasserstein_exact(mu, mu, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(wasserstein_exact(mu, mu, kInfinity), std::invalid_argument);
}

TEST_CASE("sliced MC of identical measures is exactly zero") {
  rng::Stream stream(67, rng::Space::validation, 46);
  const auto mu = random_measure_in_ball(stream, 6, 3);
  const auto est = sliced_wasserstein_mc(mu, mu, 64, 1);
  CHECK(est.estimate == 0.0);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("sliced MC in 1-D equals the exact distance with no variance") {
  rng::Stream stream(71, rng::Space::validation, 47);
  const auto mu = random_measure_in_ball(stream, 5, 1);
  const auto nu = random_measure_in_ball(stream, 4, 1);
  const double exact = quantile_lp_distance(quantile(mu), quantile(nu), 2.0);
  const auto est = sliced_wasserstein_mc(mu, nu, 32, 9);
  CHECK(est.estimate == doctest::Approx(exact).epsilon(1e-12));
  CHECK(est.std_error <= 1e-12);
}

TEST_CASE("sliced MC requires at least two directions") {
  const auto mu = uniform_1d({0.0});
  CHECK_THROWS_AS(sliced_wasserstein_mc(mu, mu, 1, 0), std::invalid_argument);
}

TEST_CASE("sliced MC is value-identical for any thread count") {
  rng::Stream stream(73, rng::Space::validation, 48);
  const auto mu = random_measure_in_ball(stream, 5, 3);
  const auto nu = random_measure_in_ball(stream, 6, 3);
  setenv("FSW_THREADS", "1", 1);
  const auto serial = sliced_wasserstein_mc(mu, nu, 10000, 5);
  setenv("FSW_THREADS", "7", 1);
  const auto threaded = sliced_wasserstein_mc(mu, nu, 10000, 5);
  unsetenv("FSW_THREADS");
  CHECK(serial.mean_sq == threaded.mean_sq);
  CHECK(serial.std_error == threaded.std_error);
}

TEST_CASE("SW is below W which is below the pseudonorm sum") {
  rng::Stream stream(79, rng::Space::validation, 49);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = random_measure_in_ball(stream, 5, 3);
    const auto nu = random_measure_in_ball(stream, 6, 3);
    const double exact = wasserstein_exact(mu, nu, 2.0).cost;
    const auto est = sliced_wasserstein_mc(mu, nu, 4096, 31);
    CHECK(est.mean_sq <= exact * exact + 3.0 * est.std_error);
    CHECK(exact <= pseudonorm(mu, kInfinity) + pseudonorm(nu, kInfinity) + 1e-12);
  }
}

TEST_CASE("collinear closed form on the counterexample pair") {
  const auto [x1, x2] = pswe_counterexample_pair(3, 2, 3);
  const double sw = sliced_wasserstein_collinear(x1, x2);
  CHECK(sw == doctest::Approx(std::sqrt(1.0 / 72.0)).epsilon(1e-12));
  // cross-check against the exact solver: SW = W / sqrt(d) on a common line
  const double exact = wasserstein_exact(x1, x2, 2.0).cost;
  CHECK(sw == doctest::Approx(exact / std::sqrt(3.0)).epsilon(1e-9));
  CHECK(sliced_wasserstein_collinear(x1, x1) == 0.0);
}

TEST_CASE("collinear MC agreement within three standard errors") {
  const auto [x1, x2] = pswe_counterexample_pair(3, 2, 3);
  const double target = sliced_wasserstein_collinear(x1, x2);
  const auto est = sliced_wasserstein_mc(x1, x2, 20000, 17);
  CHECK(std::abs(est.mean_sq - target * target) <= 3.0 * est.std_error);
}

TEST_CASE("collinear shortcut in 1-D is the exact distance") {
  const auto mu = uniform_1d({0.2, 0.9});
  const auto nu = uniform_1d({0.4, 0.6, 0.8});
  const double exact = quantile_lp_distance(quantile(mu), quantile(nu), 2.0);
  CHECK(sliced_wasserstein_collinear(mu, nu) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("collinear rejects off-line support") {
  Matrix points(2, 2);
  points(0, 0) = 1.0;
  points(1, 0) = 0.0;
  points(0, 1) = 0.0;
  points(1, 1) = 1.0;
  const auto mu = from_multiset(std::move(points));
  Matrix other(2, 1);
  other(0, 0) = 1.0;
  const auto nu = from_multiset(std::move(other));
  CHECK_THROWS_AS(sliced_wasserstein_collinear(mu, nu), std::invalid_argument);
}

TEST_CASE("counterexample pair construction") {
  const auto [x1, x2] = pswe_counterexample_pair(3, 5, 200);
  CHECK(x1.size() == 5);
  CHECK(x2.size() == 200);
  CHECK(x1.points()(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(x1.points()(2, 4) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(pswe_counterexample_pair(3, 4, 4), std::invalid_argument);

  const auto [s1, s2] = pswe_counterexample_pair(2, 1, 2);
  CHECK(s1.size() == 1);
  CHECK(s1.points()(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("plan JSON dump carries cost, p and the matrix") {
  const auto mu = uniform_1d({0.0, 1.0});
  const auto nu = uniform_1d({0.5, 1.5});
  const auto result = wasserstein_exact(mu, nu, 2.0);
  const auto j = plan_to_json(result);
  CHECK(j.at("cost").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(j.at("p").get<double>() == 2.0);
  CHECK(j.at("plan").size() == 2);
  CHECK(j.at("plan").at(0).size() == 2);
}

}  // TEST_SUITE
