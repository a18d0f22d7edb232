#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "escapelab/errors.hpp"
#include "escapelab/itinerary.hpp"
#include "oracles.hpp"

using namespace escapelab;
using cd = std::complex<double>;

TEST_CASE("annulus index of worked moduli") {
  const AnnularPartition p(10.0);
  CHECK(annular_index(p, 5.0) == 0);
  CHECK(annular_index(p, 10.0) == 1);
  CHECK(annular_index(p, 99.999) == 1);
  CHECK(annular_index(p, 1000.0) == 3);
  CHECK(annular_index(p, 0.0) == 0);
}

TEST_CASE("partition base must exceed 1") {
  CHECK_THROWS_AS(AnnularPartition(1.0), InvalidArgument);
  CHECK_THROWS_AS(AnnularPartition(0.5), InvalidArgument);
}

TEST_CASE("boundary radii belong to the annulus above them") {
  for (double R : {10.0, 20.0, 2.0, std::numbers::e}) {
    const AnnularPartition p(R);
    for (std::uint64_t n = 1; n <= 40; ++n) {
      const double r = std::pow(R, static_cast<double>(n));
      CHECK(annular_index(p, r) == n);
      CHECK(annular_index(p, std::nextafter(r, 0.0)) == n - 1);
    }
  }
}

TEST_CASE("tower and cartesian forms give the same index across the overflow threshold") {
  const AnnularPartition p(20.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(295.0, 307.0);
  for (int i = 0; i < 500; ++i) {
    const double x = std::pow(10.0, u(rng));
    const auto cart = annular_index(p, SafePoint::cartesian(cd(x, 0.0)));
    const auto tower = annular_index(p, SafePoint::tower(TowerValue::from_real(x)));
    CHECK(cart == tower);
  }
  const auto far = annular_index(p, SafePoint::tower(TowerValue::from_log(1e6)));
  CHECK(far == static_cast<std::uint64_t>(std::floor(1e6 / std::log(20.0))));
}

TEST_CASE("itineraries of worked orbits") {
  const AnnularPartition p(10.0);
  CHECK(compute_itinerary(ExpMap(1.0), p, cd(0.5), 0).indices == Itinerary{0});
  CHECK(compute_itinerary(ExpMap(0.25), p, cd(0.0), 30).indices == Itinerary(31, 0));
  CHECK(compute_itinerary(ExpMap(1.0), p, cd(50.0), 1).indices == Itinerary{1, 21});
}

TEST_CASE("itinerary prefixes are stable") {
  const ExpMap map(cd(0.9, 0.3));
  const AnnularPartition p(5.0);
  const cd z(3.0, 0.4);
  const auto full = compute_itinerary(map, p, z, 12).indices;
  for (std::size_t m = 0; m <= 12; ++m) {
    const auto prefix = compute_itinerary(map, p, z, m).indices;
    CHECK(std::equal(prefix.begin(), prefix.end(), full.begin()));
  }
}

TEST_CASE("predicates on the linear sequence") {
  const ItineraryReport r = check_predicates(seq_linear(11));
  CHECK(r.admissible_failures.empty());
  CHECK(r.eventually_admissible);
  REQUIRE_FALSE(r.slow_growth_ratios.empty());
  CHECK(r.slow_growth_ratios.back().first == 10);
  CHECK(r.slow_growth_ratios.back().second == doctest::Approx(9.0 / 37.0));
  CHECK(r.nonzero_up_to == 11);
}

TEST_CASE("linear sequence ratios decay like 1/n") {
  const ItineraryReport r = check_predicates(seq_linear(2000));
  CHECK(r.admissible_failures.empty());
  CHECK(r.escaping_trend.increasing);
  for (const auto& [n, ratio] : r.slow_growth_ratios) {
    if (n >= 10) CHECK(ratio * static_cast<double>(n) <= 3.0);
  }
}

TEST_CASE("predicates on the square sequence fail admissibility at index 0 only") {
  const ItineraryReport r = check_predicates(seq_square(50));
  CHECK(r.admissible_failures == std::vector<std::size_t>{0});
  CHECK(r.eventually_admissible);
}

TEST_CASE("predicates on a constant sequence") {
  const ItineraryReport r = check_predicates(Itinerary(200, 2));
  CHECK(r.nonzero_up_to == 200);
  CHECK(r.admissible_failures.empty());
  CHECK_FALSE(r.escaping_trend.increasing);
  CHECK(r.slow_growth_ratios.back().second < 0.02);
}

TEST_CASE("ratios are reported only where the partial sum is positive") {
  const ItineraryReport r = check_predicates(Itinerary{5, 0, 0, 3, 4});
  for (const auto& [n, ratio] : r.slow_growth_ratios) CHECK(n >= 4);
  CHECK(r.admissible_failures == std::vector<std::size_t>{2});
}

TEST_CASE("sequence generators") {
  CHECK(seq_linear(5) == Itinerary{1, 1, 1, 2, 3});
  CHECK(seq_linear(1) == Itinerary{1});
  CHECK(seq_linear(10).back() == 8);
  CHECK(seq_square(3) == Itinerary{1, 4, 9});
  CHECK(seq_square(1) == Itinerary{1});
  CHECK(seq_square(6).back() == 36);
}

TEST_CASE("threshold base R0") {
  CHECK(compute_R0(ExpMap(1.0), 0.1) == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(compute_R0(ExpMap(std::numbers::e), 0.1) == doctest::Approx(20.0).epsilon(1e-9));
  // With 2/s0 small the binding constraint is R > 3 log(R^2) + 1.
  const double root = oracle::bisect([](double R) { return R - 6.0 * std::log(R) - 1.0; }, 6.0, 100.0);
  CHECK(compute_R0(ExpMap(1.0), 1.0) == doctest::Approx(root).epsilon(1e-9));
}

TEST_CASE("R0 satisfies every constraint just above it") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const ExpMap map(std::polar(std::exp(u(rng)), u(rng)));
    const double s0 = 0.01 + 0.1 * std::abs(u(rng));
    const double R = compute_R0(map, s0) * (1 + 1e-8);
    CHECK(R > std::numbers::e);
    CHECK(R > map.abs_lambda());
    CHECK(R > 2.0 / s0);
    CHECK(R * (R - 1) > 16 * std::numbers::pi + 2);
    CHECK(R > 3 * std::log(R * R / map.abs_lambda()) + 1);
  }
}

TEST_CASE("itinerary files") {
  std::istringstream in("# header\n1\n\n4\n  9\n# trailing\n");
  CHECK(read_itinerary(in) == Itinerary{1, 4, 9});
  std::stringstream io;
  write_itinerary(io, seq_linear(7));
  CHECK(read_itinerary(io) == seq_linear(7));
  std::istringstream bad("1\nx\n");
  CHECK_THROWS_AS(read_itinerary(bad), InvalidArgument);
  std::istringstream negative("-3\n");
  CHECK_THROWS_AS(read_itinerary(negative), InvalidArgument);
}
