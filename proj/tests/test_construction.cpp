#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "escapelab/construction.hpp"
#include "escapelab/errors.hpp"

using namespace escapelab;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

namespace {

ConstructionConfig linear_config(std::size_t depth) {
  ConstructionConfig c;
  c.t = seq_linear(depth + 1);
  return c;
}

double distance(const BigComplex& a, const BigComplex& b) { return hypot(a.re - b.re, a.im - b.im).to_double(); }

}  // namespace

TEST_CASE("proof half-annuli") {
  const HalfAnnulus h1 = proof_half_annulus(20.0, 1);
  CHECK(h1.r1 == 21.0);
  CHECK(h1.r2 == 399.0);
  const HalfAnnulus h2 = proof_half_annulus(20.0, 2);
  CHECK(h2.r1 == 401.0);
  CHECK(h2.r2 == 7999.0);
  CHECK_THROWS_AS(proof_half_annulus(1.01, 1), Degenerate);
  const auto precise = proof_half_annulus_precise(20.0, 400, 256);
  CHECK(log(precise.r1).to_double() == doctest::Approx(400 * std::log(20.0)));
}

TEST_CASE("configuration validation") {
  const ExpMap map(1.0);
  ConstructionConfig c = linear_config(3);
  CHECK_NOTHROW(c.validate(map));
  c.tau0 = 1.0;
  CHECK_THROWS_AS(c.validate(map), InvalidArgument);
  c = linear_config(3);
  c.s0 = 0.2;
  CHECK_THROWS_AS(c.validate(map), InvalidArgument);
  c = linear_config(3);
  c.R = 10.0;
  CHECK_THROWS_AS(c.validate(map), InvalidArgument);
  c.force = true;
  CHECK_NOTHROW(c.validate(map));
}

TEST_CASE("contained rows agree with an exhaustive containment scan") {
  const ExpMap map(1.0, 256);
  for (std::uint64_t n : {1, 2, 3}) {
    for (std::uint64_t m : {1, 2}) {
      const auto source = proof_half_annulus_precise(20.0, n, 256);
      const auto target = proof_half_annulus_precise(20.0, m, 256);
      const RowRuns runs = contained_rows(map, source, target);
      mpz_class count = 0;
      const long limit = static_cast<long>(std::pow(20.0, n + 1) / (2 * kPi)) + 3;
      for (long k = -limit; k <= limit; ++k) {
        const bool inside = rectangle_inside(source, precise_preimage(map, target, mpz_class(k)));
        const bool in_runs = (!runs.upper_empty() && k >= runs.upper_first && k <= runs.upper_last) ||
                             (!runs.lower_empty() && k >= runs.lower_first && k <= runs.lower_last);
        CHECK(inside == in_runs);
        if (inside) ++count;
      }
      CHECK(runs.count() == count);
    }
  }
}

TEST_CASE("single backward step into H_1") {
  const ExpMap map(1.0, 256);
  ConstructionConfig config = linear_config(1);
  const BigComplex seed = default_seed(config, 1);
  CHECK(seed.re.to_double() == doctest::Approx(210.0));
  CHECK(seed.im.is_zero());

  const auto h1 = proof_half_annulus_precise(20.0, 1, 256);
  const RowRuns runs = contained_rows(map, h1, h1);
  REQUIRE_FALSE(runs.upper_empty());
  const BranchChain chain = construct_point(map, config, {runs.upper_first}, seed);
  CHECK(h1.contains(chain.point));
  CHECK(h1.contains(chain.backward[1]));
  CHECK(chain.residence == std::vector<bool>{true, true});
  CHECK(chain.verified_steps >= 1);

  // The rectangle of row 1 sits at height about 2 pi, far inside |z| < 21.
  CHECK_THROWS_AS(construct_point(map, config, {mpz_class(1)}, seed), RowNotContained);
  CHECK_THROWS_AS(construct_point(map, config, {mpz_class(0)}, seed), RowNotContained);
}

TEST_CASE("depth-zero construction returns the seed") {
  const ExpMap map(1.0, 256);
  const ConstructionConfig config = linear_config(0);
  const BigComplex seed = default_seed(config, 0);
  const BranchChain chain = construct_point(map, config, {}, seed);
  CHECK(chain.point.re == seed.re);
  CHECK(chain.point.im == seed.im);
  CHECK(chain.depth() == 0);
}

TEST_CASE("seeds outside the final half-annulus are rejected") {
  const ExpMap map(1.0, 256);
  const ConstructionConfig config = linear_config(1);
  const auto h1 = proof_half_annulus_precise(20.0, 1, 256);
  const RowRuns runs = contained_rows(map, h1, h1);
  CHECK_THROWS_AS(construct_point(map, config, {runs.upper_first}, BigComplex(cd(5.0, 0.0), 256)), BranchEscapesRegion);
}

TEST_CASE("constructed chains hold their residences and track the expansion budget") {
  const ExpMap map(1.0);
  const ConstructionConfig config = linear_config(30);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BranchChain chain = construct_chain(map, config, 30, seed);
    CHECK(chain.depth() == 30);
    CHECK(std::all_of(chain.residence.begin(), chain.residence.end(), [](bool b) { return b; }));
    CHECK(chain.expansion_budget == expansion_budget(20.0, config.t, 256));
    CHECK(chain.verified_steps >= 10);
    CHECK(std::abs(static_cast<long>(chain.verified_steps) - static_cast<long>(chain.expansion_budget)) <= 2);
  }
  const BranchChain a = construct_chain(map, config, 30, 5);
  const BranchChain b = construct_chain(map, config, 30, 5);
  CHECK(a.rows == b.rows);
  CHECK(a.point.re == b.point.re);
}

TEST_CASE("expansion budget") {
  // sum_{j=1}^m t_j log 20 <= 256 log 2 holds up to m = 11 for the linear sequence (sum 46).
  CHECK(expansion_budget(20.0, seq_linear(40), 256) == 11);
  CHECK(expansion_budget(20.0, seq_linear(5), 256) == 4);
}

TEST_CASE("backward steps contract by the modulus of the image") {
  const ExpMap map(1.0, 256);
  ConstructionConfig config = linear_config(6);
  const auto rows = choose_rows(map, config, 6, 12);
  const BigComplex seed = default_seed(config, 6);
  BigComplex nudged = seed;
  nudged.im = nudged.im + 1e-3;
  const BranchChain a = construct_point(map, config, rows, seed);
  const BranchChain b = construct_point(map, config, rows, nudged);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const double shrink = std::pow(20.0, static_cast<double>(config.t[j + 1]));
    CHECK(distance(a.backward[j], b.backward[j]) <= distance(a.backward[j + 1], b.backward[j + 1]) / shrink);
  }
}

TEST_CASE("proof diameters") {
  const Itinerary t = seq_linear(20);
  CHECK(proof_diameter(20.0, t, 3) == doctest::Approx(0.1));
  CHECK(proof_diameter(20.0, Itinerary{4, 3, 7}, 2) == doctest::Approx(2 * std::pow(20.0, -2.0)));
  CHECK(proof_log_diameter(20.0, t, 10) == doctest::Approx(std::log(2.0) - 36 * std::log(20.0)));
  CHECK_THROWS_AS(proof_diameter(20.0, t, 1), InvalidArgument);
}

TEST_CASE("proof deltas") {
  CHECK(proof_delta(kE, 1.0, 0) == doctest::Approx(1 / (4 * kPi * std::pow(kE, 3))));
  CHECK(proof_delta(20.0, 2.0, 1) == doctest::Approx(std::log(20.0) / (16 * kPi * std::pow(20.0, 4))));
  for (std::uint64_t t : {0u, 3u, 50u}) {
    CHECK(proof_log_delta(20.0, 2.0, t) - proof_log_delta(20.0, 2.0, t + 1) == doctest::Approx(std::log(20.0)));
  }
}

TEST_CASE("finite-depth dimension bound") {
  const Itinerary lin = seq_linear(100'001);
  const auto at4 = proof_mcmullen(20.0, lin, 2.0, 10'000);
  CHECK(std::abs(at4.value - 1.0) <= 0.05);
  CHECK(std::abs(proof_mcmullen(20.0, lin, 2.0, 100'000).value - 1.0) <= 1e-3);
  CHECK(std::abs(proof_mcmullen(20.0, lin, 4.0, 10'000).value - at4.value) < 0.01);
  CHECK(std::abs(proof_mcmullen(20.0, seq_square(1001), 2.0, 1000).value - 1.0) <= 0.05);

  // Running values settle monotonically onto 1.
  const auto& running = at4.running;
  REQUIRE(running.size() > 100);
  for (std::size_t i = running.size() / 2; i + 1 < running.size(); ++i) {
    CHECK(std::abs(running[i + 1].second - 1.0) <= std::abs(running[i].second - 1.0));
  }
}

TEST_CASE("dimension bound in the geometric case") {
  const double c = 0.5;
  for (std::size_t n : {10u, 100u, 1000u}) {
    std::vector<double> deltas(n + 1, std::log(c));
    std::vector<double> diams(n + 1);
    for (std::size_t m = 0; m <= n; ++m) diams[m] = m * std::log(c);
    diams[0] = -INFINITY;
    const auto r = mcmullen_bound(deltas, diams, n);
    CHECK(r.value == doctest::Approx(2.0 - (n + 1.0) / n));
  }
  CHECK_THROWS_AS(mcmullen_bound({0.5, 0.5, 0.5}, {0.1, 0.1, 0.1}, 2), DomainError);
}

TEST_CASE("distortion of pulled-back targets") {
  const ExpMap map(1.0, 256);
  const PreciseHalfAnnulus ring{BigFloat(kE, 256), BigFloat(kE * kE, 256)};
  CHECK(pullback_distortion(map, ring, {mpz_class(0)}, 256) == doctest::Approx(kE).epsilon(1e-12));
  CHECK(pullback_distortion(map, ring, {mpz_class(7)}, 256) == doctest::Approx(kE).epsilon(1e-12));
  CHECK(pullback_distortion(map, ring, {}, 256) == 1.0);
}

TEST_CASE("distortion chain audit against tau0 R") {
  const ExpMap map(1.0);
  ConstructionConfig config = linear_config(5);
  std::size_t audited = 0;
  for (std::uint64_t seed = 1; audited < 20 && seed < 200; ++seed) {
    for (std::size_t depth = 1; depth <= 5; ++depth) {
      const BranchChain chain = construct_chain(map, config, depth, seed);
      try {
        const DistortionAudit audit = distortion_chain_audit(map, chain, config);
        CHECK(audit.bound == doctest::Approx(40.0));
        CHECK(audit.distortion >= 1.0);
        CHECK(audit.within_bound);
        CHECK(audit.distortion <= audit.bound);
        ++audited;
      } catch (const HypothesisViolated& e) {
        CHECK(e.step() >= 0);
      }
    }
  }
  CHECK(audited >= 20);
}
