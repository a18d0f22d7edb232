// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "escapelab/audit.hpp"
#include "escapelab/classify.hpp"
#include "escapelab/construction.hpp"
#include "escapelab/errors.hpp"
#include "escapelab/geometry.hpp"
#include "escapelab/itinerary.hpp"

using namespace escapelab;
using cd = std::complex<double>;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;
  std::function<Outcome()> run;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

ClassifyParams base_only(double R) {
  ClassifyParams p;
  p.radii = {R};
  return p;
}

BranchChain linear_chain(std::size_t depth, std::uint64_t seed) {
  ConstructionConfig config;
  config.t = seq_linear(depth + 1);
  config.precision_bits = 256;
  return construct_chain(ExpMap(1.0), config, depth, seed);
}

Outcome density_sweep_criterion() {
  const DensitySweep sweep = density_sweep(200, kSeed);
  std::size_t bad = 0;
  for (const DensityTrial& t : sweep.trials) {
    const DensityVerification& v = t.result;
    const bool ok = v.hypotheses.ok() && v.exact_density >= v.bound &&
                    static_cast<double>(v.component_count) >= (t.R2 - t.R1) / (2 * kPi);
    if (!ok) ++bad;
  }
  return {sweep.trials.size() == 200 && bad == 0,
          format("%zu tuples, %zu violations, min slack %.3g", sweep.trials.size(), bad, sweep.min_slack)};
}

Outcome worked_density_criterion() {
  const DensityVerification v =
      verify_density(ExpMap(1.0), HalfAnnulus(10.0, 70.0), HalfAnnulus(kE, kE * kE), 1'000'000, kSeed);
  const double expected_bound = 1.0 / (140.0 * kPi);
  const double mc = v.monte_carlo.density;
  const double se = v.monte_carlo.standard_error;
  const bool ok = v.component_count == 18 && std::abs(v.exact_density - 0.0075) <= 1e-12 &&
                  std::abs(v.bound - expected_bound) <= 1e-12 * expected_bound && std::abs(mc - 0.0075) <= 4 * se;
  return {ok, format("components %zu, exact %.10g, bound %.7g, MC %.6g +- %.2g", v.component_count, v.exact_density,
                     v.bound, mc, se)};
}

Outcome distortion_criterion() {
  const long precision = 256;
  const ExpMap map(1.0, precision);
  const PreciseHalfAnnulus ring{BigFloat(kE, precision), BigFloat(kE * kE, precision)};
  const double single = pullback_distortion(map, ring, {mpz_class(0)}, precision);
  const double rel = std::abs(single - kE) / kE;

  ConstructionConfig config;
  config.t = seq_linear(6);
  config.precision_bits = precision;
  const double bound = config.tau0 * config.R;
  double worst = 0.0;
  std::size_t chains = 0;
  std::size_t regenerated = 0;
  bool within = true;
  std::uint64_t seed = kSeed;
  for (std::size_t depth = 1; depth <= 5; ++depth) {
    for (int c = 0; c < 5; ++c) {
      for (int attempt = 0;; ++attempt, ++seed) {
        try {
          const BranchChain chain = construct_chain(map, config, depth, seed);
          const DistortionAudit audit = distortion_chain_audit(map, chain, config);
          worst = std::max(worst, audit.distortion);
          within = within && audit.distortion <= bound;
          ++chains;
          ++seed;
          break;
        } catch (const HypothesisViolated&) {
          ++regenerated;
          if (attempt >= 50) return {false, "no chain met the distortion hypotheses"};
        }
      }
    }
  }
  return {rel <= 1e-9 && within,
          format("single step %.12g (rel err %.2g); %zu chains, worst %.4g <= %.4g, %zu regenerated", single, rel,
                 chains, worst, bound, regenerated)};
}

Outcome mcmullen_criterion() {
  const double R = compute_R0(ExpMap(1.0), 0.1);
  const Itinerary linear = seq_linear(100'001);
  const double v4 = proof_mcmullen(R, linear, 2.0, 10'000).value;
  const double v5 = proof_mcmullen(R, linear, 2.0, 100'000).value;
  const double doubled = proof_mcmullen(R, linear, 4.0, 10'000).value;
  const double square = proof_mcmullen(R, seq_square(1'001), 2.0, 1'000).value;
  const bool ok = R == 20.0 && std::abs(v4 - 1) <= 0.05 && std::abs(v5 - 1) <= 1e-3 && std::abs(square - 1) <= 0.05 &&
                  std::abs(doubled - v4) < 0.01;
  return {ok, format("R0 %.6g; n=1e4 %.6f, n=1e5 %.6f, square n=1e3 %.6f, doubled tau0 shift %.2g", R, v4, v5, square,
                     std::abs(doubled - v4))};
}

Outcome construction_criterion() {
  const BranchChain chain = linear_chain(30, kSeed);
  bool resident = chain.residence.size() == chain.depth() + 1;
  for (bool r : chain.residence) resident = resident && r;
  const ExpMap map(1.0, chain.precision_bits);
  const EscapeCertificate cert = classify(map, chain.point, chain.verified_steps, base_only(20.0));
  const bool ok = resident && chain.verified_steps >= 10 && cert.category == Category::UniformSlow && cert.R == 20.0;
  return {ok, format("residences %s, verified %zu of budget %zu, certificate %s R=%g N=%zu", resident ? "ok" : "FAILED",
                     chain.verified_steps, chain.expansion_budget, to_string(cert.category).c_str(), cert.R, cert.N)};
}

Outcome nesting_invariance_criterion() {
  std::size_t uniform = 0, nested = 0, forward = 0, preimage = 0;
  const std::size_t points = 100;
  for (std::uint64_t seed = 1000; seed < 1000 + points; ++seed) {
    const BranchChain chain = linear_chain(30, seed);
    const ExpMap map(1.0, chain.precision_bits);
    const OrbitRecord orbit = record_orbit(map, chain.point, chain.verified_steps);
    const EscapeCertificate cert = classify(map, orbit, base_only(20.0));
    if (cert.category != Category::UniformSlow) continue;
    ++uniform;
    if (validate_as(map, orbit, Category::FlatSlow, cert.N) && validate_as(map, orbit, Category::Slow, cert.N)) {
      ++nested;
    }
    const InvarianceReport r = invariance_check(map, chain.point, cert, mpz_class(0), base_only(20.0));
    forward += r.forward_ok;
    preimage += r.preimage_ok;
  }
  const bool ok = uniform == points && nested == points && forward == points && preimage == points;
  return {ok, format("%zu points: UniformSlow %zu, nested %zu, forward %zu, preimage %zu", points, uniform, nested,
                     forward, preimage)};
}

Outcome cone_fast_criterion() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ExpMap map(1.0);
  const std::size_t points = 1000;
  std::size_t cone = 0, fast = 0, precondition = 0, slow_family = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double re = 50.0 + 50.0 * u(rng);
    // Re > |z|/2 + 1 bounds |Im| by sqrt(4 (Re - 1)^2 - Re^2).
    const double im_max = std::sqrt(4 * (re - 1) * (re - 1) - re * re);
    const cd z(re, (2 * u(rng) - 1) * im_max * 0.999);
    cone += ku_cone_test(map, z);
    try {
      fast += ku_fast_check(map, z, 0, 5);
    } catch (const ConePreconditionFailed&) {
      ++precondition;
    }
    const OrbitRecord orbit = record_orbit(map, z, 5);
    bool coexists = false;
    for (std::size_t N = 0; N <= 2; ++N) {
      for (Category c : {Category::Slow, Category::FlatSlow, Category::UniformSlow}) {
        coexists = coexists || validate_as(map, orbit, c, N).has_value();
      }
    }
    slow_family += coexists;
  }
  const bool ok = cone == points && fast == points && slow_family == 0;
  return {ok, format("%zu points: cone %zu, fast check %zu (%.1f%%), orbit left the cone %zu, Slow-family %zu", points,
                     cone, fast, 100.0 * static_cast<double>(fast) / points, precondition, slow_family)};
}

Outcome upper_bound_criterion() {
  const UpperBoundAudit a = upper_bound_audit(GrowthFamily::power_log(1), 0.5, 1, 10'000);
  const double log_target = std::log(1e-3);
  std::optional<std::size_t> small_q;
  std::optional<std::size_t> large_ratio;
  for (const UpperBoundRow& row : a.rows) {
    if (!small_q && row.log_q < log_target) small_q = row.n;
    if (!large_ratio && row.condition_ratio > 10.0) large_ratio = row.n;
  }
  const UpperBoundRow& last = a.rows.back();
  const bool ok = a.decreasing_from <= 100 && small_q && large_ratio;
  return {ok, format("decreasing from n=%zu; q<1e-3 from %s; ratio>10 from %s; at n=%zu log q %.4g, ratio %.4g",
                     a.decreasing_from, small_q ? std::to_string(*small_q).c_str() : "never",
                     large_ratio ? std::to_string(*large_ratio).c_str() : "never", last.n, last.log_q,
                     last.condition_ratio)};
}

Outcome min_modulus_criterion() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> mod(0.1, 10.0);
  std::uniform_real_distribution<double> arg(-kPi, kPi);
  std::size_t holds = 0;
  std::size_t witness_failures = 0;
  for (int i = 0; i < 20; ++i) {
    const ExpMap map(std::polar(mod(rng), arg(rng)));
    const double c = std::abs(map.lambda());
    const MinModulusReport r = min_modulus_condition(map, c, 2.0, 1.0, 10);
    // m(rho) = |lambda| e^{-rho} <= |lambda| for every rho > 0, so each r >= 1 has witnesses in (r, 2r).
    holds += r.holds;
    for (std::size_t j = 0; j < r.sampled_r.size(); ++j) {
      const double rr = r.sampled_r[j], rho = r.found_rho[j];
      if (!(rho > rr && rho < 2 * rr && c * std::exp(-rho) <= c)) ++witness_failures;
    }
  }
  return {holds == 20 && witness_failures == 0,
          format("condition holds for %zu of 20, witness failures %zu", holds, witness_failures)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "density bound sweep", 30.0, density_sweep_criterion},
      {2, "worked density instance", 5.0, worked_density_criterion},
      {3, "inverse-branch distortion", 10.0, distortion_criterion},
      {4, "finite-depth dimension bound", 5.0, mcmullen_criterion},
      {5, "construction round trip", 20.0, construction_criterion},
      {6, "certificate nesting and invariance", 60.0, nesting_invariance_criterion},
      {7, "cone and fast escape consistency", 10.0, cone_fast_criterion},
      {8, "upper-bound audit", 5.0, upper_bound_criterion},
      {9, "minimum modulus condition", 1.0, min_modulus_criterion},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.time_limit;
    const bool pass = outcome.pass && in_time;
    failed += !pass;
    std::printf("%s %d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                outcome.detail.c_str(), seconds, c.time_limit, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
