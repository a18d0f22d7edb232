#include "escapelab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "escapelab/errors.hpp"

namespace escapelab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

GrowthFamily GrowthFamily::power_log(unsigned p) {
  GrowthFamily f;
  f.kind = Kind::PowerLog;
  f.p = p;
  return f;
}

GrowthFamily GrowthFamily::exp_power_log(unsigned p) {
  GrowthFamily f;
  f.kind = Kind::ExpPowerLog;
  f.p = p;
  return f;
}

GrowthFamily GrowthFamily::itinerary(double R, Itinerary t) {
  if (!(R > 1.0)) throw InvalidArgument("R must exceed 1");
  GrowthFamily f;
  f.kind = Kind::Itinerary;
  f.R = R;
  f.t = std::move(t);
  return f;
}

GrowthFamily GrowthFamily::constant(double log_value) {
  if (!(log_value > 0.0)) throw InvalidArgument("constant family needs log value > 0");
  GrowthFamily f;
  f.kind = Kind::Constant;
  f.log_constant = log_value;
  return f;
}

double GrowthFamily::log_g(std::size_t n) const {
  const double x = static_cast<double>(n);
  switch (kind) {
    case Kind::PowerLog:
      return n == 0 ? 0.0 : std::log(x) * log_plus_p(x, p);
    case Kind::ExpPowerLog:
      return x * log_plus_p(x, p);
    case Kind::Itinerary:
      return static_cast<double>(t.at(n)) * std::log(R);
    case Kind::Constant:
      return log_constant;
  }
  return 0.0;
}

double GrowthFamily::log_h(std::size_t n) const {
  const double x = static_cast<double>(n);
  switch (kind) {
    case Kind::PowerLog:
      return p * x;
    case Kind::ExpPowerLog:
      return std::exp(p * x);
    case Kind::Itinerary:
      return (static_cast<double>(t.at(n)) + 1.0) * std::log(R);
    case Kind::Constant:
      return log_constant;
  }
  return 0.0;
}

double GrowthFamily::log_log_h(std::size_t n) const {
  if (kind == Kind::ExpPowerLog) return p * static_cast<double>(n);
  return std::log(log_h(n));
}

std::string GrowthFamily::name() const {
  switch (kind) {
    case Kind::PowerLog:
      return "power-log";
    case Kind::ExpPowerLog:
      return "exp-power-log";
    case Kind::Itinerary:
      return "itinerary";
    case Kind::Constant:
      return "constant";
  }
  return "";
}

CoverRegion upper_cover_sets(double g_n, unsigned m, double c1) {
  if (!(g_n > 0.0)) throw InvalidArgument("g_n must be positive");
  if (m == 0) throw InvalidArgument("m must be at least 1");
  const double e = std::numbers::e;
  return {ClosedAnnulus(std::pow(e, m - 1.0) * g_n, std::pow(e, static_cast<double>(m)) * g_n), c1};
}

UpperBoundAudit upper_bound_audit(const GrowthFamily& family, double epsilon, std::size_t n_first,
                                  std::size_t n_last) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (n_first > n_last) throw InvalidArgument("empty index window");
  if (family.kind == GrowthFamily::Kind::Itinerary && family.t.size() < n_last + 2) {
    throw InvalidArgument("itinerary shorter than the audit window");
  }

  UpperBoundAudit audit;
  audit.family = family.name();
  audit.p = family.p;
  audit.epsilon = epsilon;
  audit.n_first = n_first;
  audit.n_last = n_last;

  for (std::size_t n = n_first; n <= n_last + 1; ++n) {
    if (family.log_h(n) < family.log_g(n)) {
      throw FamilyViolation("h_n < g_n at n = " + std::to_string(n));
    }
  }

  for (std::size_t n = n_first; n <= n_last; ++n) {
    UpperBoundRow row{};
    row.n = n;
    const double log_g = family.log_g(n);
    const double log_log_h_next = family.log_log_h(n + 1);
    row.log_q = -epsilon * log_g + log_log_h_next;
    const double denominator = family.log_h(n + 1) >= 1.0 ? log_log_h_next : 0.0;
    row.condition_ratio = denominator > 0.0 ? log_g / denominator : kInf;
    const double gap = family.log_h(n) - log_g;
    row.alpha = std::isfinite(gap) ? std::floor(gap) + 1.0 : kInf;
    if (!audit.crossover_index && row.log_q < 0.0) audit.crossover_index = n;
    audit.rows.push_back(row);
  }

  std::size_t from = audit.rows.size() - 1;
  while (from > 0 && audit.rows[from - 1].log_q > audit.rows[from].log_q) --from;
  audit.decreasing_from = audit.rows[from].n;
  const std::size_t half = audit.rows.size() / 2;
  audit.pass = audit.rows.size() >= 2 && from <= half && audit.rows.back().log_q < 0.0;
  return audit;
}

DensitySweep density_sweep(std::size_t trials, std::uint64_t seed, std::uint64_t mc_samples) {
  DensitySweep sweep;
  sweep.seed = seed;
  sweep.min_slack = kInf;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };

  while (sweep.trials.size() < trials) {
    const double modulus = std::pow(10.0, uniform(-1.0, 1.0));
    const std::complex<double> lambda = std::polar(modulus, uniform(-std::numbers::pi, std::numbers::pi));
    const double R3 = modulus * (1.0 + std::pow(10.0, uniform(-2.0, 1.0)));
    const double R4 = R3 * std::exp(uniform(0.05, 4.0));
    const double R1 = std::pow(10.0, uniform(-1.0, 3.0));
    const double needed = std::max({2.0 * R1, R1 + 16.0 * std::numbers::pi, 3.0 * std::log(R4 / modulus)});
    const double R2 = needed * (1.0 + uniform(0.001, 1.0));
    if (R2 > 1e4) continue;

    const ExpMap map(lambda);
    DensityTrial trial{lambda, R1, R2, R3, R4,
                       verify_density(map, HalfAnnulus(R1, R2), HalfAnnulus(R3, R4), mc_samples,
                                      seed + sweep.trials.size(), 1)};
    sweep.min_slack = std::min(sweep.min_slack, trial.result.exact_density - trial.result.bound);
    sweep.pass = sweep.pass && trial.result.pass;
    sweep.trials.push_back(trial);
  }
  return sweep;
}

}  // namespace escapelab
