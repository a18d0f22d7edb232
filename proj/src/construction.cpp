#include "escapelab/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "escapelab/errors.hpp"

namespace escapelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

BigFloat at_precision(const BigFloat& x, long precision) { return x + BigFloat(0.0, precision); }

BigComplex at_precision(const BigComplex& z, long precision) {
  return {at_precision(z.re, precision), at_precision(z.im, precision)};
}

BigFloat squared_modulus(const BigComplex& z) { return z.re * z.re + z.im * z.im; }

// Boundary sample of H(r1, r2): five points on each arc, three on each vertical side.
std::vector<BigComplex> boundary_sample(const PreciseHalfAnnulus& h) {
  const long p = h.r2.precision();
  std::vector<BigComplex> out;
  const BigFloat pi = BigFloat::pi(p);
  for (const BigFloat* r : {&h.r1, &h.r2}) {
    for (int i = -2; i <= 2; ++i) {
      const BigFloat angle = pi * (0.25 * i);
      out.emplace_back(*r * cos(angle), *r * sin(angle));
    }
  }
  for (double s : {0.25, 0.5, 0.75}) {
    const BigFloat y = h.r1 + (h.r2 - h.r1) * s;
    out.emplace_back(BigFloat(0.0, p), y);
    out.emplace_back(BigFloat(0.0, p), -y);
  }
  return out;
}

// levels[m][s] is sample s pulled back to step m; levels[n] is the boundary sample itself.
std::vector<std::vector<BigComplex>> pullback_levels(const ExpMap& work, const PreciseHalfAnnulus& target,
                                                     const std::vector<mpz_class>& rows) {
  const std::size_t n = rows.size();
  std::vector<std::vector<BigComplex>> levels(n + 1);
  levels[n] = boundary_sample(target);
  for (std::size_t j = n; j-- > 0;) {
    levels[j].reserve(levels[j + 1].size());
    for (const BigComplex& w : levels[j + 1]) levels[j].push_back(work.inverse_branch(w, rows[j]));
  }
  return levels;
}

double log_distortion(const std::vector<std::vector<BigComplex>>& levels) {
  const std::size_t n = levels.size() - 1;
  if (n == 0) return 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t s = 0; s < levels[n].size(); ++s) {
    // |(f^n)'(u_0)| = prod_{j=1}^{n} |u_j| because |f'| = |f|.
    double log_derivative = 0.0;
    for (std::size_t j = 1; j <= n; ++j) log_derivative += log(levels[j][s].abs()).to_double();
    lo = std::min(lo, log_derivative);
    hi = std::max(hi, log_derivative);
  }
  return hi - lo;
}

}  // namespace

void ConstructionConfig::validate(const ExpMap& map) const {
  if (!(tau0 > 1.0)) throw InvalidArgument("tau0 must exceed 1");
  if (!(s0 > 0.0 && s0 < 0.125)) throw InvalidArgument("s0 must lie in (0, 1/8)");
  if (precision_bits < BigFloat::kMinPrecision || precision_bits > BigFloat::kMaxPrecision) {
    throw InvalidArgument("precision must lie in [53, 1024] bits");
  }
  if (!(R > 1.0)) throw InvalidArgument("R must exceed 1");
  if (!force && R < compute_R0(map, s0)) throw InvalidArgument("R is below R0(lambda, s0)");
}

HalfAnnulus proof_half_annulus(double R, std::uint64_t n) {
  const double inner = std::pow(R, static_cast<double>(n)) + 1.0;
  const double outer = std::pow(R, static_cast<double>(n + 1)) - 1.0;
  if (!(inner < outer)) throw Degenerate("R^n + 1 must be below R^(n+1) - 1");
  return HalfAnnulus(inner, outer);
}

bool PreciseHalfAnnulus::contains(const BigComplex& z) const {
  if (z.re.sign() < 0) return false;
  const BigFloat m = squared_modulus(z);
  return m >= r1 * r1 && m <= r2 * r2;
}

PreciseHalfAnnulus proof_half_annulus_precise(double R, std::uint64_t n, long precision_bits) {
  const BigFloat base(R, precision_bits);
  BigFloat inner = pow(base, static_cast<long>(n)) + 1.0;
  BigFloat outer = pow(base, static_cast<long>(n + 1)) - 1.0;
  if (!(inner < outer)) throw Degenerate("R^n + 1 must be below R^(n+1) - 1");
  return {std::move(inner), std::move(outer)};
}

PreciseRectangle precise_preimage(const ExpMap& map, const PreciseHalfAnnulus& target, const mpz_class& row) {
  const long p = std::max(target.r1.precision(), map.precision_bits());
  const BigFloat pi = BigFloat::pi(p);
  const BigFloat centre = pi * BigFloat(mpz_class(2 * row), p);
  const BigFloat half = pi * 0.5;
  return {log(target.r1) - map.precise_log_abs_lambda(), log(target.r2) - map.precise_log_abs_lambda(),
          centre - half - map.precise_arg_lambda(), centre + half - map.precise_arg_lambda(), row};
}

bool rectangle_inside(const PreciseHalfAnnulus& source, const PreciseRectangle& rect) {
  return box_inside_half_annulus(source.r1, source.r2, rect.re_min, rect.re_max, rect.im_min, rect.im_max);
}

mpz_class RowRuns::count() const {
  mpz_class total = 0;
  if (!upper_empty()) total += upper_last - upper_first + 1;
  if (!lower_empty()) total += lower_last - lower_first + 1;
  return total;
}

RowRuns contained_rows(const ExpMap& map, const PreciseHalfAnnulus& source, const PreciseHalfAnnulus& target) {
  RowRuns runs{1, 0, 1, 0};
  const long p = std::max(source.r2.precision(), map.precision_bits());
  const BigFloat re_min = log(target.r1) - map.precise_log_abs_lambda();
  const BigFloat re_max = log(target.r2) - map.precise_log_abs_lambda();
  if (re_min.sign() < 0 || re_max > source.r2) return runs;

  const BigFloat zero(0.0, p);
  const BigFloat s1 = source.r1 > re_min ? sqrt(source.r1 * source.r1 - re_min * re_min) : zero;
  const BigFloat s2 = sqrt(source.r2 * source.r2 - re_max * re_max);
  const BigFloat two_pi = BigFloat::pi(p) * 2.0;
  const BigFloat& a = map.precise_arg_lambda();

  // Upper rows: s1 <= im_min and im_max <= s2, with im_min = (2k - 1/2) pi - arg lambda.
  runs.upper_first = max((s1 + a) / two_pi + 0.25, a / two_pi + 0.25).ceil_to_mpz();
  runs.upper_last = ((s2 + a) / two_pi - 0.25).floor_to_mpz();
  // Lower rows: -s2 <= im_min and im_max <= -s1.
  runs.lower_first = ((a - s2) / two_pi + 0.25).ceil_to_mpz();
  runs.lower_last = min((a - s1) / two_pi - 0.25, a / two_pi - 0.25).floor_to_mpz();

  auto inside = [&](const mpz_class& k) { return rectangle_inside(source, precise_preimage(map, target, k)); };
  // The closed-form endpoints can be off by rounding; settle them with the exact test.
  for (auto [first, last] : {std::pair{&runs.upper_first, &runs.upper_last},
                             std::pair{&runs.lower_first, &runs.lower_last}}) {
    while (*first <= *last && !inside(*first)) ++*first;
    while (*first <= *last && !inside(*last)) --*last;
  }
  return runs;
}

std::size_t expansion_budget(double R, const Itinerary& t, long precision_bits) {
  const double budget = static_cast<double>(precision_bits) * std::log(2.0);
  const double log_r = std::log(R);
  double spent = 0.0;
  std::size_t m = 0;
  while (m + 1 < t.size()) {
    spent += static_cast<double>(t[m + 1]) * log_r;
    if (spent > budget) break;
    ++m;
  }
  return m;
}

std::vector<mpz_class> choose_rows(const ExpMap& map, const ConstructionConfig& config, std::size_t depth,
                                   std::uint64_t seed) {
  if (config.t.size() < depth + 1) throw InvalidArgument("itinerary shorter than depth + 1");
  const ExpMap work(map.lambda(), config.precision_bits);
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(mpz_class(std::to_string(seed)));
  std::vector<mpz_class> rows;
  rows.reserve(depth);
  for (std::size_t j = 0; j < depth; ++j) {
    const auto source = proof_half_annulus_precise(config.R, config.t[j], config.precision_bits);
    const auto target = proof_half_annulus_precise(config.R, config.t[j + 1], config.precision_bits);
    const RowRuns runs = contained_rows(work, source, target);
    const mpz_class total = runs.count();
    if (total == 0) throw RowNotContained(j);
    mpz_class pick = rng.get_z_range(total);
    if (!runs.upper_empty()) {
      const mpz_class upper = runs.upper_last - runs.upper_first + 1;
      if (pick < upper) {
        rows.push_back(runs.upper_first + pick);
        continue;
      }
      pick -= upper;
    }
    rows.push_back(runs.lower_first + pick);
  }
  return rows;
}

BranchChain construct_point(const ExpMap& map, const ConstructionConfig& config,
                            const std::vector<mpz_class>& rows, const BigComplex& seed) {
  const std::size_t n = rows.size();
  if (config.t.size() < n + 1) throw InvalidArgument("itinerary shorter than depth + 1");
  const long p = config.precision_bits;
  const ExpMap work(map.lambda(), p);

  std::vector<PreciseHalfAnnulus> regions;
  regions.reserve(n + 1);
  for (std::size_t j = 0; j <= n; ++j) regions.push_back(proof_half_annulus_precise(config.R, config.t[j], p));

  BranchChain chain;
  chain.lambda = map.lambda();
  chain.R = config.R;
  chain.t_prefix.assign(config.t.begin(), config.t.begin() + static_cast<std::ptrdiff_t>(n + 1));
  chain.rows = rows;
  chain.seed = at_precision(seed, p);
  chain.precision_bits = p;
  chain.residence.assign(n + 1, false);
  chain.backward.assign(n + 1, BigComplex(p));

  BigComplex z = chain.seed;
  if (!regions[n].contains(z)) throw BranchEscapesRegion(n);
  chain.backward[n] = z;
  chain.residence[n] = true;
  for (std::size_t j = n; j-- > 0;) {
    if (!rectangle_inside(regions[j], precise_preimage(work, regions[j + 1], rows[j]))) throw RowNotContained(j);
    z = work.inverse_branch(z, rows[j]);
    if (!regions[j].contains(z)) throw BranchEscapesRegion(j);
    chain.backward[j] = z;
    chain.residence[j] = true;
  }
  chain.point = chain.backward[0];

  PrecisePoint current = chain.point;
  for (std::size_t i = 1; i <= n; ++i) {
    current = work.apply(current);
    const auto* c = std::get_if<BigComplex>(&current);
    if (c == nullptr || !regions[i].contains(*c)) break;
    chain.verified_steps = i;
  }
  chain.expansion_budget = std::min(expansion_budget(config.R, chain.t_prefix, p), n);
  return chain;
}

BigComplex default_seed(const ConstructionConfig& config, std::size_t depth) {
  if (config.t.size() < depth + 1) throw InvalidArgument("itinerary shorter than depth + 1");
  const auto h = proof_half_annulus_precise(config.R, config.t[depth], config.precision_bits);
  return {(h.r1 + h.r2) * 0.5, BigFloat(0.0, config.precision_bits)};
}

BranchChain construct_chain(const ExpMap& map, const ConstructionConfig& config, std::size_t depth,
                            std::uint64_t seed) {
  const auto rows = choose_rows(map, config, depth, seed);
  return construct_point(map, config, rows, default_seed(config, depth));
}

double proof_log_diameter(double R, const Itinerary& t, std::size_t n) {
  if (n < 2) throw InvalidArgument("diameter bound needs n >= 2");
  if (t.size() < n) throw InvalidArgument("itinerary shorter than n");
  if (!(R > 1.0)) throw InvalidArgument("R must exceed 1");
  double sum = 0.0;
  for (std::size_t m = 1; m < n; ++m) sum += static_cast<double>(t[m]);
  return std::log(2.0) + (1.0 - sum) * std::log(R);
}

double proof_diameter(double R, const Itinerary& t, std::size_t n) { return std::exp(proof_log_diameter(R, t, n)); }

double proof_log_delta(double R, double tau0, std::uint64_t t_n) {
  if (!(R > 1.0)) throw InvalidArgument("R must exceed 1");
  if (!(tau0 >= 1.0)) throw InvalidArgument("tau0 must be at least 1");
  const double log_r = std::log(R);
  return std::log(log_r) - std::log(4.0 * tau0 * tau0 * kPi) - (static_cast<double>(t_n) + 3.0) * log_r;
}

double proof_delta(double R, double tau0, std::uint64_t t_n) { return std::exp(proof_log_delta(R, tau0, t_n)); }

McMullenResult mcmullen_bound(const std::vector<double>& log_deltas, const std::vector<double>& log_diams,
                              std::size_t n) {
  if (log_deltas.size() < n + 1 || log_diams.size() < n + 1) throw InvalidArgument("sequences shorter than n + 1");
  for (std::size_t m = 0; m <= n; ++m) {
    if (!std::isfinite(log_deltas[m])) throw DomainError("Delta_m must be positive and finite for every m");
  }
  auto usable = [&](std::size_t m) {
    return std::isfinite(log_diams[m]) && log_diams[m] < 0.0 && log_deltas[m] < 0.0;
  };
  std::size_t burn_in = n + 1;
  for (std::size_t m = n + 1; m-- > 0;) {
    if (!usable(m)) break;
    burn_in = m;
  }
  if (burn_in > n) throw DomainError("log Delta_n or log d_n is non-negative at the final index");

  McMullenResult result;
  result.n = n;
  result.burn_in = burn_in;
  double numerator = 0.0;
  for (std::size_t m = 0; m <= n; ++m) {
    numerator += std::abs(log_deltas[m]);
    if (m >= burn_in) result.running.emplace_back(m, 2.0 - numerator / std::abs(log_diams[m]));
  }
  result.value = result.running.back().second;
  return result;
}

McMullenResult proof_mcmullen(double R, const Itinerary& t, double tau0, std::size_t n) {
  if (t.size() < n + 1) throw InvalidArgument("itinerary shorter than n + 1");
  std::vector<double> log_deltas(n + 1);
  std::vector<double> log_diams(n + 1, kNaN);
  const double log_r = std::log(R);
  double partial = 0.0;  // sum_{m=1}^{k-1} t_m
  for (std::size_t k = 0; k <= n; ++k) {
    log_deltas[k] = proof_log_delta(R, tau0, t[k]);
    if (k >= 2) {
      partial += static_cast<double>(t[k - 1]);
      log_diams[k] = std::log(2.0) + (1.0 - partial) * log_r;
    }
  }
  return mcmullen_bound(log_deltas, log_diams, n);
}

double pullback_distortion(const ExpMap& map, const PreciseHalfAnnulus& target,
                           const std::vector<mpz_class>& rows, long precision_bits) {
  const ExpMap work(map.lambda(), precision_bits);
  return std::exp(log_distortion(pullback_levels(work, target, rows)));
}

DistortionAudit distortion_chain_audit(const ExpMap& map, const BranchChain& chain,
                                       const ConstructionConfig& config) {
  const std::size_t n = chain.depth();
  const ExpMap work(map.lambda(), chain.precision_bits);
  const auto target = proof_half_annulus_precise(chain.R, chain.t_prefix[n], chain.precision_bits);
  const auto levels = pullback_levels(work, target, chain.rows);

  DistortionAudit audit;
  audit.depth = n;
  audit.bound = config.tau0 * chain.R;
  const double re_floor = std::log(2.0 / map.abs_lambda());
  for (std::size_t m = 0; m + 1 < n; ++m) {
    double min_re = std::numeric_limits<double>::infinity();
    double diameter = 0.0;
    const auto& pts = levels[m];
    for (std::size_t a = 0; a < pts.size(); ++a) {
      min_re = std::min(min_re, pts[a].re.to_double());
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        const BigComplex d(pts[a].re - pts[b].re, pts[a].im - pts[b].im);
        diameter = std::max(diameter, d.abs().to_double());
      }
    }
    audit.min_re.push_back(min_re);
    audit.diameters.push_back(diameter);
    if (!(min_re > re_floor)) throw HypothesisViolated("f^m(F) leaves Re z > log(2/|lambda|)", static_cast<std::ptrdiff_t>(m));
    if (!(diameter < config.s0)) throw HypothesisViolated("diam f^m(F) is not below s0", static_cast<std::ptrdiff_t>(m));
  }
  audit.distortion = std::exp(log_distortion(levels));
  audit.within_bound = audit.distortion <= audit.bound;
  return audit;
}

}  // namespace escapelab
