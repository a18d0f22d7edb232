#include "escapelab/itinerary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "escapelab/errors.hpp"

namespace escapelab {

namespace {

std::uint64_t index_from_log(double log_modulus, double log_base) {
  if (!std::isfinite(log_modulus)) return kIndexSaturated;
  const double q = std::floor(log_modulus / log_base);
  if (q >= 9.2e18) return kIndexSaturated;
  return static_cast<std::uint64_t>(q);
}

}  // namespace

AnnularPartition::AnnularPartition(double base) : base_(base), log_base_(std::log(base)) {
  if (!(base > 1.0) || !std::isfinite(base)) throw InvalidArgument("partition base must exceed 1");
}

std::uint64_t annular_index(const AnnularPartition& partition, double modulus) {
  if (std::isnan(modulus) || modulus < 0.0) throw DomainError("modulus must be non-negative");
  const double base = partition.base();
  if (modulus < base) return 0;
  if (std::isinf(modulus)) return kIndexSaturated;
  std::uint64_t k = index_from_log(std::log(modulus), partition.log_base());
  // The log quotient can land one off at exact powers; settle against R^k directly.
  while (modulus >= std::pow(base, static_cast<double>(k + 1))) ++k;
  while (k > 1 && modulus < std::pow(base, static_cast<double>(k))) --k;
  return std::max<std::uint64_t>(k, 1);
}

std::uint64_t annular_index(const AnnularPartition& partition, const SafePoint& z) {
  if (!z.is_tower()) return annular_index(partition, std::abs(z.point()));
  const TowerValue m = z.magnitude();
  if (m.representable()) return annular_index(partition, m.to_double());
  return index_from_log(m.log_double(), partition.log_base());
}

std::uint64_t annular_index(const AnnularPartition& partition, const PrecisePoint& z) {
  if (const auto* t = std::get_if<TowerValue>(&z)) {
    return annular_index(partition, SafePoint::tower(*t));
  }
  const auto& p = std::get<BigComplex>(z);
  const BigFloat modulus = p.abs();
  const BigFloat base(partition.base(), p.precision());
  if (modulus < base) return 0;
  std::uint64_t k = index_from_log((log(modulus) / log(base)).to_double(), 1.0);
  while (modulus >= pow(base, static_cast<long>(k + 1))) ++k;
  while (k > 1 && modulus < pow(base, static_cast<long>(k))) --k;
  return std::max<std::uint64_t>(k, 1);
}

ItineraryReport check_predicates(const Itinerary& t) {
  ItineraryReport report;
  report.indices = t;
  const std::size_t len = t.size();

  while (report.nonzero_up_to < len && t[report.nonzero_up_to] != 0) ++report.nonzero_up_to;

  for (std::size_t n = 0; n + 1 < len; ++n) {
    // e^{t_n} > t_{n+1}  <=>  t_n > log t_{n+1}
    const bool ok = t[n + 1] == 0 || static_cast<double>(t[n]) > std::log(static_cast<double>(t[n + 1]));
    if (!ok) report.admissible_failures.push_back(n);
  }
  report.eventually_admissible =
      report.admissible_failures.empty() || report.admissible_failures.back() < len / 2;

  double partial = 0.0;  // sum_{k=1}^{n-1} t_k
  for (std::size_t n = 2; n < len; ++n) {
    partial += static_cast<double>(t[n - 1]);
    if (partial > 0.0) report.slow_growth_ratios.emplace_back(n, static_cast<double>(t[n]) / partial);
  }
  for (std::size_t n = 1; n < len; ++n) {
    if (t[n] > 0) {
      report.log_growth_ratios.emplace_back(n, std::log(static_cast<double>(t[n])) / static_cast<double>(n));
    }
  }

  if (len >= 4) {
    auto& trend = report.escaping_trend;
    trend.half_start = len / 2;
    trend.quarter_start = len - (len - trend.half_start) / 2;
    trend.half_tail_min = *std::min_element(t.begin() + static_cast<std::ptrdiff_t>(trend.half_start), t.end());
    trend.quarter_tail_min =
        *std::min_element(t.begin() + static_cast<std::ptrdiff_t>(trend.quarter_start), t.end());
    trend.increasing = trend.half_tail_min < trend.quarter_tail_min;
  }
  return report;
}

ItineraryReport compute_itinerary(const ExpMap& map, const AnnularPartition& partition,
                                  std::complex<double> z0, std::size_t n) {
  Itinerary t;
  t.reserve(n + 1);
  for (const SafePoint& p : map.orbit(z0, n)) t.push_back(annular_index(partition, p));
  return check_predicates(t);
}

Itinerary seq_linear(std::size_t n) {
  Itinerary t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = k < 2 ? 1 : k - 1;
  return t;
}

Itinerary seq_square(std::size_t n) {
  Itinerary t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = (k + 1) * (k + 1);
  return t;
}

namespace {

// Infimum of {R : g(R') > 0 for all R' >= R}, for g increasing on [monotone_from, inf).
template <typename G>
double eventual_root(G g, double monotone_from) {
  double lo = monotone_from;
  if (g(lo) > 0.0) return lo;
  double hi = std::max(2.0 * lo, 2.0);
  while (!(g(hi) > 0.0)) hi *= 2.0;
  constexpr int kSamples = 64;
  for (int i = 0; i < kSamples; ++i) {
    const double a = lo + (hi - lo) * i / kSamples;
    const double b = lo + (hi - lo) * (i + 1) / kSamples;
    if (g(b) < g(a)) throw DomainError("constraint is not monotone on the bisection bracket");
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

double compute_R0(const ExpMap& map, double s0) {
  if (!(s0 > 0.0)) throw InvalidArgument("s0 must be positive");
  const double abs_lambda = map.abs_lambda();
  const double product_bound = 16.0 * std::numbers::pi + 2.0;

  // R(R-1) increases for R > 1/2; R - 3 log(R^2/|lambda|) - 1 is convex with minimum at 6.
  const double quadratic = eventual_root([&](double r) { return r * (r - 1.0) - product_bound; }, 0.5);
  const double logarithmic = eventual_root(
      [&](double r) { return r - 3.0 * std::log(r * r / abs_lambda) - 1.0; }, 6.0);
  const double convex_min_ok = (6.0 - 3.0 * std::log(36.0 / abs_lambda) - 1.0) > 0.0 ? 1.0 : logarithmic;

  return std::max({std::numbers::e, abs_lambda, 2.0 / s0, quadratic, convex_min_ok});
}

Itinerary read_itinerary(std::istream& in) {
  Itinerary t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string_view token(line.data() + first, last - first + 1);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw InvalidArgument("itinerary line " + std::to_string(line_no) + " is not a non-negative integer");
    }
    t.push_back(value);
  }
  return t;
}

void write_itinerary(std::ostream& out, const Itinerary& t) {
  for (std::uint64_t v : t) out << v << '\n';
}

}  // namespace escapelab
