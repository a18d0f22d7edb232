#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "escapelab/expmap.hpp"

namespace escapelab {

/// Annuli A_0 = {|z| < R}, A_n = {R^n <= |z| < R^(n+1)} for n >= 1.
class AnnularPartition {
 public:
  explicit AnnularPartition(double base);
  double base() const { return base_; }
  double log_base() const { return log_base_; }

 private:
  double base_;
  double log_base_;
};

using Itinerary = std::vector<std::uint64_t>;

/// Index reported for magnitudes whose annulus index exceeds 64 bits.
inline constexpr std::uint64_t kIndexSaturated = UINT64_MAX;

std::uint64_t annular_index(const AnnularPartition& partition, double modulus);
std::uint64_t annular_index(const AnnularPartition& partition, const SafePoint& z);
std::uint64_t annular_index(const AnnularPartition& partition, const PrecisePoint& z);

/// Finite-horizon stand-in for "t_n -> infinity": compares the minimum of the second half
/// of the window with the minimum of its last quarter. Never a claim about the full sequence.
struct EscapingTrend {
  bool increasing = false;
  std::size_t half_start = 0;
  std::size_t quarter_start = 0;
  std::uint64_t half_tail_min = 0;
  std::uint64_t quarter_tail_min = 0;
};

struct ItineraryReport {
  Itinerary indices;
  /// Number of leading nonzero entries.
  std::size_t nonzero_up_to = 0;
  /// Indices n with e^{t_n} <= t_{n+1}.
  std::vector<std::size_t> admissible_failures;
  /// No admissibility failure in the second half of the window.
  bool eventually_admissible = true;
  /// (n, t_n / sum_{k=1}^{n-1} t_k) for every n whose sum is positive.
  std::vector<std::pair<std::size_t, double>> slow_growth_ratios;
  /// (n, log t_n / n), the weaker growth diagnostic log t_n = o(n).
  std::vector<std::pair<std::size_t, double>> log_growth_ratios;
  EscapingTrend escaping_trend;
};

ItineraryReport check_predicates(const Itinerary& t);

ItineraryReport compute_itinerary(const ExpMap& map, const AnnularPartition& partition,
                                  std::complex<double> z0, std::size_t n);

/// 1 1 1 2 3 ... (k-1) ...
Itinerary seq_linear(std::size_t n);
/// 1 4 9 ... (k+1)^2 ...
Itinerary seq_square(std::size_t n);

/// Smallest base R such that every R' >= R satisfies R' > max{e, |lambda|, 2/s0},
/// R'(R'-1) > 16 pi + 2 and R' > 3 log(R'^2/|lambda|) + 1 (infimum, to 1e-9).
double compute_R0(const ExpMap& map, double s0);

/// One non-negative decimal integer per line; blank lines and lines starting with '#'
/// are skipped.
Itinerary read_itinerary(std::istream& in);
void write_itinerary(std::ostream& out, const Itinerary& t);

}  // namespace escapelab
