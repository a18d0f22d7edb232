#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <gmpxx.h>
#include <utility>
#include <vector>

#include "escapelab/bigfloat.hpp"
#include "escapelab/expmap.hpp"
#include "escapelab/geometry.hpp"
#include "escapelab/itinerary.hpp"

namespace escapelab {

struct ConstructionConfig {
  double R = 20.0;
  Itinerary t;
  double tau0 = 2.0;
  double s0 = 0.1;
  long precision_bits = 256;
  /// Skip the R >= R0 requirement.
  bool force = false;

  /// Throws InvalidArgument on tau0 <= 1, s0 outside (0, 1/8), or R below compute_R0.
  void validate(const ExpMap& map) const;
};

/// H(R^n + 1, R^(n+1) - 1). Throws Degenerate when the radii do not increase.
HalfAnnulus proof_half_annulus(double R, std::uint64_t n);

/// The same half-annulus with radii at the given precision, for indices whose radii
/// exceed the double range.
struct PreciseHalfAnnulus {
  BigFloat r1;
  BigFloat r2;
  bool contains(const BigComplex& z) const;
};
PreciseHalfAnnulus proof_half_annulus_precise(double R, std::uint64_t n, long precision_bits);

/// Closed rectangle of one inverse branch, at extended precision.
struct PreciseRectangle {
  BigFloat re_min, re_max, im_min, im_max;
  mpz_class row;
};
PreciseRectangle precise_preimage(const ExpMap& map, const PreciseHalfAnnulus& target, const mpz_class& row);
bool rectangle_inside(const PreciseHalfAnnulus& source, const PreciseRectangle& rect);

/// Rows k whose preimage rectangle of target lies in source, as up to two contiguous
/// runs (upper and lower half-plane). Empty runs have first > last.
struct RowRuns {
  mpz_class upper_first, upper_last;
  mpz_class lower_first, lower_last;
  bool upper_empty() const { return upper_first > upper_last; }
  bool lower_empty() const { return lower_first > lower_last; }
  mpz_class count() const;
};
RowRuns contained_rows(const ExpMap& map, const PreciseHalfAnnulus& source, const PreciseHalfAnnulus& target);

struct BranchChain {
  std::complex<double> lambda;
  double R = 0.0;
  Itinerary t_prefix;
  std::vector<mpz_class> rows;
  BigComplex seed{53};
  BigComplex point{53};
  /// z_0 .. z_N of the backward chain.
  std::vector<BigComplex> backward;
  std::vector<bool> residence;
  long precision_bits = 53;
  /// Largest m with f^i(point) in H_{t_i} for all i <= m.
  std::size_t verified_steps = 0;
  /// Largest m with sum_{j=1}^{m} t_j log R <= precision_bits log 2.
  std::size_t expansion_budget = 0;

  std::size_t depth() const { return rows.size(); }
};

std::size_t expansion_budget(double R, const Itinerary& t, long precision_bits);

/// One row per step, drawn uniformly from the contained rows. Throws RowNotContained(j)
/// when step j has none.
std::vector<mpz_class> choose_rows(const ExpMap& map, const ConstructionConfig& config, std::size_t depth,
                                   std::uint64_t seed);

/// Backward composition z_N = seed, z_j = inverse_branch(z_{j+1}, rows[j]), then forward
/// re-verification of z_0. Throws RowNotContained(j) or BranchEscapesRegion(j).
BranchChain construct_point(const ExpMap& map, const ConstructionConfig& config,
                            const std::vector<mpz_class>& rows, const BigComplex& seed);

/// Midpoint of H_{t_N} on the positive real axis.
BigComplex default_seed(const ConstructionConfig& config, std::size_t depth);

/// choose_rows + default_seed + construct_point.
BranchChain construct_chain(const ExpMap& map, const ConstructionConfig& config, std::size_t depth,
                            std::uint64_t seed);

/// log d_n with d_n = 2 R^(1 - sum_{m=1}^{n-1} t_m); n >= 2.
double proof_log_diameter(double R, const Itinerary& t, std::size_t n);
double proof_diameter(double R, const Itinerary& t, std::size_t n);
/// log Delta_n with Delta_n = log R / (4 tau0^2 pi R^(t_n + 3)).
double proof_log_delta(double R, double tau0, std::uint64_t t_n);
double proof_delta(double R, double tau0, std::uint64_t t_n);

struct McMullenResult {
  double value = 0.0;
  std::size_t n = 0;
  /// First index from which every Delta_m and d_m is in (0, 1).
  std::size_t burn_in = 0;
  /// (n', value at n') for burn_in <= n' <= n.
  std::vector<std::pair<std::size_t, double>> running;
};

/// 2 - sum_{m=0}^{n} |log Delta_m| / |log d_n| from log-form inputs (index m of each
/// vector holds log Delta_m and log d_m; non-finite entries mark undefined values).
McMullenResult mcmullen_bound(const std::vector<double>& log_deltas, const std::vector<double>& log_diams,
                              std::size_t n);

/// mcmullen_bound fed with proof_log_delta / proof_log_diameter.
McMullenResult proof_mcmullen(double R, const Itinerary& t, double tau0, std::size_t n);

struct DistortionAudit {
  std::size_t depth = 0;
  double distortion = 1.0;
  double bound = 0.0;
  /// Per step m < depth - 1: least real part and sampled diameter of f^m(F).
  std::vector<double> min_re;
  std::vector<double> diameters;
  bool within_bound = true;
};

/// max / min of |(f^n)'| over 16 boundary points of target pulled back through the rows
/// (rows[0] is applied last). Returns 1 for an empty row list.
double pullback_distortion(const ExpMap& map, const PreciseHalfAnnulus& target,
                           const std::vector<mpz_class>& rows, long precision_bits);

/// Distortion of f^n on the chain's depth-0 set with the bound tau0 R. Throws
/// HypothesisViolated(step) when f^m(F), m < n - 1, leaves Re > log(2/|lambda|) or
/// has sampled diameter >= s0.
DistortionAudit distortion_chain_audit(const ExpMap& map, const BranchChain& chain,
                                       const ConstructionConfig& config);

}  // namespace escapelab
