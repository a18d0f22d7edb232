#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "escapelab/geometry.hpp"
#include "escapelab/itinerary.hpp"

namespace escapelab {

/// Lower/upper growth sequences g_{p,n} <= h_{p,n}, described through their logarithms so
/// that double-exponential members stay finite.
struct GrowthFamily {
  enum class Kind {
    /// g = n^{log^{+p} n}, h = e^{pn}
    PowerLog,
    /// g = e^{n log^{+p} n}, h = exp(e^{pn})
    ExpPowerLog,
    /// g = R^{t_n}, h = R^{t_n + 1}
    Itinerary,
    /// g = h = e^c
    Constant,
  };

  Kind kind = Kind::PowerLog;
  unsigned p = 1;
  double R = 20.0;
  Itinerary t;
  double log_constant = 1.0;

  static GrowthFamily power_log(unsigned p);
  static GrowthFamily exp_power_log(unsigned p);
  static GrowthFamily itinerary(double R, Itinerary t);
  static GrowthFamily constant(double log_value);

  double log_g(std::size_t n) const;
  /// log h_n; +infinity once it leaves the double range.
  double log_h(std::size_t n) const;
  double log_log_h(std::size_t n) const;
  std::string name() const;
};

/// W_{n,m} = A(e^{m-1} g_n, e^m g_n) intersected with {Re z >= c1}.
struct CoverRegion {
  ClosedAnnulus annulus;
  double c1;
  bool contains(std::complex<double> z) const { return z.real() >= c1 && annulus.contains(z); }
};

CoverRegion upper_cover_sets(double g_n, unsigned m, double c1);

struct UpperBoundRow {
  std::size_t n;
  /// log q_n with q_n = g_n^{-epsilon} log h_{n+1}.
  double log_q;
  /// log g_n / log+ log h_{n+1}.
  double condition_ratio;
  /// floor(log(h_n / g_n)) + 1, +infinity when out of range.
  double alpha;
};

struct UpperBoundAudit {
  std::string family;
  unsigned p = 1;
  double epsilon = 0.0;
  std::size_t n_first = 0;
  std::size_t n_last = 0;
  std::vector<UpperBoundRow> rows;
  /// First n from which log q_n decreases strictly to the end of the window.
  std::size_t decreasing_from = 0;
  /// First n with q_n < 1.
  std::optional<std::size_t> crossover_index;
  /// q_n decreases over the second half of the window and ends below 1.
  bool pass = false;
};

/// Throws FamilyViolation if h_n < g_n somewhere in [n_first, n_last + 1].
UpperBoundAudit upper_bound_audit(const GrowthFamily& family, double epsilon, std::size_t n_first,
                                  std::size_t n_last);

struct DensityTrial {
  std::complex<double> lambda;
  double R1, R2, R3, R4;
  DensityVerification result;
};

struct DensitySweep {
  std::uint64_t seed = 0;
  std::vector<DensityTrial> trials;
  /// Smallest exact density minus bound.
  double min_slack = 0.0;
  bool pass = true;
};

/// Random tuples with |lambda| in [0.1, 10], R2 <= 1e4, satisfying the density hypotheses.
DensitySweep density_sweep(std::size_t trials, std::uint64_t seed, std::uint64_t mc_samples = 0);

}  // namespace escapelab
