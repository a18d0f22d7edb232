#pragma once

#include <complex>
#include <cstddef>
#include <gmpxx.h>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "escapelab/bigfloat.hpp"
#include "escapelab/expmap.hpp"
#include "escapelab/tower.hpp"

namespace escapelab {

enum class Category { BoundedUnknown, Slow, UniformSlow, FlatSlow, Moderate, FlatModerate, Fast };

std::string to_string(Category c);
std::optional<Category> category_from_string(const std::string& name);
/// Gray level used for the category in grid images.
unsigned char category_gray(Category c);

struct ClassifyParams {
  /// Candidate bases R; empty means e^{j/4}, j = 1..80.
  std::vector<double> radii;
  unsigned max_p = 10;
  unsigned max_ell = 5;
  /// Every iterate of an escaping window must reach at least this modulus.
  double escape_radius = 10.0;
  /// UniformSlow requires log(C2/C1) <= spread_factor * log R.
  double spread_factor = 3.0;
  /// Largest accepted constant C for the Moderate bound exp(e^{Cn}).
  double max_C = 10.0;
  /// Least real part at which the cone criterion is tried.
  double cone_min_re = 50.0;
  /// Base R of M^n(R, f) for the tower comparison; NaN means escape_threshold + 1.
  double fast_base = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> radius_grid() const;
};

/// One orbit entry. The cartesian point is kept while it is finite; its argument is
/// reliable while the previous iterate stays below 2^(precision - 20) in modulus.
struct OrbitSample {
  TowerValue magnitude;
  /// log|f^n(z)|, +infinity beyond the double range.
  double log_modulus = 0.0;
  std::optional<std::complex<double>> point;
  bool argument_reliable = false;
};
using OrbitRecord = std::vector<OrbitSample>;

OrbitRecord record_orbit(const ExpMap& map, std::complex<double> z, std::size_t n);
OrbitRecord record_orbit(const ExpMap& map, const BigComplex& z, std::size_t n);

/// Finite-horizon witness: the category's defining inequalities held for every index in
/// [window_first, window_last]. Inapplicable parameters are NaN.
struct EscapeCertificate {
  Category category = Category::BoundedUnknown;
  std::size_t horizon = 0;
  std::size_t N = 0;
  double R = std::numeric_limits<double>::quiet_NaN();
  double C1 = std::numeric_limits<double>::quiet_NaN();
  double C2 = std::numeric_limits<double>::quiet_NaN();
  unsigned p = 0;
  double C = std::numeric_limits<double>::quiet_NaN();
  unsigned ell = 0;
  std::size_t window_first = 0;
  std::size_t window_last = 0;
  /// "cone" or "tower" for Fast, empty otherwise.
  std::string rule;
};

/// Searches the parameters of one category on the window [N, horizon].
std::optional<EscapeCertificate> validate_as(const ExpMap& map, const OrbitRecord& orbit, Category category,
                                             std::size_t N, const ClassifyParams& params = {});

/// Most specific category, trying Fast, UniformSlow, FlatSlow, Slow, FlatModerate,
/// Moderate in that order, each with N ascending over 0..horizon/2.
EscapeCertificate classify(const ExpMap& map, const OrbitRecord& orbit, const ClassifyParams& params = {});
EscapeCertificate classify(const ExpMap& map, std::complex<double> z, std::size_t horizon,
                           const ClassifyParams& params = {});
/// Orbit computed at the map's precision.
EscapeCertificate classify(const ExpMap& map, const BigComplex& z, std::size_t horizon,
                           const ClassifyParams& params = {});

/// Re z > |z|/2. For points in the cone also checks |f(z)| > M(|z|/2, f).
bool ku_cone_test(const ExpMap& map, std::complex<double> z);

/// |f^n(f^N z)| > mu^n(|f^N z| / 2) for 0 <= n <= horizon - N, with mu(r) = M(r, f)/2,
/// compared in tower arithmetic. Throws ConePreconditionFailed(n) when an iterate with a
/// reliable argument lies outside the cone; iterates past that point are magnitude-only.
bool ku_fast_check(const ExpMap& map, std::complex<double> z, std::size_t N, std::size_t horizon);
bool ku_fast_check(const ExpMap& map, const OrbitRecord& orbit, std::size_t N);

struct MinModulusReport {
  double c = 0.0;
  double d = 0.0;
  double r0 = 0.0;
  /// log(|lambda| / c): m(rho) <= c exactly when rho >= threshold.
  double threshold = 0.0;
  bool holds = false;
  std::vector<double> sampled_r;
  std::vector<double> found_rho;
};

/// For every r >= r0 some rho in (r, d r) has m(rho, f) <= c, decided in closed form
/// from m(rho) = |lambda| e^{-rho}; witnesses at geometric sample radii.
MinModulusReport min_modulus_condition(const ExpMap& map, double c, double d, double r0, std::size_t samples);

struct InvarianceReport {
  EscapeCertificate original;
  EscapeCertificate forward;
  EscapeCertificate preimage;
  bool forward_ok = false;
  bool preimage_ok = false;
  /// forward.N - (original.N - 1) and preimage.N - (original.N + 1).
  long forward_shift = 0;
  long preimage_shift = 0;
  /// Fitted constants over the expected ones: forward.C / (original.C R) and
  /// preimage.C R / original.C.
  double forward_c1_ratio = 0.0;
  double forward_c2_ratio = 0.0;
  double preimage_c1_ratio = 0.0;
  double preimage_c2_ratio = 0.0;
  /// Whether the preimage's first iterate lies in A_0-range (|w| < R); allowed because
  /// the bounds are only required from N on.
  bool preimage_starts_small = false;
  bool ok() const { return forward_ok && preimage_ok; }
};

/// Complete invariance of the UniformSlow window: f(z) at horizon H - 1 and
/// inverse_branch(z, k) at horizon H + 1 must both certify UniformSlow with the same R.
/// Throws InvalidArgument unless cert is UniformSlow with horizon >= 3.
InvarianceReport invariance_check(const ExpMap& map, const BigComplex& z, const EscapeCertificate& cert,
                                  const mpz_class& k, const ClassifyParams& params = {});

}  // namespace escapelab
