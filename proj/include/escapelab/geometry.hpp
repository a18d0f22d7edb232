#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "escapelab/expmap.hpp"

namespace escapelab {

/// H(r1, r2) = {r1 <= |z| <= r2, Re z >= 0}.
struct HalfAnnulus {
  double r1;
  double r2;

  HalfAnnulus(double inner, double outer);
  double area() const;
  bool contains(std::complex<double> z) const;
};

/// A(r1, r2) = {r1 <= |z| <= r2}.
struct ClosedAnnulus {
  double r1;
  double r2;

  ClosedAnnulus(double inner, double outer);
  double area() const;
  bool contains(std::complex<double> z) const;
};

/// One component of f^{-1}(H(R3, R4)):
/// log(R3/|lambda|) <= Re z <= log(R4/|lambda|), (2n - 1/2) pi <= Im z + arg lambda <= (2n + 1/2) pi.
struct PreimageRectangle {
  double re_min;
  double re_max;
  double im_min;
  double im_max;
  long long row;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  double area() const { return width() * height(); }
  bool contains(std::complex<double> z) const;
};

struct RowRange {
  long long first;
  long long last;
};

/// Closed-region containment of the box [re_min, re_max] x [im_min, im_max] in
/// H(r1, r2): re_min >= 0, farthest corner within r2 and nearest point at least r1.
/// Works for double and BigFloat alike; compares squared moduli.
template <typename T>
bool box_inside_half_annulus(const T& r1, const T& r2, const T& re_min, const T& re_max,
                             const T& im_min, const T& im_max) {
  const T zero = re_min * 0;
  if (re_min < zero) return false;
  auto abs_max = [](const T& a, const T& b) {
    const T aa = a < a * 0 ? -a : a;
    const T bb = b < b * 0 ? -b : b;
    return aa < bb ? bb : aa;
  };
  // Distance from 0 to [lo, hi] along one axis.
  auto gap = [&zero](const T& lo, const T& hi) {
    if (lo > zero) return lo;
    if (hi < zero) return T(-hi);
    return zero;
  };
  const T far_x = abs_max(re_min, re_max);
  const T far_y = abs_max(im_min, im_max);
  if (far_x * far_x + far_y * far_y > r2 * r2) return false;
  const T near_x = gap(re_min, re_max);
  const T near_y = gap(im_min, im_max);
  return !(near_x * near_x + near_y * near_y < r1 * r1);
}

std::vector<PreimageRectangle> preimage_components(const ExpMap& map, const HalfAnnulus& target,
                                                   RowRange rows);

/// Rows whose rectangle can meet the disc |z| <= source.r2.
RowRange candidate_rows(const ExpMap& map, const HalfAnnulus& source);

bool rectangle_inside(const HalfAnnulus& source, const PreimageRectangle& rect);
std::vector<PreimageRectangle> components_inside(const HalfAnnulus& source,
                                                 const std::vector<PreimageRectangle>& rects);

double exact_density(const std::vector<PreimageRectangle>& inner, const HalfAnnulus& source);

struct MonteCarloEstimate {
  double density = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned lanes = 1;
};

/// Uniform samples from the source by rejection from [0, r2] x [-r2, r2]. Work is split
/// over a fixed number of lanes with sub-seeds derived from the seed, so the result does
/// not depend on scheduling.
MonteCarloEstimate monte_carlo_density(const std::vector<PreimageRectangle>& inner,
                                       const HalfAnnulus& source, std::uint64_t samples,
                                       std::uint64_t seed, unsigned lanes = 4);

struct DensityResult {
  double exact;
  MonteCarloEstimate monte_carlo;
};

DensityResult density(const std::vector<PreimageRectangle>& inner, const HalfAnnulus& source,
                      std::uint64_t samples, std::uint64_t seed, unsigned lanes = 4);

struct DensityHypotheses {
  double R1, R2, R3, R4;
  /// R2 > max{2 R1, R1 + 16 pi, 3 log(R4/|lambda|)}
  bool outer_radius_ok;
  /// R3 > |lambda|
  bool inner_target_ok;
  bool ok() const { return outer_radius_ok && inner_target_ok; }
  std::string describe() const;
};

DensityHypotheses check_density_hypotheses(const ExpMap& map, const HalfAnnulus& source,
                                           const HalfAnnulus& target);

/// log(R4/R3) / (2 pi R2). Throws HypothesisViolated when a hypothesis fails.
double density_lower_bound(const ExpMap& map, const HalfAnnulus& source, const HalfAnnulus& target);

/// r2 / r1 for 0 < r1 <= r2.
double distortion_exact(double r1, double r2);

struct DensityVerification {
  DensityHypotheses hypotheses;
  double bound;
  double exact_density;
  MonteCarloEstimate monte_carlo;
  std::size_t component_count;
  double min_component_count;
  bool pass;
};

/// Full check for one (source, target) pair: hypotheses, bound, exact and sampled
/// densities, component count against (R2 - R1)/(2 pi).
DensityVerification verify_density(const ExpMap& map, const HalfAnnulus& source,
                                   const HalfAnnulus& target, std::uint64_t mc_samples,
                                   std::uint64_t seed, unsigned lanes = 4);

}  // namespace escapelab
