#include "escapelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "escapelab/errors.hpp"

namespace escapelab {

namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

HalfAnnulus::HalfAnnulus(double inner, double outer) : r1(inner), r2(outer) {
  if (!(inner > 0.0)) throw InvalidArgument("inner radius must be positive");
  if (!(inner < outer) || !std::isfinite(outer)) throw DegenerateTarget("half-annulus needs r1 < r2");
}

double HalfAnnulus::area() const { return 0.5 * kPi * (r2 * r2 - r1 * r1); }

bool HalfAnnulus::contains(std::complex<double> z) const {
  const double m = std::abs(z);
  return z.real() >= 0.0 && m >= r1 && m <= r2;
}

ClosedAnnulus::ClosedAnnulus(double inner, double outer) : r1(inner), r2(outer) {
  if (!(inner >= 0.0)) throw InvalidArgument("inner radius must be non-negative");
  if (!(inner < outer) || !std::isfinite(outer)) throw DegenerateTarget("annulus needs r1 < r2");
}

double ClosedAnnulus::area() const { return kPi * (r2 * r2 - r1 * r1); }

bool ClosedAnnulus::contains(std::complex<double> z) const {
  const double m = std::abs(z);
  return m >= r1 && m <= r2;
}

bool PreimageRectangle::contains(std::complex<double> z) const {
  return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
}

std::vector<PreimageRectangle> preimage_components(const ExpMap& map, const HalfAnnulus& target,
                                                   RowRange rows) {
  const double re_min = std::log(target.r1) - map.log_abs_lambda();
  const double re_max = std::log(target.r2) - map.log_abs_lambda();
  const double arg = map.arg_lambda();
  std::vector<PreimageRectangle> out;
  for (long long n = rows.first; n <= rows.last; ++n) {
    const double centre = 2.0 * kPi * static_cast<double>(n);
    out.push_back({re_min, re_max, centre - 0.5 * kPi - arg, centre + 0.5 * kPi - arg, n});
  }
  return out;
}

RowRange candidate_rows(const ExpMap& map, const HalfAnnulus& source) {
  const double arg = map.arg_lambda();
  const double lo = std::ceil((-source.r2 + arg) / (2.0 * kPi) - 0.25);
  const double hi = std::floor((source.r2 + arg) / (2.0 * kPi) + 0.25);
  if (std::max(std::abs(lo), std::abs(hi)) > 1e15) {
    throw InvalidArgument("row range too large for enumeration");
  }
  return {static_cast<long long>(lo), static_cast<long long>(hi)};
}

bool rectangle_inside(const HalfAnnulus& source, const PreimageRectangle& rect) {
  return box_inside_half_annulus(source.r1, source.r2, rect.re_min, rect.re_max, rect.im_min, rect.im_max);
}

std::vector<PreimageRectangle> components_inside(const HalfAnnulus& source,
                                                 const std::vector<PreimageRectangle>& rects) {
  std::vector<PreimageRectangle> out;
  std::copy_if(rects.begin(), rects.end(), std::back_inserter(out),
               [&](const PreimageRectangle& r) { return rectangle_inside(source, r); });
  return out;
}

double exact_density(const std::vector<PreimageRectangle>& inner, const HalfAnnulus& source) {
  double covered = 0.0;
  for (const auto& r : inner) covered += r.area();
  return covered / source.area();
}

MonteCarloEstimate monte_carlo_density(const std::vector<PreimageRectangle>& inner,
                                       const HalfAnnulus& source, std::uint64_t samples,
                                       std::uint64_t seed, unsigned lanes) {
  if (lanes == 0) throw InvalidArgument("lanes must be positive");
  std::vector<PreimageRectangle> sorted = inner;
  std::sort(sorted.begin(), sorted.end(),
            [](const PreimageRectangle& a, const PreimageRectangle& b) { return a.im_min < b.im_min; });

  auto hit = [&sorted](std::complex<double> z) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), z.imag(),
                               [](double y, const PreimageRectangle& r) { return y < r.im_min; });
    if (it == sorted.begin()) return false;
    return std::prev(it)->contains(z);
  };

  std::vector<std::uint64_t> hits(lanes, 0);
  std::vector<std::uint64_t> quota(lanes, samples / lanes);
  for (unsigned i = 0; i < samples % lanes; ++i) ++quota[i];

  auto run_lane = [&](unsigned lane) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), lane};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> ux(0.0, source.r2);
    std::uniform_real_distribution<double> uy(-source.r2, source.r2);
    const double r1sq = source.r1 * source.r1;
    const double r2sq = source.r2 * source.r2;
    std::uint64_t accepted = 0;
    std::uint64_t count = 0;
    while (accepted < quota[lane]) {
      const std::complex<double> z(ux(rng), uy(rng));
      const double m = std::norm(z);
      if (m < r1sq || m > r2sq) continue;
      ++accepted;
      if (hit(z)) ++count;
    }
    hits[lane] = count;
  };

  std::vector<std::thread> workers;
  for (unsigned lane = 1; lane < lanes; ++lane) workers.emplace_back(run_lane, lane);
  run_lane(0);
  for (auto& w : workers) w.join();

  MonteCarloEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.lanes = lanes;
  if (samples == 0) return est;
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  const double n = static_cast<double>(samples);
  est.density = static_cast<double>(total) / n;
  est.standard_error = std::sqrt(est.density * (1.0 - est.density) / n);
  return est;
}

DensityResult density(const std::vector<PreimageRectangle>& inner, const HalfAnnulus& source,
                      std::uint64_t samples, std::uint64_t seed, unsigned lanes) {
  return {exact_density(inner, source), monte_carlo_density(inner, source, samples, seed, lanes)};
}

std::string DensityHypotheses::describe() const {
  std::ostringstream os;
  if (!outer_radius_ok) os << "R2 > max{2 R1, R1 + 16 pi, 3 log(R4/|lambda|)} fails";
  if (!inner_target_ok) {
    if (!outer_radius_ok) os << "; ";
    os << "R3 > |lambda| fails";
  }
  return os.str();
}

DensityHypotheses check_density_hypotheses(const ExpMap& map, const HalfAnnulus& source,
                                           const HalfAnnulus& target) {
  DensityHypotheses h{source.r1, source.r2, target.r1, target.r2, false, false};
  const double needed = std::max({2.0 * h.R1, h.R1 + 16.0 * kPi, 3.0 * (std::log(h.R4) - map.log_abs_lambda())});
  h.outer_radius_ok = h.R2 > needed;
  h.inner_target_ok = h.R3 > map.abs_lambda();
  return h;
}

double density_lower_bound(const ExpMap& map, const HalfAnnulus& source, const HalfAnnulus& target) {
  const DensityHypotheses h = check_density_hypotheses(map, source, target);
  if (!h.ok()) throw HypothesisViolated(h.describe());
  return std::log(target.r2 / target.r1) / (2.0 * kPi * source.r2);
}

double distortion_exact(double r1, double r2) {
  if (!(r1 > 0.0) || !(r1 <= r2)) throw InvalidArgument("distortion needs 0 < r1 <= r2");
  return r2 / r1;
}

DensityVerification verify_density(const ExpMap& map, const HalfAnnulus& source,
                                   const HalfAnnulus& target, std::uint64_t mc_samples,
                                   std::uint64_t seed, unsigned lanes) {
  DensityVerification v{};
  v.hypotheses = check_density_hypotheses(map, source, target);
  const auto inside = components_inside(source, preimage_components(map, target, candidate_rows(map, source)));
  v.component_count = inside.size();
  v.min_component_count = (source.r2 - source.r1) / (2.0 * kPi);
  v.exact_density = exact_density(inside, source);
  v.monte_carlo = monte_carlo_density(inside, source, mc_samples, seed, lanes);
  v.bound = v.hypotheses.ok() ? std::log(target.r2 / target.r1) / (2.0 * kPi * source.r2) : std::nan("");
  v.pass = v.hypotheses.ok() && v.exact_density >= v.bound &&
           static_cast<double>(v.component_count) >= v.min_component_count;
  if (mc_samples > 0) {
    const double tolerance = 4.0 * std::max(v.monte_carlo.standard_error, 1.0 / static_cast<double>(mc_samples));
    v.pass = v.pass && std::abs(v.monte_carlo.density - v.exact_density) <= tolerance;
  }
  return v;
}

}  // namespace escapelab
