#include "escapelab/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "escapelab/errors.hpp"

namespace escapelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::pair<Category, const char*>, 7> kNames{{
    {Category::BoundedUnknown, "BoundedUnknown"},
    {Category::Slow, "Slow"},
    {Category::UniformSlow, "UniformSlow"},
    {Category::FlatSlow, "FlatSlow"},
    {Category::Moderate, "Moderate"},
    {Category::FlatModerate, "FlatModerate"},
    {Category::Fast, "Fast"},
}};

// log log m, -infinity for m <= 1.
double log_log(const TowerValue& m) {
  const double l = m.log_double();
  if (std::isfinite(l)) return l > 0.0 ? std::log(l) : -kInf;
  if (l < 0.0) return -kInf;
  return m.log().log_double();
}

// mu(r) = M(r, f) / 2 on towers.
TowerValue mu(const ExpMap& map, const TowerValue& r) {
  const double shift = map.log_abs_lambda() - std::log(2.0);
  const double v = r.to_double();
  if (std::isfinite(v)) return TowerValue::from_log(v + shift);
  return r.add(shift).exp();
}

class Window {
 public:
  Window(const OrbitRecord& orbit, std::size_t first) : orbit_(orbit), first_(first), last_(orbit.size() - 1) {}

  std::size_t first() const { return first_; }
  std::size_t last() const { return last_; }
  double L(std::size_t n) const { return orbit_[n].log_modulus; }

  template <typename Pred>
  bool all(Pred pred) const {
    for (std::size_t n = first_; n <= last_; ++n) {
      if (!pred(n)) return false;
    }
    return true;
  }

  // Every iterate reaches the escape radius and the late minimum exceeds the overall one.
  bool escaping(double escape_radius) const {
    const double floor = std::log(escape_radius);
    if (!all([&](std::size_t n) { return L(n) >= floor; })) return false;
    const std::size_t mid = first_ + (last_ - first_ + 1) / 2;
    double overall = kInf;
    double late = kInf;
    for (std::size_t n = first_; n <= last_; ++n) {
      overall = std::min(overall, L(n));
      if (n >= mid) late = std::min(late, L(n));
    }
    return late > overall;
  }

  bool slow(double log_r) const {
    return all([&](std::size_t n) { return L(n) <= static_cast<double>(n) * log_r; });
  }

  // n^{log^{+p} n} <= |f^n|
  bool flat_lower(unsigned p) const {
    return all([&](std::size_t n) {
      const double x = static_cast<double>(n);
      return std::log(x) * log_plus_p(x, p) <= L(n);
    });
  }

  // e^{n log^{+p} n} <= |f^n| <= exp(e^{pn})
  bool flat_moderate(unsigned p) const {
    return all([&](std::size_t n) {
      const double x = static_cast<double>(n);
      return x * log_plus_p(x, p) <= L(n) && log_log(orbit_[n].magnitude) <= p * x;
    });
  }

  double moderate_constant() const {
    double c = -kInf;
    for (std::size_t n = first_; n <= last_; ++n) c = std::max(c, log_log(orbit_[n].magnitude) / static_cast<double>(n));
    return c;
  }

 private:
  const OrbitRecord& orbit_;
  std::size_t first_;
  std::size_t last_;
};

EscapeCertificate base_certificate(Category c, const OrbitRecord& orbit, std::size_t N) {
  EscapeCertificate cert;
  cert.category = c;
  cert.horizon = orbit.size() - 1;
  cert.N = N;
  cert.window_first = N;
  cert.window_last = orbit.size() - 1;
  return cert;
}

std::vector<double> merged_grid(const ClassifyParams& params) {
  std::set<double> all;
  for (double r : ClassifyParams{}.radius_grid()) all.insert(r);
  for (double r : params.radii) all.insert(r);
  return {all.begin(), all.end()};
}

std::optional<EscapeCertificate> fast_by_cone(const ExpMap& map, const OrbitRecord& orbit, std::size_t N,
                                              const ClassifyParams& params) {
  const OrbitSample& s = orbit[N];
  if (!s.point || !s.argument_reliable) return std::nullopt;
  if (s.point->real() < params.cone_min_re || !(s.point->real() > 0.5 * std::abs(*s.point))) return std::nullopt;
  try {
    if (!ku_fast_check(map, orbit, N)) return std::nullopt;
  } catch (const ConePreconditionFailed&) {
    return std::nullopt;
  }
  EscapeCertificate cert = base_certificate(Category::Fast, orbit, N);
  cert.rule = "cone";
  return cert;
}

// |f^{n+ell}(z)| >= M^n(R, f) for 0 <= n <= horizon - ell.
std::optional<EscapeCertificate> fast_by_tower(const ExpMap& map, const OrbitRecord& orbit, unsigned ell,
                                               const ClassifyParams& params) {
  const std::size_t horizon = orbit.size() - 1;
  if (ell + 1 > horizon) return std::nullopt;
  const double base = std::isnan(params.fast_base) ? map.default_base_radius() : params.fast_base;
  TowerValue bound = TowerValue::from_real(base);
  for (std::size_t n = 0; n + ell <= horizon; ++n) {
    if (!(orbit[n + ell].magnitude >= bound)) return std::nullopt;
    bound = map.max_modulus_tower(bound);
  }
  EscapeCertificate cert = base_certificate(Category::Fast, orbit, 0);
  cert.R = base;
  cert.ell = ell;
  cert.rule = "tower";
  return cert;
}

}  // namespace

std::string to_string(Category c) {
  for (const auto& [cat, name] : kNames) {
    if (cat == c) return name;
  }
  return "BoundedUnknown";
}

std::optional<Category> category_from_string(const std::string& name) {
  for (const auto& [cat, n] : kNames) {
    if (name == n) return cat;
  }
  return std::nullopt;
}

unsigned char category_gray(Category c) {
  switch (c) {
    case Category::BoundedUnknown:
      return 0;
    case Category::Moderate:
      return 40;
    case Category::FlatModerate:
      return 80;
    case Category::Slow:
      return 120;
    case Category::FlatSlow:
      return 160;
    case Category::UniformSlow:
      return 200;
    case Category::Fast:
      return 255;
  }
  return 0;
}

std::vector<double> ClassifyParams::radius_grid() const {
  if (!radii.empty()) {
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  }
  std::vector<double> grid;
  for (int j = 1; j <= 80; ++j) grid.push_back(std::exp(j / 4.0));
  return grid;
}

OrbitRecord record_orbit(const ExpMap& map, std::complex<double> z, std::size_t n) {
  const double reliable_log = (53 - 20) * std::log(2.0);
  OrbitRecord out;
  out.reserve(n + 1);
  for (const SafePoint& p : map.orbit(z, n)) {
    OrbitSample s;
    s.magnitude = p.magnitude();
    s.log_modulus = p.log_modulus();
    if (!p.is_tower()) s.point = p.point();
    s.argument_reliable = s.point && (out.empty() || (out.back().point && out.back().log_modulus <= reliable_log));
    out.push_back(s);
  }
  return out;
}

OrbitRecord record_orbit(const ExpMap& map, const BigComplex& z, std::size_t n) {
  const double reliable_log = static_cast<double>(map.precision_bits() - 20) * std::log(2.0);
  OrbitRecord out;
  out.reserve(n + 1);
  for (const PrecisePoint& p : map.orbit(z, n)) {
    OrbitSample s;
    if (const auto* c = std::get_if<BigComplex>(&p)) {
      s.log_modulus = log(c->abs()).to_double();
      s.magnitude = TowerValue::from_log(s.log_modulus);
      s.point = c->to_complex();
    } else {
      s.magnitude = std::get<TowerValue>(p);
      s.log_modulus = s.magnitude.log_double();
    }
    s.argument_reliable = s.point && (out.empty() || (out.back().point && out.back().log_modulus <= reliable_log));
    out.push_back(s);
  }
  return out;
}

std::optional<EscapeCertificate> validate_as(const ExpMap& map, const OrbitRecord& orbit, Category category,
                                             std::size_t N, const ClassifyParams& params) {
  if (orbit.empty()) throw InvalidArgument("empty orbit");
  const std::size_t horizon = orbit.size() - 1;
  if (N >= horizon) return std::nullopt;
  const Window w(orbit, N);

  switch (category) {
    case Category::BoundedUnknown:
      return base_certificate(category, orbit, N);

    case Category::Fast: {
      if (auto c = fast_by_cone(map, orbit, N, params)) return c;
      for (unsigned ell = 0; ell <= params.max_ell; ++ell) {
        if (auto c = fast_by_tower(map, orbit, ell, params)) return c;
      }
      return std::nullopt;
    }

    case Category::Slow:
    case Category::FlatSlow: {
      if (!w.escaping(params.escape_radius)) return std::nullopt;
      if (category == Category::FlatSlow && N == 0) return std::nullopt;
      for (double R : params.radius_grid()) {
        if (!w.slow(std::log(R))) continue;
        EscapeCertificate cert = base_certificate(category, orbit, N);
        cert.R = R;
        if (category == Category::Slow) return cert;
        for (unsigned p = 1; p <= params.max_p; ++p) {
          if (w.flat_lower(p)) {
            cert.p = p;
            return cert;
          }
        }
      }
      return std::nullopt;
    }

    case Category::UniformSlow: {
      if (N == 0 || !w.escaping(params.escape_radius)) return std::nullopt;
      for (double R : params.radius_grid()) {
        const double log_r = std::log(R);
        double lo = kInf;
        double hi = -kInf;
        for (std::size_t n = N; n <= horizon; ++n) {
          const double c = w.L(n) - static_cast<double>(n) * log_r;
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi) || hi - lo > params.spread_factor * log_r) continue;
        // Cumulative: the same window must also certify FlatSlow for some base.
        ClassifyParams wider = params;
        wider.radii = merged_grid(params);
        const auto flat = validate_as(map, orbit, Category::FlatSlow, N, wider);
        if (!flat) return std::nullopt;
        EscapeCertificate cert = base_certificate(category, orbit, N);
        cert.R = R;
        cert.C1 = std::exp(lo);
        cert.C2 = std::exp(hi);
        cert.p = flat->p;
        return cert;
      }
      return std::nullopt;
    }

    case Category::Moderate: {
      if (N == 0 || !w.escaping(params.escape_radius)) return std::nullopt;
      const double c = w.moderate_constant();
      if (!std::isfinite(c) || c > params.max_C) return std::nullopt;
      EscapeCertificate cert = base_certificate(category, orbit, N);
      cert.C = c;
      return cert;
    }

    case Category::FlatModerate: {
      if (N == 0 || !w.escaping(params.escape_radius)) return std::nullopt;
      for (unsigned p = 1; p <= params.max_p; ++p) {
        if (w.flat_moderate(p)) {
          EscapeCertificate cert = base_certificate(category, orbit, N);
          cert.p = p;
          cert.C = w.moderate_constant();
          return cert;
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

EscapeCertificate classify(const ExpMap& map, const OrbitRecord& orbit, const ClassifyParams& params) {
  if (orbit.size() < 2) throw InvalidArgument("horizon must be at least 1");
  const std::size_t horizon = orbit.size() - 1;

  for (std::size_t N = 0; N <= horizon / 2; ++N) {
    if (auto c = fast_by_cone(map, orbit, N, params)) return *c;
  }
  for (unsigned ell = 0; ell <= params.max_ell; ++ell) {
    if (auto c = fast_by_tower(map, orbit, ell, params)) return *c;
  }
  for (Category cat : {Category::UniformSlow, Category::FlatSlow, Category::Slow, Category::FlatModerate,
                       Category::Moderate}) {
    for (std::size_t N = 0; N <= horizon / 2; ++N) {
      if (auto c = validate_as(map, orbit, cat, N, params)) return *c;
    }
  }
  return base_certificate(Category::BoundedUnknown, orbit, 0);
}

EscapeCertificate classify(const ExpMap& map, std::complex<double> z, std::size_t horizon,
                           const ClassifyParams& params) {
  if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
  return classify(map, record_orbit(map, z, horizon), params);
}

EscapeCertificate classify(const ExpMap& map, const BigComplex& z, std::size_t horizon,
                           const ClassifyParams& params) {
  if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
  return classify(map, record_orbit(map, z, horizon), params);
}

bool ku_cone_test(const ExpMap& map, std::complex<double> z) {
  const double modulus = std::abs(z);
  if (!(z.real() > 0.5 * modulus)) return false;
  // log|f(z)| = log|lambda| + Re z against log M(|z|/2) = log|lambda| + |z|/2.
  if (!(map.log_abs_lambda() + z.real() > map.log_abs_lambda() + 0.5 * modulus)) {
    throw DomainError("cone point violates |f(z)| > M(|z|/2)");
  }
  return true;
}

bool ku_fast_check(const ExpMap& map, const OrbitRecord& orbit, std::size_t N) {
  if (N >= orbit.size()) throw InvalidArgument("N exceeds the horizon");
  for (std::size_t n = N; n < orbit.size(); ++n) {
    const OrbitSample& s = orbit[n];
    if (s.point && s.argument_reliable && !(s.point->real() > 0.5 * std::abs(*s.point))) {
      throw ConePreconditionFailed(n);
    }
  }
  TowerValue bound = orbit[N].magnitude.scale(0.5);
  for (std::size_t n = N; n < orbit.size(); ++n) {
    if (!(orbit[n].magnitude > bound)) return false;
    bound = mu(map, bound);
  }
  return true;
}

bool ku_fast_check(const ExpMap& map, std::complex<double> z, std::size_t N, std::size_t horizon) {
  if (N > horizon) throw InvalidArgument("N exceeds the horizon");
  return ku_fast_check(map, record_orbit(map, z, horizon), N);
}

MinModulusReport min_modulus_condition(const ExpMap& map, double c, double d, double r0, std::size_t samples) {
  if (!(d > 1.0)) throw InvalidArgument("d must exceed 1");
  if (!(r0 >= 0.0)) throw InvalidArgument("r0 must be non-negative");
  if (samples == 0) throw InvalidArgument("samples must be positive");
  MinModulusReport report;
  report.c = c;
  report.d = d;
  report.r0 = r0;
  if (!(c > 0.0)) {
    report.threshold = kInf;
    return report;
  }
  report.threshold = map.log_abs_lambda() - std::log(c);
  // The interval (r, d r) reaches past the threshold for all r >= r0 iff it does at r0;
  // at r0 = 0 the degenerate interval is read as the point rho = 0.
  report.holds = r0 > 0.0 ? d * r0 > report.threshold : report.threshold <= 0.0;
  if (!report.holds) return report;

  double r = r0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double lo = std::max(r, report.threshold);
    const double rho = r == 0.0 ? 0.0 : 0.5 * (lo + d * r);
    report.sampled_r.push_back(r);
    report.found_rho.push_back(rho);
    r = r == 0.0 ? 1.0 : r * d;
  }
  return report;
}

InvarianceReport invariance_check(const ExpMap& map, const BigComplex& z, const EscapeCertificate& cert,
                                  const mpz_class& k, const ClassifyParams& params) {
  if (cert.category != Category::UniformSlow) throw InvalidArgument("invariance check needs a UniformSlow certificate");
  if (cert.horizon < 3) throw InvalidArgument("invariance check needs horizon >= 3");
  ClassifyParams same_r = params;
  same_r.radii = {cert.R};

  InvarianceReport report;
  report.original = cert;
  const std::size_t H = cert.horizon;

  const PrecisePoint image = map.apply(PrecisePoint(z));
  if (const auto* fz = std::get_if<BigComplex>(&image)) {
    report.forward = classify(map, *fz, H - 1, same_r);
    report.forward_ok = report.forward.category == Category::UniformSlow && report.forward.R == cert.R;
    report.forward_shift = static_cast<long>(report.forward.N) - (static_cast<long>(cert.N) - 1);
    report.forward_c1_ratio = report.forward.C1 / (cert.C1 * cert.R);
    report.forward_c2_ratio = report.forward.C2 / (cert.C2 * cert.R);
  }

  const BigComplex w = map.inverse_branch(z, k);
  report.preimage_starts_small = w.abs() < BigFloat(cert.R, map.precision_bits());
  report.preimage = classify(map, w, H + 1, same_r);
  report.preimage_ok = report.preimage.category == Category::UniformSlow && report.preimage.R == cert.R;
  report.preimage_shift = static_cast<long>(report.preimage.N) - (static_cast<long>(cert.N) + 1);
  report.preimage_c1_ratio = report.preimage.C1 * cert.R / cert.C1;
  report.preimage_c2_ratio = report.preimage.C2 * cert.R / cert.C2;
  return report;
}

}  // namespace escapelab
