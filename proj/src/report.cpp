#include "escapelab/report.hpp"

#include <cmath>
#include <sstream>

namespace escapelab {

namespace {

// nlohmann writes non-finite doubles as null; keep that explicit for readers of the code.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json pairs(const std::vector<std::pair<std::size_t, double>>& v) {
  Json out = Json::array();
  for (const auto& [n, x] : v) out.push_back({n, number(x)});
  return out;
}

void flatten(const Json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
    return;
  }
  os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
}

}  // namespace

Json as_json(const RunManifest& m) {
  return {{"command_line", m.command_line},
          {"seed", m.seed},
          {"lambda", as_json(m.lambda)},
          {"precision_bits", m.precision_bits},
          {"version", m.version}};
}

std::string as_comment_lines(const RunManifest& m) {
  std::ostringstream os;
  const Json j = as_json(m);
  for (const auto& [k, v] : j.items()) os << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  return os.str();
}

Json as_json(std::complex<double> z) { return {number(z.real()), number(z.imag())}; }

Json as_json(const ItineraryReport& r) {
  return {{"indices", r.indices},
          {"nonzero_up_to", r.nonzero_up_to},
          {"admissible_failures", r.admissible_failures},
          {"eventually_admissible", r.eventually_admissible},
          {"slow_growth_ratios", pairs(r.slow_growth_ratios)},
          {"log_growth_ratios", pairs(r.log_growth_ratios)},
          {"escaping_trend",
           {{"increasing", r.escaping_trend.increasing},
            {"half_start", r.escaping_trend.half_start},
            {"quarter_start", r.escaping_trend.quarter_start},
            {"half_tail_min", r.escaping_trend.half_tail_min},
            {"quarter_tail_min", r.escaping_trend.quarter_tail_min}}}};
}

Json as_json(const BranchChain& c) {
  Json rows = Json::array();
  for (const mpz_class& k : c.rows) rows.push_back(k.fits_slong_p() ? Json(k.get_si()) : Json(k.get_str()));
  return {{"lambda", as_json(c.lambda)},
          {"R", c.R},
          {"t_prefix", c.t_prefix},
          {"rows", rows},
          {"seed", {c.seed.re.to_string(), c.seed.im.to_string()}},
          {"point_re", c.point.re.to_string()},
          {"point_im", c.point.im.to_string()},
          {"precision_bits", c.precision_bits},
          {"verified_steps", c.verified_steps},
          {"expansion_budget", c.expansion_budget}};
}

Json as_json(const EscapeCertificate& c) {
  return {{"category", to_string(c.category)},
          {"horizon", c.horizon},
          {"N", c.N},
          {"R", number(c.R)},
          {"C1", number(c.C1)},
          {"C2", number(c.C2)},
          {"p", c.p},
          {"C", number(c.C)},
          {"ell", c.ell},
          {"rule", c.rule},
          {"window_checked", {c.window_first, c.window_last}}};
}

Json as_json(const DensityHypotheses& h) {
  return {{"R1", h.R1}, {"R2", h.R2}, {"R3", h.R3}, {"R4", h.R4}, {"outer_radius_ok", h.outer_radius_ok},
          {"inner_target_ok", h.inner_target_ok}, {"ok", h.ok()}};
}

Json as_json(const DensityVerification& v) {
  return {{"hypotheses", as_json(v.hypotheses)},
          {"bound", number(v.bound)},
          {"exact_density", number(v.exact_density)},
          {"mc_density", v.monte_carlo.samples ? number(v.monte_carlo.density) : Json(nullptr)},
          {"mc_stderr", v.monte_carlo.samples ? number(v.monte_carlo.standard_error) : Json(nullptr)},
          {"mc_samples", v.monte_carlo.samples},
          {"component_count", v.component_count},
          {"min_component_count", number(v.min_component_count)},
          {"pass", v.pass}};
}

Json as_json(const DensitySweep& s) {
  Json failures = Json::array();
  for (const DensityTrial& t : s.trials) {
    if (t.result.pass) continue;
    Json f = as_json(t.result);
    f["lambda"] = as_json(t.lambda);
    failures.push_back(f);
  }
  return {{"seed", s.seed}, {"trials", s.trials.size()}, {"min_slack", number(s.min_slack)},
          {"failures", failures}, {"pass", s.pass}};
}

Json as_json(const DistortionAudit& a) {
  Json min_re = Json::array();
  Json diam = Json::array();
  for (double x : a.min_re) min_re.push_back(number(x));
  for (double x : a.diameters) diam.push_back(number(x));
  return {{"depth", a.depth}, {"distortion", number(a.distortion)}, {"bound", number(a.bound)},
          {"min_re", min_re}, {"diameters", diam}, {"within_bound", a.within_bound}};
}

Json as_json(const McMullenResult& r) {
  return {{"value", number(r.value)}, {"n", r.n}, {"burn_in", r.burn_in}};
}

Json as_json(const UpperBoundAudit& a) {
  Json rows = Json::array();
  for (const UpperBoundRow& row : a.rows) {
    rows.push_back({{"n", row.n}, {"log_q", number(row.log_q)}, {"condition_ratio", number(row.condition_ratio)},
                    {"alpha", number(row.alpha)}});
  }
  return {{"family", a.family},
          {"p", a.p},
          {"epsilon", a.epsilon},
          {"n_first", a.n_first},
          {"n_last", a.n_last},
          {"decreasing_from", a.decreasing_from},
          {"crossover_index", a.crossover_index ? Json(*a.crossover_index) : Json(nullptr)},
          {"rows", rows},
          {"pass", a.pass}};
}

Json as_json(const MinModulusReport& r) {
  return {{"c", r.c}, {"d", r.d}, {"r0", r.r0}, {"threshold", number(r.threshold)}, {"holds", r.holds},
          {"sampled_r", r.sampled_r}, {"found_rho", r.found_rho}};
}

Json as_json(const InvarianceReport& r) {
  return {{"original", as_json(r.original)},
          {"forward", as_json(r.forward)},
          {"preimage", as_json(r.preimage)},
          {"forward_ok", r.forward_ok},
          {"preimage_ok", r.preimage_ok},
          {"forward_shift", r.forward_shift},
          {"preimage_shift", r.preimage_shift},
          {"forward_c1_ratio", number(r.forward_c1_ratio)},
          {"forward_c2_ratio", number(r.forward_c2_ratio)},
          {"preimage_c1_ratio", number(r.preimage_c1_ratio)},
          {"preimage_c2_ratio", number(r.preimage_c2_ratio)},
          {"preimage_starts_small", r.preimage_starts_small},
          {"ok", r.ok()}};
}

Json as_json(const NestingCheck& c) {
  return {{"disjoint", c.disjoint}, {"nested", c.nested}, {"children_nonempty", c.children_nonempty},
          {"diameters_bounded", c.diameters_bounded}, {"ok", c.ok()}};
}

Json construction_audit(const ConstructionConfig& config, const McMullenResult& result, std::size_t max_rows) {
  Json per_depth = Json::array();
  const std::size_t count = result.running.size();
  const std::size_t stride = max_rows == 0 ? count + 1 : std::max<std::size_t>(1, (count + max_rows - 1) / max_rows);
  for (std::size_t i = 0; i < count; ++i) {
    if (i % stride != 0 && i + 1 != count) continue;
    const auto [n, value] = result.running[i];
    const double log_delta = proof_log_delta(config.R, config.tau0, config.t.at(n));
    const double log_diam = n >= 2 ? proof_log_diameter(config.R, config.t, n) : std::nan("");
    per_depth.push_back({{"n", n},
                         {"delta", number(std::exp(log_delta))},
                         {"log_delta", number(log_delta)},
                         {"diam", number(std::exp(log_diam))},
                         {"log_diam", number(log_diam)},
                         {"bound_value", number(value)}});
  }
  return {{"config", {{"R", config.R}, {"tau0", config.tau0}, {"s0", config.s0}, {"depth", result.n}}},
          {"per_depth", per_depth},
          {"verdicts", {{"value", number(result.value)}, {"burn_in", result.burn_in}}}};
}

std::string as_text(const Json& j) {
  std::ostringstream os;
  flatten(j, "", os);
  return os.str();
}

}  // namespace escapelab
