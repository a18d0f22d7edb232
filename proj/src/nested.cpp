#include "escapelab/nested.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "escapelab/errors.hpp"

namespace escapelab {

namespace {

// Annular sector {rho1 <= |w| <= rho2, theta1 <= arg w <= theta2} with |theta| < pi.
struct PolarBox {
  BigFloat rho1, rho2, theta1, theta2;
};

PolarBox enclose(const BoundingBox& r) {
  if (r.re_min.sign() <= 0) throw DomainError("pulled-back box leaves the right half-plane");
  const long p = r.re_min.precision();
  const BigFloat zero(0.0, p);
  BigFloat gap_y = zero;
  if (r.im_min > zero) gap_y = r.im_min;
  if (r.im_max < zero) gap_y = -r.im_max;
  const BigFloat far_y = max(abs(r.im_min), abs(r.im_max));
  return {hypot(r.re_min, gap_y), hypot(r.re_max, far_y),
          atan2(r.im_min, r.im_min.sign() < 0 ? r.re_min : r.re_max),
          atan2(r.im_max, r.im_max.sign() > 0 ? r.re_min : r.re_max)};
}

BoundingBox pull_back(const ExpMap& work, const PolarBox& w, const mpz_class& row) {
  const long p = std::max(w.rho2.precision(), work.precision_bits());
  const BigFloat shift = BigFloat::pi(p) * BigFloat(mpz_class(2 * row), p) - work.precise_arg_lambda();
  return {log(w.rho1) - work.precise_log_abs_lambda(), log(w.rho2) - work.precise_log_abs_lambda(),
          w.theta1 + shift, w.theta2 + shift};
}

std::string key(const mpz_class& k) { return k.get_str(); }

}  // namespace

double BoundingBox::diameter() const { return hypot(re_max - re_min, im_max - im_min).to_double(); }

bool BoundingBox::contains(const BoundingBox& other, double tolerance) const {
  const double slack = tolerance * std::max(1.0, diameter());
  return other.re_min >= re_min - slack && other.re_max <= re_max + slack && other.im_min >= im_min - slack &&
         other.im_max <= im_max + slack;
}

BoundingBox pullback_box(const ExpMap& map, const ConstructionConfig& config, const std::vector<mpz_class>& rows) {
  const std::size_t n = rows.size();
  if (config.t.size() < n + 1) throw InvalidArgument("itinerary shorter than depth + 1");
  const long p = config.precision_bits;
  const auto h = proof_half_annulus_precise(config.R, config.t[n], p);
  if (n == 0) return {BigFloat(0.0, p), h.r2, -h.r2, h.r2};

  const ExpMap work(map.lambda(), p);
  const BigFloat half_pi = BigFloat::pi(p) * 0.5;
  PolarBox sector{h.r1, h.r2, -half_pi, half_pi};
  BoundingBox box = pull_back(work, sector, rows[n - 1]);
  for (std::size_t j = n - 1; j-- > 0;) box = pull_back(work, enclose(box), rows[j]);
  return box;
}

std::vector<NestedLevel> build_nested_levels(const ExpMap& map, const ConstructionConfig& config,
                                             std::size_t depth, std::size_t children_per_set) {
  if (children_per_set == 0) throw InvalidArgument("children_per_set must be positive");
  if (config.t.size() < depth + 1) throw InvalidArgument("itinerary shorter than depth + 1");
  const long p = config.precision_bits;
  const ExpMap work(map.lambda(), p);

  auto level_info = [&](std::size_t n) {
    NestedLevel level;
    level.depth = n;
    level.log_delta = proof_log_delta(config.R, config.tau0, config.t[n]);
    level.log_diam_bound = n >= 2 ? proof_log_diameter(config.R, config.t, n) : std::numeric_limits<double>::quiet_NaN();
    return level;
  };

  std::vector<NestedLevel> levels;
  levels.push_back(level_info(0));
  levels[0].sets.push_back({{}, 0, pullback_box(map, config, {})});

  for (std::size_t n = 0; n < depth; ++n) {
    const auto source = proof_half_annulus_precise(config.R, config.t[n], p);
    const auto target = proof_half_annulus_precise(config.R, config.t[n + 1], p);
    const RowRuns runs = contained_rows(work, source, target);
    const mpz_class total = runs.count();
    if (total == 0) throw RowNotContained(n);

    std::vector<mpz_class> picks;
    const mpz_class wanted = std::min<mpz_class>(total, mpz_class(static_cast<unsigned long>(children_per_set)));
    const mpz_class upper = runs.upper_empty() ? mpz_class(0) : mpz_class(runs.upper_last - runs.upper_first + 1);
    for (mpz_class i = 0; i < wanted; ++i) {
      const mpz_class index = i * total / wanted;
      picks.push_back(index < upper ? mpz_class(runs.upper_first + index) : mpz_class(runs.lower_first + (index - upper)));
    }

    NestedLevel next = level_info(n + 1);
    const auto& parents = levels[n].sets;
    for (std::size_t parent = 0; parent < parents.size(); ++parent) {
      for (const mpz_class& k : picks) {
        NestedSet child;
        child.rows = parents[parent].rows;
        child.rows.push_back(k);
        child.parent = parent;
        child.box = pullback_box(map, config, child.rows);
        next.sets.push_back(std::move(child));
      }
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

NestingCheck check_nesting(const std::vector<NestedLevel>& levels, const Itinerary& t, double tolerance) {
  NestingCheck check;
  for (std::size_t n = 1; n < levels.size(); ++n) {
    const auto& parents = levels[n - 1].sets;
    std::vector<std::set<std::string>> seen(parents.size());
    for (const NestedSet& child : levels[n].sets) {
      const NestedSet& parent = parents.at(child.parent);
      const bool prefix = child.rows.size() == parent.rows.size() + 1 &&
                          std::equal(parent.rows.begin(), parent.rows.end(), child.rows.begin());
      if (!prefix || !seen[child.parent].insert(key(child.rows.back())).second) check.disjoint = false;
      if (!parent.box.contains(child.box, tolerance)) check.nested = false;
    }
    for (const auto& s : seen) {
      if (s.empty()) check.children_nonempty = false;
    }
    if (n >= 2 && t.size() > n && t[n - 1] >= 2) {
      const double bound = std::exp(levels[n].log_diam_bound);
      for (const NestedSet& set : levels[n].sets) {
        if (!(set.box.diameter() <= bound)) check.diameters_bounded = false;
      }
    }
  }
  return check;
}

}  // namespace escapelab
