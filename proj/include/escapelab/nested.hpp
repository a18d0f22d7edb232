#pragma once

#include <cstddef>
#include <cstdint>
#include <gmpxx.h>
#include <vector>

#include "escapelab/bigfloat.hpp"
#include "escapelab/construction.hpp"

namespace escapelab {

/// Axis-parallel enclosure of a depth-n set in the z-plane.
struct BoundingBox {
  BigFloat re_min, re_max, im_min, im_max;
  double diameter() const;
  bool contains(const BoundingBox& other, double tolerance) const;
};

/// A depth-n set F with f^n(F) = H_{t_n}, stored symbolically by its branch rows.
struct NestedSet {
  std::vector<mpz_class> rows;
  std::size_t parent = 0;
  BoundingBox box;
};

struct NestedLevel {
  std::size_t depth = 0;
  std::vector<NestedSet> sets;
  /// log Delta_n and log d_n; log d_n is NaN for n < 2.
  double log_delta = 0.0;
  double log_diam_bound = 0.0;
};

/// Bounding box of the set reached through rows (rows[0] applied last), obtained by
/// propagating a modulus/argument enclosure of H_{t_n} backwards.
BoundingBox pullback_box(const ExpMap& map, const ConstructionConfig& config, const std::vector<mpz_class>& rows);

/// Levels 0..depth of the nested collection, keeping at most children_per_set children of
/// every set (spread evenly over the contained rows).
std::vector<NestedLevel> build_nested_levels(const ExpMap& map, const ConstructionConfig& config,
                                             std::size_t depth, std::size_t children_per_set);

struct NestingCheck {
  /// Sibling sets use distinct rows, so their images under f^(n+1) are disjoint.
  bool disjoint = true;
  /// Every child box lies in its parent box.
  bool nested = true;
  /// Every non-final set has at least one child.
  bool children_nonempty = true;
  /// Box diameters stay below d_n wherever t_{n-1} >= 2.
  bool diameters_bounded = true;
  bool ok() const { return disjoint && nested && children_nonempty && diameters_bounded; }
};

NestingCheck check_nesting(const std::vector<NestedLevel>& levels, const Itinerary& t, double tolerance = 1e-9);

}  // namespace escapelab
