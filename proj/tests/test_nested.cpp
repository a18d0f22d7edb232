#include <doctest.h>

#include <cmath>

#include "escapelab/errors.hpp"
#include "escapelab/nested.hpp"

using namespace escapelab;

namespace {

ConstructionConfig linear_config(std::size_t depth) {
  ConstructionConfig c;
  c.t = seq_linear(depth + 1);
  return c;
}

}  // namespace

TEST_CASE("depth-zero box is the bounding half-square of H_{t_0}") {
  const ConstructionConfig config = linear_config(2);
  const BoundingBox box = pullback_box(ExpMap(1.0), config, {});
  CHECK(box.re_min.is_zero());
  CHECK(box.re_max.to_double() == doctest::Approx(399.0));
  CHECK(box.im_min.to_double() == doctest::Approx(-399.0));
  CHECK(box.im_max.to_double() == doctest::Approx(399.0));
}

TEST_CASE("nested levels satisfy the structural conditions") {
  const ExpMap map(1.0);
  const ConstructionConfig config = linear_config(4);
  const auto levels = build_nested_levels(map, config, 4, 3);
  REQUIRE(levels.size() == 5);
  std::size_t expected = 1;
  for (const auto& level : levels) {
    CHECK(level.sets.size() == expected);
    expected *= 3;
  }
  const NestingCheck check = check_nesting(levels, config.t);
  CHECK(check.disjoint);
  CHECK(check.nested);
  CHECK(check.children_nonempty);
  CHECK(check.diameters_bounded);
  CHECK(check.ok());

  CHECK(std::isnan(levels[1].log_diam_bound));
  CHECK(levels[3].log_diam_bound == doctest::Approx(proof_log_diameter(20.0, config.t, 3)));
  CHECK(levels[2].log_delta == doctest::Approx(proof_log_delta(20.0, 2.0, config.t[2])));
}

TEST_CASE("box diameters shrink with depth") {
  const auto levels = build_nested_levels(ExpMap(1.0), linear_config(5), 5, 2);
  for (std::size_t n = 1; n < levels.size(); ++n) {
    for (const auto& set : levels[n].sets) {
      CHECK(set.box.diameter() < levels[n - 1].sets[set.parent].box.diameter());
    }
  }
}

TEST_CASE("boxes contain the constructed points with the same rows") {
  const ExpMap map(1.0);
  const ConstructionConfig config = linear_config(4);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const BranchChain chain = construct_chain(map, config, 4, seed);
    for (std::size_t n = 0; n <= 4; ++n) {
      const std::vector<mpz_class> prefix(chain.rows.begin(), chain.rows.begin() + static_cast<long>(n));
      const BoundingBox box = pullback_box(map, config, prefix);
      CHECK(chain.point.re >= box.re_min);
      CHECK(chain.point.re <= box.re_max);
      CHECK(chain.point.im >= box.im_min);
      CHECK(chain.point.im <= box.im_max);
    }
  }
}

TEST_CASE("tampered levels are detected") {
  auto levels = build_nested_levels(ExpMap(1.0), linear_config(2), 2, 2);
  auto duplicated = levels;
  duplicated[2].sets[1].rows.back() = duplicated[2].sets[0].rows.back();
  CHECK_FALSE(check_nesting(duplicated, seq_linear(3)).disjoint);

  auto moved = levels;
  moved[2].sets[0].box.re_max = moved[2].sets[0].box.re_max + 1000.0;
  CHECK_FALSE(check_nesting(moved, seq_linear(3)).nested);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(build_nested_levels(ExpMap(1.0), linear_config(2), 2, 0), InvalidArgument);
  CHECK_THROWS_AS(build_nested_levels(ExpMap(1.0), linear_config(2), 5, 2), InvalidArgument);
}
