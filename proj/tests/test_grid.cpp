#include <doctest.h>

#include <limits>
#include <stdexcept>

#include "mtdist/branches.hpp"
#include "mtdist/grid.hpp"
#include "support/builders.hpp"

using mtd::MergeTree;
using mtd::ScalarGrid;

TEST_SUITE_BEGIN("grid");

TEST_CASE("monotone ramp yields a single edge") {
  const ScalarGrid g{.width = 4, .height = 1, .values = {0.0, 1.0, 2.0, 3.0}};
  const MergeTree t = mtd::split_tree(g);
  CHECK(t.size() == 2);
  CHECK(t.nodes[t.root].scalar == doctest::Approx(0.0));
  CHECK(mtd::scalar_range(t) == doctest::Approx(3.0));
}

TEST_CASE("two maxima merge at the highest valley") {
  const ScalarGrid g{.width = 5, .height = 1, .values = {0.0, 2.0, 1.0, 3.0, 0.5}};
  const MergeTree t = mtd::split_tree(g);
  CHECK(mtdtest::trees_isomorphic(t, mtdtest::tree_of({0.0, 1.0, 2.0, 3.0}, {-1, 0, 1, 1})));
}

TEST_CASE("join tree stores negated scalars") {
  const ScalarGrid g{.width = 4, .height = 1, .values = {0.0, 1.0, 2.0, 3.0}};
  const MergeTree t = mtd::join_tree(g);
  CHECK(t.kind == mtd::TreeKind::join);
  CHECK(t.size() == 2);
  // The field minimum 0 is the join tree's leaf; stored split-oriented.
  CHECK(t.nodes[t.root].scalar == doctest::Approx(-3.0));
  CHECK(mtd::scalar_range(t) == doctest::Approx(3.0));
}

TEST_CASE("two-peak 2D field produces the expected saddle") {
  ScalarGrid g{.width = 3,
               .height = 3,
               .values = {0.1, 0.2, 0.3,  //
                          0.2, 1.0, 0.4,  //
                          0.3, 0.4, 2.0}};
  CHECK(mtd::count_local_maxima(g) == 2);
  const MergeTree t = mtd::split_tree(g);
  CHECK(mtdtest::trees_isomorphic(t, mtdtest::tree_of({0.1, 0.4, 1.0, 2.0}, {-1, 0, 1, 1})));
}

TEST_CASE("plateaus are ordered by vertex index, not duplicated") {
  // A flat top: one leaf despite five equal values.
  const ScalarGrid g{.width = 5, .height = 1, .values = {1.0, 1.0, 1.0, 1.0, 0.0}};
  CHECK(mtd::count_local_maxima(g) == 1);
  const MergeTree t = mtd::split_tree(g);
  CHECK(t.size() == 2);
}

TEST_CASE("leaf count equals the tie-broken local maxima count") {
  mtd::Rng rng(23);
  for (int i = 0; i < 30; ++i) {
    ScalarGrid g;
    g.width = 2 + static_cast<int>(rng.below(9));
    g.height = 2 + static_cast<int>(rng.below(9));
    g.values.resize(static_cast<std::size_t>(g.width) * g.height);
    for (double& v : g.values) v = rng.uniform(0.0, 1.0);
    // A unique corner minimum keeps the global min off a cut vertex, which
    // would otherwise degenerate the root edge (documented limitation).
    g.values[0] = -1.0;
    const MergeTree t = mtd::split_tree(g);
    CHECK(mtd::validate_merge_tree(t).empty());
    CHECK(static_cast<int>(mtd::leaves_of(t).size()) == mtd::count_local_maxima(g));

    // Node scalars are grid values, never interpolated.
    for (const mtd::TreeNode& nd : t.nodes) {
      bool found = false;
      for (double v : g.values) found = found || v == nd.scalar;
      CHECK(found);
    }
  }
}

TEST_CASE("split and join trees of random fields are valid and consistent") {
  mtd::Rng rng(29);
  for (int i = 0; i < 20; ++i) {
    ScalarGrid g;
    g.width = 3 + static_cast<int>(rng.below(6));
    g.height = 3 + static_cast<int>(rng.below(6));
    g.values.resize(static_cast<std::size_t>(g.width) * g.height);
    for (double& v : g.values) v = rng.uniform(-2.0, 2.0);
    g.values.back() = 3.0;  // unique corner maximum, join root stays generic
    const MergeTree join = mtd::join_tree(g);
    CHECK(mtd::validate_merge_tree(join).empty());

    ScalarGrid neg = g;
    for (double& v : neg.values) v = -v;
    CHECK(static_cast<int>(mtd::leaves_of(join).size()) == mtd::count_local_maxima(neg));
  }
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(mtd::split_tree(ScalarGrid{}), std::invalid_argument);
  CHECK_THROWS_AS(mtd::split_tree(ScalarGrid{.width = 1, .height = 1, .values = {1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(mtd::split_tree(ScalarGrid{.width = 2, .height = 2, .values = {1.0, 2.0}}),
                  std::invalid_argument);
  ScalarGrid bad{.width = 2, .height = 1, .values = {0.0, 1.0}};
  bad.values[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(mtd::split_tree(bad), std::invalid_argument);
}

TEST_SUITE_END();
