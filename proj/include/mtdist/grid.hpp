#pragma once

#include <cstddef>
#include <vector>

#include "mtdist/merge_tree.hpp"

namespace mtd {

// Row-major 2D scalar field; vertex (x, y) lives at index y * width + x.
struct ScalarGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Throws invalid_argument unless dimensions are positive, the value count
// matches, every value is finite, and the grid has at least two vertices
// (a single vertex cannot form an edge).
void require_valid(const ScalarGrid& g, const char* context);

// Superlevel-set merge tree of the field under 4-connectivity: one leaf per
// tie-broken local maximum, one inner node per merge saddle, plus a root at
// the global minimum vertex. Ties are broken by vertex index, so equal
// values never produce degenerate plateau nodes. Node scalars are grid
// values; node ids are dense in creation order.
MergeTree split_tree(const ScalarGrid& g);

// Sublevel-set counterpart: extracted from the negated field and tagged as
// a join tree, so stored scalars are negated grid values.
MergeTree join_tree(const ScalarGrid& g);

// Count of strict local maxima under the same tie-breaking, for
// cross-checking leaf counts without going through the tree builder.
int count_local_maxima(const ScalarGrid& g);

}  // namespace mtd
