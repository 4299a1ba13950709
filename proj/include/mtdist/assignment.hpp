#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace mtd {

// Minimum-cost partial matching between two item sets where leaving item i
// of the first set unmatched costs drop_a[i] and leaving j of the second
// unmatched costs drop_b[j]. Every item is either matched once or dropped.
struct Assignment {
  double cost = 0.0;
  std::vector<std::pair<int, int>> matches;  // (first-set index, second-set index)
};

// Exact solve. Small instances (both sides <= 6) go through exhaustive
// enumeration with a bitmask over the second set; larger ones through the
// Hungarian algorithm on a square matrix padded with per-item drop slots.
// Both routes return the same cost and are individually deterministic,
// though they may pick different equal-cost matchings. Costs must be
// nonnegative (the exhaustive route prunes on prefix sums).
Assignment solve_assignment(int na, int nb,
                            const std::function<double(int, int)>& pair_cost,
                            const std::vector<double>& drop_a,
                            const std::vector<double>& drop_b);

}  // namespace mtd
