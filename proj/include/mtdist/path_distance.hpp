#pragma once

#include "mtdist/path_mapping.hpp"

namespace mtd {

struct PathDistanceResult {
  double distance = 0.0;
  PathMapping mapping;  // optimal witness; empty when deleting everything is optimal
};

// Minimal path mapping cost between two merge trees via dynamic
// programming over (open path pair, matched node pair) states with exact
// children assignment. Deterministic, including the witness. Trees must be
// of the same kind.
PathDistanceResult path_mapping_distance(const MergeTree& t1, const MergeTree& t2);

// Exhaustive reference search over the same mapping space, written without
// any shared machinery with the dynamic program so the two can vouch for
// each other in tests. Only intended for small inputs; throws length_error
// when the trees carry more than 16 edges combined.
PathDistanceResult brute_force_distance(const MergeTree& t1, const MergeTree& t2);

}  // namespace mtd
