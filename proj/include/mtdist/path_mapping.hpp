#pragma once

#include <string>
#include <vector>

#include "mtdist/merge_tree.hpp"

namespace mtd {

// A pair of monotone paths, one per tree, listed root side first. Paths of
// a single node are structurally legal (they map nothing and cost the full
// length difference of their partner, i.e. its length).
struct PathPair {
  std::vector<int> p1;
  std::vector<int> p2;
};

struct PathMapping {
  std::vector<PathPair> pairs;
};

// Structural checks for a mapping between t1 and t2; returns one message
// per violation, empty when the mapping is valid:
//  - every path is a contiguous ancestor-to-descendant chain,
//  - no two mapped paths within one tree share more than one node,
//  - the pairing is one-to-one in both directions,
//  - each pair either starts at both roots or hangs off the endpoints of
//    another mapped pair.
// Throws invalid_argument if a path names a node outside its tree.
std::vector<std::string> validate_path_mapping(const PathMapping& m, const MergeTree& t1,
                                               const MergeTree& t2);

// Mapping cost: sum of |len(p1) - len(p2)| over pairs plus the length of
// every edge not covered by any mapped path, on both sides. Throws
// invalid_argument when the mapping fails validation.
double path_mapping_cost(const PathMapping& m, const MergeTree& t1, const MergeTree& t2);

}  // namespace mtd
