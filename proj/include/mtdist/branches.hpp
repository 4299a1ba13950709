#pragma once

#include <vector>

#include "mtdist/merge_tree.hpp"

namespace mtd {

// One branch of a decomposition: a monotone path ending in a leaf.
// birth/death are split-oriented scalars with death >= birth, so branches
// plot above the diagonal in the birth/death plane; persistence is their
// difference. `parent` indexes the branch whose interior hosts this
// branch's start saddle (-1 for the main branch).
struct Branch {
  std::vector<int> path;  // node indices, start saddle first, leaf last
  double birth = 0.0;
  double death = 0.0;
  int parent = -1;
  int leaf = -1;  // node index of the terminating leaf

  double persistence() const { return death - birth; }
};

struct BranchDecomposition {
  std::vector<Branch> branches;
  int main = -1;  // index of the branch spanning the global range
};

// Branch decomposition tree detached from any node-level tree, the object
// the birth/death-plane metric and barycenter operate on. Branch ids echo
// the source leaf ids when derived from a tree, fresh ids otherwise.
struct BdtBranch {
  long long id = 0;
  double birth = 0.0;
  double death = 0.0;
  int parent = -1;  // index into Bdt::branches, -1 for the root branch
};

struct Bdt {
  TreeKind kind = TreeKind::split;
  int root = -1;
  std::vector<BdtBranch> branches;

  int size() const { return static_cast<int>(branches.size()); }
};

// Elder-rule decomposition: at every saddle the child subtree holding the
// highest leaf continues the current branch (ties by smallest leaf id);
// every other child starts a new branch parented to the continuing one.
BranchDecomposition branch_decomposition_elder(const MergeTree& t);

// The same decomposition reduced to birth/death coordinates.
Bdt elder_bdt(const MergeTree& t);
Bdt bdt_of(const BranchDecomposition& d, const MergeTree& t);

std::vector<std::vector<int>> bdt_children(const Bdt& b);

// Invert a nested BDT into a merge tree: each child branch attaches at a
// saddle placed at its birth value on the parent branch; children with
// equal birth values share the saddle. Requires strictly positive
// persistences and child births strictly inside the parent span.
MergeTree bdt_to_tree(const Bdt& b);

// Persistence simplification: repeatedly remove the least persistent
// non-main branch (always childless in an elder decomposition) while its
// persistence is strictly below threshold_fraction * global scalar range,
// contracting saddles that become unary. Idempotent at fixed threshold.
MergeTree simplify(const MergeTree& t, double threshold_fraction);

}  // namespace mtd
