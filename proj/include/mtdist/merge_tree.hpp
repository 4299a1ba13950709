#pragma once

#include <string>
#include <vector>

namespace mtd {

enum class TreeKind { split, join };

// Node of a rooted merge tree. `scalar` always stores the split-oriented
// value: for join trees the field value is negated on load/extraction and
// negated back on output, so every algorithm can assume children lie
// strictly above their parents.
struct TreeNode {
  long long id = 0;     // external id, preserved across serialization
  double scalar = 0.0;  // split-oriented scalar
  int parent = -1;      // index into MergeTree::nodes, -1 for the root
};

struct MergeTree {
  TreeKind kind = TreeKind::split;
  int root = -1;
  std::vector<TreeNode> nodes;

  int size() const { return static_cast<int>(nodes.size()); }
};

// Build a tree from parallel arrays; ids become 0..n-1. The root is the
// unique index with parent -1 (checked lazily by validate_merge_tree).
MergeTree make_tree(TreeKind kind, const std::vector<double>& scalars,
                    const std::vector<int>& parents);

// Diagnostics for the abstract-merge-tree invariants: degree-1 root,
// no single-child inner nodes, strictly increasing scalars away from the
// root, unique ids, acyclic parent references. Empty result means valid.
std::vector<std::string> validate_merge_tree(const MergeTree& t);

// Throws std::invalid_argument carrying the first violation.
void require_valid(const MergeTree& t, const char* context);

std::vector<std::vector<int>> children_lists(const MergeTree& t);
std::vector<int> leaves_of(const MergeTree& t);

// Edge (child, parent(child)); length is |f(child) - f(parent)|.
double edge_length(const MergeTree& t, int child);
// Length of a monotone path given as node indices, root side first.
// A single-node path has length 0. Throws on unknown nodes or if the
// sequence is not a contiguous parent-to-child chain.
double path_length(const MergeTree& t, const std::vector<int>& path);
double total_edge_length(const MergeTree& t);
double scalar_range(const MergeTree& t);

// True iff `anc` lies on the root path of `node` (inclusive).
bool is_ancestor(const MergeTree& t, int anc, int node);
// Node sequence from ancestor `top` down to descendant `bottom`, inclusive.
std::vector<int> path_between(const MergeTree& t, int top, int bottom);

// Shift all scalars so the root sits at `value`.
MergeTree set_root_value(const MergeTree& t, double value);

// Rebuild node scalars from per-edge lengths (indexed by child node) with
// the root anchored at root_value. Inverse of reading edge lengths off a
// tree, up to the global shift. Lengths must be strictly positive.
MergeTree relabel_from_edge_lengths(const MergeTree& structure,
                                    const std::vector<double>& lengths,
                                    double root_value);

// Remove inner nodes with exactly one child by splicing their child onto
// their parent. Surviving nodes keep scalars and external ids.
MergeTree contract_unary_nodes(const MergeTree& t);

// Drop the nodes marked dead and compact indices. The alive set must be a
// connected subtree containing the root (every alive node's parent alive);
// callers remove whole subtrees, never punch holes. Surviving nodes keep
// scalars and external ids. Does not contract unary nodes.
MergeTree compact_alive(const MergeTree& t, const std::vector<char>& alive);

}  // namespace mtd
