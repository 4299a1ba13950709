#include "mtdist/path_distance.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mtdist/assignment.hpp"

namespace mtd {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Per-tree tables the recurrences read: children, subtree deletion costs,
// and a dense id for every (proper ancestor, descendant) pair, which keys
// the open-path memo.
struct Side {
  const MergeTree* t = nullptr;
  std::vector<std::vector<int>> kids;
  std::vector<double> del_sub;     // remove subtree(v) plus its parent edge
  std::vector<double> drop_below;  // remove everything strictly below v
  std::vector<int> pair_id;        // (ancestor * n + node) -> dense id, -1 elsewhere
  int pair_count = 0;

  explicit Side(const MergeTree& tree) : t(&tree) {
    const int n = tree.size();
    kids = children_lists(tree);
    del_sub.assign(n, 0.0);
    drop_below.assign(n, 0.0);
    // Children have larger scalars, so scanning nodes by decreasing scalar
    // would work; a post-order accumulation is simpler and index-stable.
    std::vector<int> order;
    order.reserve(n);
    std::vector<int> stack = {tree.root};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int c : kids[v]) stack.push_back(c);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      for (int c : kids[v]) drop_below[v] += del_sub[c];
      del_sub[v] = drop_below[v];
      if (v != tree.root) del_sub[v] += edge_length(tree, v);
    }
    pair_id.assign(static_cast<std::size_t>(n) * n, -1);
    for (int v = 0; v < n; ++v) {
      for (int a = tree.nodes[v].parent; a >= 0; a = tree.nodes[a].parent)
        pair_id[static_cast<std::size_t>(a) * n + v] = pair_count++;
    }
  }

  double f(int v) const { return t->nodes[v].scalar; }
  int pid(int anc, int v) const {
    return pair_id[static_cast<std::size_t>(anc) * t->size() + v];
  }
};

// Two mutually recursive value tables:
//   match(x1, x2): cheapest completion below an already matched node pair,
//     an exact assignment between the children bundles where matching
//     children (c1, c2) opens the path pair x1->c1 / x2->c2.
//   open(s1, y1, s2, y2): cheapest completion of an open path pair; either
//     close it here (pay the length difference, match y1 with y2) or grow
//     one path into a child, deleting the sibling subtrees passed by.
class Solver {
 public:
  Solver(const MergeTree& t1, const MergeTree& t2) : a_(t1), b_(t2) {
    match_memo_.assign(static_cast<std::size_t>(t1.size()) * t2.size(), kNan);
    const std::size_t open_states =
        static_cast<std::size_t>(a_.pair_count) * b_.pair_count;
    if (open_states > std::size_t{200} * 1000 * 1000)
      throw std::length_error("path_mapping_distance: trees too large for the open-path memo");
    open_memo_.assign(open_states, kNan);
  }

  PathDistanceResult run() {
    const MergeTree& t1 = *a_.t;
    const MergeTree& t2 = *b_.t;
    const double empty = a_.del_sub[t1.root] + b_.del_sub[t2.root];

    // Any nonempty mapping contains exactly one pair starting at both
    // roots, and each root has a single child, so the whole search lives
    // under one open state.
    const int c1 = a_.kids[t1.root].front();
    const int c2 = b_.kids[t2.root].front();
    const double anchored = open(t1.root, c1, t2.root, c2);

    PathDistanceResult out;
    if (anchored <= empty) {
      out.distance = anchored;
      walk_open(t1.root, c1, t2.root, c2, out.mapping);
    } else {
      out.distance = empty;
    }
    return out;
  }

 private:
  double match(int x1, int x2) {
    double& slot = match_memo_[static_cast<std::size_t>(x1) * b_.t->size() + x2];
    if (!std::isnan(slot)) return slot;
    const Assignment sol = children_assignment(x1, x2);
    slot = sol.cost;
    return slot;
  }

  Assignment children_assignment(int x1, int x2) {
    const auto& ka = a_.kids[x1];
    const auto& kb = b_.kids[x2];
    std::vector<double> drop_a(ka.size()), drop_b(kb.size());
    for (std::size_t i = 0; i < ka.size(); ++i) drop_a[i] = a_.del_sub[ka[i]];
    for (std::size_t j = 0; j < kb.size(); ++j) drop_b[j] = b_.del_sub[kb[j]];
    return solve_assignment(
        static_cast<int>(ka.size()), static_cast<int>(kb.size()),
        [&](int i, int j) { return open(x1, ka[i], x2, kb[j]); }, drop_a, drop_b);
  }

  double open(int s1, int y1, int s2, int y2) {
    const std::size_t key =
        static_cast<std::size_t>(a_.pid(s1, y1)) * b_.pair_count + b_.pid(s2, y2);
    double& slot = open_memo_[key];
    if (!std::isnan(slot)) return slot;

    const double len1 = a_.f(y1) - a_.f(s1);
    const double len2 = b_.f(y2) - b_.f(s2);
    double best = std::abs(len1 - len2) + match(y1, y2);
    for (int c : a_.kids[y1]) {
      const double cand = a_.drop_below[y1] - a_.del_sub[c] + open(s1, c, s2, y2);
      if (cand < best) best = cand;
    }
    for (int c : b_.kids[y2]) {
      const double cand = b_.drop_below[y2] - b_.del_sub[c] + open(s1, y1, s2, c);
      if (cand < best) best = cand;
    }
    slot = best;
    return best;
  }

  // Witness reconstruction replays each decision and follows the first
  // option that reproduces the memoized value exactly; the arithmetic is
  // identical to the forward pass, so one always does.
  void walk_open(int s1, int y1, int s2, int y2, PathMapping& m) {
    const double want = open(s1, y1, s2, y2);
    const double len1 = a_.f(y1) - a_.f(s1);
    const double len2 = b_.f(y2) - b_.f(s2);
    if (std::abs(len1 - len2) + match(y1, y2) == want) {
      PathPair pr;
      pr.p1 = path_between(*a_.t, s1, y1);
      pr.p2 = path_between(*b_.t, s2, y2);
      m.pairs.push_back(std::move(pr));
      walk_match(y1, y2, m);
      return;
    }
    for (int c : a_.kids[y1]) {
      if (a_.drop_below[y1] - a_.del_sub[c] + open(s1, c, s2, y2) == want) {
        walk_open(s1, c, s2, y2, m);
        return;
      }
    }
    for (int c : b_.kids[y2]) {
      if (b_.drop_below[y2] - b_.del_sub[c] + open(s1, y1, s2, c) == want) {
        walk_open(s1, y1, s2, c, m);
        return;
      }
    }
    throw std::logic_error("path_mapping_distance: witness replay lost its memoized value");
  }

  void walk_match(int x1, int x2, PathMapping& m) {
    const Assignment sol = children_assignment(x1, x2);
    for (const auto& [i, j] : sol.matches)
      walk_open(x1, a_.kids[x1][i], x2, b_.kids[x2][j], m);
  }

  Side a_;
  Side b_;
  std::vector<double> match_memo_;
  std::vector<double> open_memo_;
};

}  // namespace

PathDistanceResult path_mapping_distance(const MergeTree& t1, const MergeTree& t2) {
  require_valid(t1, "path_mapping_distance");
  require_valid(t2, "path_mapping_distance");
  if (t1.kind != t2.kind)
    throw std::invalid_argument("path_mapping_distance: cannot compare split and join trees");
  Solver solver(t1, t2);
  return solver.run();
}

}  // namespace mtd
