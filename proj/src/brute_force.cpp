#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mtdist/path_distance.hpp"

// Reference search for the path mapping distance. Everything here is
// deliberately self-contained: no assignment solver, no memoization, no
// sharing with the dynamic program beyond the public tree accessors, so a
// bug would have to be reinvented twice to escape the comparison tests.

namespace mtd {

namespace {

struct Search {
  const MergeTree& t1;
  const MergeTree& t2;
  std::vector<std::vector<int>> kids1, kids2;
  std::vector<std::vector<int>> desc1, desc2;  // subtree node lists, preorder

  double best = 0.0;
  std::vector<PathPair> best_pairs;
  std::vector<PathPair> cur;
  std::vector<std::pair<int, int>> pending;  // matched node pairs awaiting expansion

  Search(const MergeTree& a, const MergeTree& b) : t1(a), t2(b) {
    kids1 = children_lists(t1);
    kids2 = children_lists(t2);
    desc1 = descendants(t1, kids1);
    desc2 = descendants(t2, kids2);
  }

  static std::vector<std::vector<int>> descendants(const MergeTree& t,
                                                   const std::vector<std::vector<int>>& kids) {
    std::vector<std::vector<int>> out(t.size());
    for (int v = 0; v < t.size(); ++v) {
      std::vector<int> stack = {v};
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        out[v].push_back(u);
        for (int c : kids[u]) stack.push_back(c);
      }
    }
    return out;
  }

  // Every pair trades the deletion of both its paths for their length
  // difference, a nonpositive adjustment against the delete-everything
  // baseline. Summing adjustments incrementally prices each candidate
  // without rescanning the trees.
  double adjust(int top1, int end1, int top2, int end2) const {
    const double l1 = t1.nodes[end1].scalar - t1.nodes[top1].scalar;
    const double l2 = t2.nodes[end2].scalar - t2.nodes[top2].scalar;
    return std::abs(l1 - l2) - l1 - l2;
  }

  void candidate(double acc) {
    if (acc < best) {
      best = acc;
      best_pairs = cur;
    }
  }

  void record_pair(int top1, int end1, int top2, int end2) {
    PathPair pr;
    for (int v = end1; v != top1; v = t1.nodes[v].parent) pr.p1.push_back(v);
    pr.p1.push_back(top1);
    for (int v = end2; v != top2; v = t2.nodes[v].parent) pr.p2.push_back(v);
    pr.p2.push_back(top2);
    std::reverse(pr.p1.begin(), pr.p1.end());
    std::reverse(pr.p2.begin(), pr.p2.end());
    cur.push_back(std::move(pr));
  }

  // Depth-first over the and-or tree of choices: pick a pending matched
  // pair, enumerate every injective pairing of its children bundles
  // together with every endpoint choice inside the paired subtrees, and
  // push the new endpoints as pending matches.
  void step(double acc) {
    if (pending.empty()) {
      candidate(acc);
      return;
    }
    const auto [x1, x2] = pending.back();
    pending.pop_back();
    pair_children(x1, x2, 0, 0u, acc);
    pending.emplace_back(x1, x2);
  }

  void pair_children(int x1, int x2, std::size_t idx, std::uint32_t used, double acc) {
    const auto& a = kids1[x1];
    if (idx == a.size()) {
      step(acc);
      return;
    }
    // Leave child a[idx] unmatched; its subtree stays at the baseline cost.
    pair_children(x1, x2, idx + 1, used, acc);

    const auto& b = kids2[x2];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used >> j & 1u) continue;
      for (int end1 : desc1[a[idx]]) {
        for (int end2 : desc2[b[j]]) {
          record_pair(x1, end1, x2, end2);
          pending.emplace_back(end1, end2);
          pair_children(x1, x2, idx + 1, used | (1u << j),
                        acc + adjust(x1, end1, x2, end2));
          pending.pop_back();
          cur.pop_back();
        }
      }
    }
  }

  PathDistanceResult run() {
    double baseline = 0.0;
    for (int v = 0; v < t1.size(); ++v)
      if (v != t1.root) baseline += edge_length(t1, v);
    for (int v = 0; v < t2.size(); ++v)
      if (v != t2.root) baseline += edge_length(t2, v);

    best = baseline;  // the empty mapping deletes everything
    for (int end1 : desc1[t1.root]) {
      if (end1 == t1.root) continue;
      for (int end2 : desc2[t2.root]) {
        if (end2 == t2.root) continue;
        record_pair(t1.root, end1, t2.root, end2);
        pending.emplace_back(end1, end2);
        step(baseline + adjust(t1.root, end1, t2.root, end2));
        pending.pop_back();
        cur.pop_back();
      }
    }

    PathDistanceResult out;
    out.distance = best;
    out.mapping.pairs = best_pairs;
    return out;
  }
};

}  // namespace

PathDistanceResult brute_force_distance(const MergeTree& t1, const MergeTree& t2) {
  require_valid(t1, "brute_force_distance");
  require_valid(t2, "brute_force_distance");
  if (t1.kind != t2.kind)
    throw std::invalid_argument("brute_force_distance: cannot compare split and join trees");
  if (t1.size() + t2.size() - 2 > 16)
    throw std::length_error("brute_force_distance: exhaustive search is limited to 16 edges");

  Search search(t1, t2);
  PathDistanceResult out = search.run();

  // The searched mappings are valid by construction; pricing the winner
  // through the public cost function is a cheap cross-check that the
  // incremental accounting above did not drift.
  const auto violations = validate_path_mapping(out.mapping, t1, t2);
  if (!violations.empty())
    throw std::logic_error("brute_force_distance: produced an invalid mapping: " +
                           violations.front());
  const double priced = path_mapping_cost(out.mapping, t1, t2);
  if (std::abs(priced - out.distance) > 1e-9)
    throw std::logic_error("brute_force_distance: incremental cost disagrees with repricing");
  return out;
}

}  // namespace mtd
