#include "mtdist/path_mapping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace mtd {

namespace {

// A path is well formed when consecutive entries are parent -> child links;
// that also rules out repeated nodes. Throws on unknown indices so callers
// never silently validate against the wrong tree.
bool path_is_chain(const std::vector<int>& p, const MergeTree& t) {
  if (p.empty()) return false;
  for (int v : p)
    if (v < 0 || v >= t.size()) throw std::invalid_argument("path mapping: node not in tree");
  for (std::size_t i = 1; i < p.size(); ++i)
    if (t.nodes[p[i]].parent != p[i - 1]) return false;
  return true;
}

int shared_nodes(const std::vector<int>& a, const std::vector<int>& b) {
  int count = 0;
  for (int x : a) count += std::count(b.begin(), b.end(), x) > 0 ? 1 : 0;
  return count;
}

}  // namespace

std::vector<std::string> validate_path_mapping(const PathMapping& m, const MergeTree& t1,
                                               const MergeTree& t2) {
  std::vector<std::string> out;
  const int k = static_cast<int>(m.pairs.size());

  std::vector<char> chain_ok(k, 1);
  for (int i = 0; i < k; ++i) {
    if (!path_is_chain(m.pairs[i].p1, t1)) {
      out.push_back("pair " + std::to_string(i) + ": first path is not a monotone path");
      chain_ok[i] = 0;
    }
    if (!path_is_chain(m.pairs[i].p2, t2)) {
      out.push_back("pair " + std::to_string(i) + ": second path is not a monotone path");
      chain_ok[i] = 0;
    }
  }

  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (!chain_ok[i] || !chain_ok[j]) continue;
      const bool same1 = m.pairs[i].p1 == m.pairs[j].p1;
      const bool same2 = m.pairs[i].p2 == m.pairs[j].p2;
      if (same1 && same2) {
        out.push_back("pairs " + std::to_string(i) + " and " + std::to_string(j) +
                      " are duplicates");
        continue;
      }
      if (same1 || same2)
        out.push_back("pairs " + std::to_string(i) + " and " + std::to_string(j) +
                      " reuse a path, mapping is not one-to-one");
      if (shared_nodes(m.pairs[i].p1, m.pairs[j].p1) > 1)
        out.push_back("pairs " + std::to_string(i) + " and " + std::to_string(j) +
                      " overlap in more than one node in the first tree");
      if (shared_nodes(m.pairs[i].p2, m.pairs[j].p2) > 1)
        out.push_back("pairs " + std::to_string(i) + " and " + std::to_string(j) +
                      " overlap in more than one node in the second tree");
    }
  }

  for (int i = 0; i < k; ++i) {
    if (!chain_ok[i]) continue;
    const PathPair& pr = m.pairs[i];
    if (pr.p1.front() == t1.root && pr.p2.front() == t2.root) continue;
    bool anchored = false;
    for (int j = 0; j < k && !anchored; ++j) {
      if (j == i || !chain_ok[j]) continue;
      anchored = m.pairs[j].p1.back() == pr.p1.front() && m.pairs[j].p2.back() == pr.p2.front();
    }
    if (!anchored)
      out.push_back("pair " + std::to_string(i) +
                    " neither starts at the roots nor continues another mapped pair");
  }
  return out;
}

double path_mapping_cost(const PathMapping& m, const MergeTree& t1, const MergeTree& t2) {
  const auto violations = validate_path_mapping(m, t1, t2);
  if (!violations.empty())
    throw std::invalid_argument("path_mapping_cost: invalid mapping: " + violations.front());

  double cost = 0.0;
  std::vector<char> covered1(t1.size(), 0), covered2(t2.size(), 0);
  for (const PathPair& pr : m.pairs) {
    cost += std::abs(path_length(t1, pr.p1) - path_length(t2, pr.p2));
    for (std::size_t i = 1; i < pr.p1.size(); ++i) covered1[pr.p1[i]] = 1;
    for (std::size_t i = 1; i < pr.p2.size(); ++i) covered2[pr.p2[i]] = 1;
  }
  for (int v = 0; v < t1.size(); ++v)
    if (v != t1.root && !covered1[v]) cost += edge_length(t1, v);
  for (int v = 0; v < t2.size(); ++v)
    if (v != t2.root && !covered2[v]) cost += edge_length(t2, v);
  return cost;
}

}  // namespace mtd
