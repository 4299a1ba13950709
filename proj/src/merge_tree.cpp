#include "mtdist/merge_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <unordered_set>

namespace mtd {

MergeTree make_tree(TreeKind kind, const std::vector<double>& scalars,
                    const std::vector<int>& parents) {
  if (scalars.size() != parents.size())
    throw std::invalid_argument("make_tree: scalars/parents size mismatch");
  MergeTree t;
  t.kind = kind;
  t.nodes.resize(scalars.size());
  for (int i = 0; i < t.size(); ++i) {
    t.nodes[i].id = i;
    t.nodes[i].scalar = scalars[i];
    t.nodes[i].parent = parents[i];
    if (parents[i] < 0) t.root = i;
  }
  return t;
}

std::vector<std::string> validate_merge_tree(const MergeTree& t) {
  std::vector<std::string> out;
  const int n = t.size();
  if (n == 0) {
    out.push_back("tree is empty");
    return out;
  }
  if (t.root < 0 || t.root >= n) {
    out.push_back("root index out of range");
    return out;
  }

  std::unordered_set<long long> seen;
  for (const TreeNode& nd : t.nodes) {
    if (!seen.insert(nd.id).second)
      out.push_back("duplicate node id " + std::to_string(nd.id));
  }

  int root_count = 0;
  for (int i = 0; i < n; ++i) {
    const int p = t.nodes[i].parent;
    if (p == -1) {
      ++root_count;
      if (i != t.root)
        out.push_back("node " + std::to_string(t.nodes[i].id) +
                      " has no parent but is not the designated root");
    } else if (p < 0 || p >= n) {
      out.push_back("node " + std::to_string(t.nodes[i].id) +
                    " has out-of-range parent reference");
    }
  }
  if (root_count != 1)
    out.push_back("expected exactly one parentless node, found " +
                  std::to_string(root_count));

  // Cycle check: walking up from any node must reach the root within n steps.
  for (int i = 0; i < n; ++i) {
    int v = i, steps = 0;
    while (v != -1 && t.nodes[v].parent >= 0 && t.nodes[v].parent < n) {
      v = t.nodes[v].parent;
      if (++steps > n) {
        out.push_back("parent references contain a cycle through node " +
                      std::to_string(t.nodes[i].id));
        return out;  // further structural checks would not terminate
      }
    }
  }

  std::vector<int> child_count(n, 0);
  for (int i = 0; i < n; ++i) {
    const int p = t.nodes[i].parent;
    if (p >= 0 && p < n) ++child_count[p];
  }
  if (child_count[t.root] != 1)
    out.push_back("root " + std::to_string(t.nodes[t.root].id) +
                  " must have exactly one child, has " +
                  std::to_string(child_count[t.root]));
  for (int i = 0; i < n; ++i) {
    if (i == t.root) continue;
    if (child_count[i] == 1)
      out.push_back("inner node " + std::to_string(t.nodes[i].id) +
                    " has exactly one child");
  }
  for (int i = 0; i < n; ++i) {
    const int p = t.nodes[i].parent;
    if (p < 0 || p >= n) continue;
    if (!(t.nodes[i].scalar > t.nodes[p].scalar))
      out.push_back("edge (" + std::to_string(t.nodes[i].id) + "," +
                    std::to_string(t.nodes[p].id) +
                    ") is not strictly increasing away from the root");
  }
  for (const TreeNode& nd : t.nodes) {
    if (!std::isfinite(nd.scalar))
      out.push_back("node " + std::to_string(nd.id) + " has non-finite scalar");
  }
  return out;
}

void require_valid(const MergeTree& t, const char* context) {
  std::vector<std::string> v = validate_merge_tree(t);
  if (!v.empty())
    throw std::invalid_argument(std::string(context) + ": invalid merge tree: " + v.front());
}

std::vector<std::vector<int>> children_lists(const MergeTree& t) {
  std::vector<std::vector<int>> kids(t.size());
  for (int i = 0; i < t.size(); ++i) {
    const int p = t.nodes[i].parent;
    if (p >= 0) kids[p].push_back(i);
  }
  return kids;
}

std::vector<int> leaves_of(const MergeTree& t) {
  std::vector<char> has_child(t.size(), 0);
  for (int i = 0; i < t.size(); ++i)
    if (t.nodes[i].parent >= 0) has_child[t.nodes[i].parent] = 1;
  std::vector<int> out;
  for (int i = 0; i < t.size(); ++i)
    if (!has_child[i]) out.push_back(i);
  return out;
}

static void check_node(const MergeTree& t, int v) {
  if (v < 0 || v >= t.size())
    throw std::invalid_argument("node not in tree");
}

double edge_length(const MergeTree& t, int child) {
  check_node(t, child);
  const int p = t.nodes[child].parent;
  if (p < 0) throw std::invalid_argument("edge_length: node is the root");
  return std::fabs(t.nodes[child].scalar - t.nodes[p].scalar);
}

double path_length(const MergeTree& t, const std::vector<int>& path) {
  if (path.empty()) throw std::invalid_argument("path_length: empty path");
  for (int v : path) check_node(t, v);
  double len = 0.0;
  for (size_t i = 1; i < path.size(); ++i) {
    if (t.nodes[path[i]].parent != path[i - 1])
      throw std::invalid_argument("path_length: not a monotone root-to-leaf path");
    len += edge_length(t, path[i]);
  }
  return len;
}

double total_edge_length(const MergeTree& t) {
  double s = 0.0;
  for (int i = 0; i < t.size(); ++i)
    if (t.nodes[i].parent >= 0) s += edge_length(t, i);
  return s;
}

double scalar_range(const MergeTree& t) {
  double lo = t.nodes.empty() ? 0.0 : t.nodes[0].scalar, hi = lo;
  for (const TreeNode& nd : t.nodes) {
    lo = std::min(lo, nd.scalar);
    hi = std::max(hi, nd.scalar);
  }
  return hi - lo;
}

bool is_ancestor(const MergeTree& t, int anc, int node) {
  check_node(t, anc);
  check_node(t, node);
  int v = node;
  while (v != -1) {
    if (v == anc) return true;
    v = t.nodes[v].parent;
  }
  return false;
}

std::vector<int> path_between(const MergeTree& t, int top, int bottom) {
  std::vector<int> rev;
  int v = bottom;
  while (v != -1) {
    rev.push_back(v);
    if (v == top) break;
    v = t.nodes[v].parent;
  }
  if (rev.empty() || rev.back() != top)
    throw std::invalid_argument("path_between: first node is not an ancestor of second");
  std::reverse(rev.begin(), rev.end());
  return rev;
}

MergeTree set_root_value(const MergeTree& t, double value) {
  if (t.root < 0) throw std::invalid_argument("set_root_value: tree has no root");
  MergeTree out = t;
  const double shift = value - t.nodes[t.root].scalar;
  for (TreeNode& nd : out.nodes) nd.scalar += shift;
  return out;
}

MergeTree relabel_from_edge_lengths(const MergeTree& structure,
                                    const std::vector<double>& lengths,
                                    double root_value) {
  const int n = structure.size();
  if (static_cast<int>(lengths.size()) != n)
    throw std::invalid_argument("relabel_from_edge_lengths: lengths size mismatch");
  for (int i = 0; i < n; ++i) {
    if (i == structure.root) continue;
    if (!(lengths[i] > 0.0))
      throw std::invalid_argument("relabel_from_edge_lengths: non-positive length");
  }
  MergeTree out = structure;
  // Cumulative sums from the root downward, in topological order.
  std::vector<std::vector<int>> kids = children_lists(structure);
  std::vector<int> stack = {structure.root};
  out.nodes[structure.root].scalar = root_value;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int c : kids[v]) {
      out.nodes[c].scalar = out.nodes[v].scalar + lengths[c];
      stack.push_back(c);
    }
  }
  return out;
}

MergeTree compact_alive(const MergeTree& t, const std::vector<char>& alive) {
  const int n = t.size();
  if (static_cast<int>(alive.size()) != n)
    throw std::invalid_argument("compact_alive: flag size mismatch");
  if (!alive[t.root]) throw std::invalid_argument("compact_alive: root removed");
  // Index remap first, then node bodies: parents may be stored after their
  // children, so parent indices can only be rewritten once the remap is
  // complete.
  std::vector<int> remap(n, -1);
  int kept = 0;
  for (int i = 0; i < n; ++i)
    if (alive[i]) remap[i] = kept++;

  MergeTree out;
  out.kind = t.kind;
  out.nodes.reserve(kept);
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    const int p = t.nodes[i].parent;
    if (p >= 0 && !alive[p])
      throw std::invalid_argument("compact_alive: alive node under dead parent");
    TreeNode nd = t.nodes[i];
    nd.parent = (p >= 0) ? remap[p] : -1;
    out.nodes.push_back(nd);
  }
  out.root = remap[t.root];
  return out;
}

MergeTree contract_unary_nodes(const MergeTree& t) {
  const int n = t.size();
  std::vector<int> child_count(n, 0);
  for (int i = 0; i < n; ++i)
    if (t.nodes[i].parent >= 0) ++child_count[t.nodes[i].parent];

  // A unary chain may be several nodes long; resolve each node's surviving
  // ancestor iteratively. The root is never contracted.
  std::vector<char> dead(n, 0);
  for (int i = 0; i < n; ++i)
    if (i != t.root && child_count[i] == 1) dead[i] = 1;

  std::vector<int> remap(n, -1);
  MergeTree out;
  out.kind = t.kind;
  std::vector<std::pair<int, int>> pending;  // (new index, old parent)
  for (int i = 0; i < n; ++i) {
    if (dead[i]) continue;
    remap[i] = static_cast<int>(out.nodes.size());
    TreeNode nd = t.nodes[i];
    pending.emplace_back(remap[i], nd.parent);
    out.nodes.push_back(nd);
  }
  for (auto [ni, oldp] : pending) {
    int p = oldp;
    while (p >= 0 && dead[p]) p = t.nodes[p].parent;
    out.nodes[ni].parent = (p >= 0) ? remap[p] : -1;
  }
  out.root = remap[t.root];
  return out;
}

}  // namespace mtd
