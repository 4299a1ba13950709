#include "mtdist/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mtd {

void require_valid(const ScalarGrid& g, const char* context) {
  const std::string where = context ? context : "grid";
  if (g.width <= 0 || g.height <= 0)
    throw std::invalid_argument(where + ": grid dimensions must be positive");
  if (g.values.size() != static_cast<std::size_t>(g.width) * g.height)
    throw std::invalid_argument(where + ": value count does not match dimensions");
  if (g.values.size() < 2)
    throw std::invalid_argument(where + ": grid needs at least two vertices");
  for (double v : g.values)
    if (!std::isfinite(v)) throw std::invalid_argument(where + ": non-finite grid value");
}

namespace {

// Union-find over vertices with the current tree node of each component
// stored at the representative.
struct Components {
  std::vector<int> parent;
  std::vector<int> node;

  explicit Components(int n) : parent(n, -1), node(n, -1) {}

  int find(int v) {
    int r = v;
    while (parent[r] != r) r = parent[r];
    while (parent[v] != r) {
      const int next = parent[v];
      parent[v] = r;
      v = next;
    }
    return r;
  }

  void make(int v, int tree_node) {
    parent[v] = v;
    node[v] = tree_node;
  }

  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
    return a;
  }
};

// Vertices are swept in decreasing (value, index) order; the index
// tie-break totally orders plateaus, mirroring a symbolic perturbation of
// equal values.
MergeTree sweep_tree(const ScalarGrid& g, TreeKind kind) {
  const int w = g.width;
  const int h = g.height;
  const int n = w * h;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.values[a] != g.values[b]) return g.values[a] > g.values[b];
    return a > b;
  });

  std::vector<double> scalars;
  std::vector<int> parents;
  auto add_node = [&](double f) {
    scalars.push_back(f);
    parents.push_back(-1);
    return static_cast<int>(scalars.size()) - 1;
  };

  Components comp(n);
  auto higher = [&](int a, int b) {
    if (g.values[a] != g.values[b]) return g.values[a] > g.values[b];
    return a > b;
  };

  int neigh[4];
  for (const int v : order) {
    const int x = v % w;
    const int y = v / w;
    int cnt = 0;
    if (x > 0) neigh[cnt++] = v - 1;
    if (x + 1 < w) neigh[cnt++] = v + 1;
    if (y > 0) neigh[cnt++] = v - w;
    if (y + 1 < h) neigh[cnt++] = v + w;

    int roots[4];
    int distinct = 0;
    for (int i = 0; i < cnt; ++i) {
      if (!higher(neigh[i], v)) continue;  // not processed yet
      const int r = comp.find(neigh[i]);
      bool seen = false;
      for (int j = 0; j < distinct; ++j) seen = seen || roots[j] == r;
      if (!seen) roots[distinct++] = r;
    }

    if (distinct == 0) {
      comp.make(v, add_node(g.values[v]));  // local maximum, new leaf
    } else if (distinct == 1) {
      comp.parent[v] = roots[0];  // regular vertex, absorb silently
    } else {
      const int saddle = add_node(g.values[v]);
      comp.parent[v] = roots[0];
      for (int i = 0; i < distinct; ++i) {
        parents[comp.node[roots[i]]] = saddle;
        if (i > 0) comp.unite(roots[0], roots[i]);
      }
      comp.node[comp.find(v)] = saddle;
    }
  }

  // Hang the surviving component below a root at the global minimum, the
  // vertex swept last. If that vertex itself spawned a node the field is
  // too degenerate to carry a valid tree (e.g. a constant 1xN grid); the
  // validity check below reports it.
  const int last = order.back();
  const int top = comp.node[comp.find(last)];
  const int root = add_node(g.values[last]);
  parents[top] = root;

  MergeTree t = make_tree(kind, scalars, parents);
  require_valid(t, "merge tree extraction");
  return t;
}

}  // namespace

MergeTree split_tree(const ScalarGrid& g) {
  require_valid(g, "split_tree");
  return sweep_tree(g, TreeKind::split);
}

MergeTree join_tree(const ScalarGrid& g) {
  require_valid(g, "join_tree");
  ScalarGrid neg = g;
  for (double& v : neg.values) v = -v;
  return sweep_tree(neg, TreeKind::join);
}

int count_local_maxima(const ScalarGrid& g) {
  require_valid(g, "count_local_maxima");
  const int w = g.width;
  const int h = g.height;
  auto higher = [&](int a, int b) {
    if (g.values[a] != g.values[b]) return g.values[a] > g.values[b];
    return a > b;
  };
  int count = 0;
  for (int v = 0; v < w * h; ++v) {
    const int x = v % w;
    const int y = v / w;
    bool is_max = true;
    if (x > 0) is_max = is_max && higher(v, v - 1);
    if (x + 1 < w) is_max = is_max && higher(v, v + 1);
    if (y > 0) is_max = is_max && higher(v, v - w);
    if (y + 1 < h) is_max = is_max && higher(v, v + w);
    count += is_max ? 1 : 0;
  }
  return count;
}

}  // namespace mtd
