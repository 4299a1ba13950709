#include "mtdist/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "mtdist/branches.hpp"
#include "mtdist/parallel.hpp"
#include "mtdist/wasserstein.hpp"

namespace mtd {

namespace {

// Per-member bookkeeping shared by the update phases. Pointers stay valid
// for the duration of one weighted_update call.
struct MemberView {
  const MergeTree* tree = nullptr;
  const PathMapping* mapping = nullptr;
  double weight = 1.0;
  std::vector<int> pair_of_edge;         // candidate edge (child index) -> pair index, -1
  std::vector<char> member_edge_mapped;  // member edge (child index) lies on a mapped path
  std::vector<double> len_b;             // candidate-side path length per pair
  std::vector<double> len_m;             // member-side path length per pair
};

struct UpdateConfig {
  bool relabel = true;
  bool add = true;
  bool median = false;
  // The mean aggregates as sum(weight_i * value_i) / divisor. Uniform
  // callers pass unit weights with divisor k, so k identical members
  // reproduce their tree without rounding drift whenever k * length is
  // exactly representable; geodesics pass weights (1-alpha, alpha) over 1.
  double divisor = 1.0;
};

// A member-tree node waiting for its spot on a candidate edge.
struct InsertRequest {
  double scalar;
  int member;
  int node;
};

double lower_median(std::vector<double>& vals) {
  const size_t mid = (vals.size() - 1) / 2;
  std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
  return vals[mid];
}

MemberView build_view(const MergeTree& b, const MergeTree& tree, const PathMapping& mapping,
                      double weight) {
  MemberView v;
  v.tree = &tree;
  v.mapping = &mapping;
  v.weight = weight;
  v.pair_of_edge.assign(b.size(), -1);
  v.member_edge_mapped.assign(tree.size(), 0);
  if (mapping.pairs.empty())
    throw std::invalid_argument(
        "barycenter update: a member mapping has no pairs (optimal mappings between valid trees "
        "always pair the root paths)");
  v.len_b.reserve(mapping.pairs.size());
  v.len_m.reserve(mapping.pairs.size());
  for (size_t j = 0; j < mapping.pairs.size(); ++j) {
    const PathPair& pr = mapping.pairs[j];
    const double lb = path_length(b, pr.p1);
    if (pr.p1.size() > 1 && !(lb > 0.0))
      throw std::runtime_error("barycenter update: degenerate path of length 0");
    v.len_b.push_back(lb);
    v.len_m.push_back(path_length(tree, pr.p2));
    for (size_t s = 1; s < pr.p1.size(); ++s) v.pair_of_edge[pr.p1[s]] = static_cast<int>(j);
    for (size_t s = 1; s < pr.p2.size(); ++s) v.member_edge_mapped[pr.p2[s]] = 1;
  }
  return v;
}

// One weighted update: remove, relabel, add, in that order, with each
// phase switchable so the public subroutines can run standalone.
MergeTree weighted_update(const MergeTree& b, const std::vector<MemberView>& members,
                          const UpdateConfig& cfg, const char* context) {
  const int n = b.size();
  const int k = static_cast<int>(members.size());
  const std::vector<std::vector<int>> kids = children_lists(b);

  std::vector<int> order;  // parents before children, for the downward sweeps
  order.reserve(n);
  std::vector<int> stack = {b.root};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (int c : kids[u]) stack.push_back(c);
  }

  // Remove phase: an edge survives when any member maps it. Mapped paths
  // chain down from the root pair, so the kept set never has holes; the
  // parent conjunction turns that into a hard guarantee.
  std::vector<char> alive(n, 0);
  alive[b.root] = 1;
  for (int u : order) {
    if (u == b.root) continue;
    bool mapped = false;
    for (const MemberView& mv : members) {
      if (mv.pair_of_edge[u] >= 0) {
        mapped = true;
        break;
      }
    }
    alive[u] = (mapped && alive[b.nodes[u].parent]) ? 1 : 0;
  }

  // Relabel phase: each surviving edge aggregates its proportional segment
  // length on every member's partner path. Members that do not map the
  // edge vote 0, the imaginary zero-length counterpart; under the median
  // or a zero endpoint weight the aggregate itself can vanish, and those
  // edges are dropped next. Drops stay subtree-shaped because the set of
  // members mapping an edge only shrinks toward the leaves.
  std::vector<double> new_len(n, 0.0);
  std::vector<double> scratch(k);
  for (int u : order) {
    if (u == b.root || !alive[u]) continue;
    if (!cfg.relabel) {
      new_len[u] = edge_length(b, u);
      continue;
    }
    for (int i = 0; i < k; ++i) {
      const MemberView& mv = members[i];
      const int j = mv.pair_of_edge[u];
      scratch[i] = (j >= 0) ? edge_length(b, u) / mv.len_b[j] * mv.len_m[j] : 0.0;
    }
    if (cfg.median) {
      new_len[u] = lower_median(scratch);
    } else {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += members[i].weight * scratch[i];
      new_len[u] = acc / cfg.divisor;
    }
  }
  for (int u : order) {
    if (u == b.root || !alive[u]) continue;
    if (!alive[b.nodes[u].parent] || !(new_len[u] > 0.0)) alive[u] = 0;
  }

  // Scalars are rebuilt cumulatively before any index compaction. Without
  // relabeling the originals are kept bit for bit.
  std::vector<double> new_f(n, 0.0);
  if (cfg.relabel) {
    for (int i = 0; i < k; ++i)
      scratch[i] = members[i].tree->nodes[members[i].tree->root].scalar;
    double root_f;
    if (cfg.median) {
      root_f = lower_median(scratch);
    } else {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += members[i].weight * scratch[i];
      root_f = acc / cfg.divisor;
    }
    new_f[b.root] = root_f;
    for (int u : order) {
      if (u == b.root || !alive[u]) continue;
      new_f[u] = new_f[b.nodes[u].parent] + new_len[u];
    }
  } else {
    for (int u = 0; u < n; ++u)
      if (alive[u]) new_f[u] = b.nodes[u].scalar;
  }

  // Survivors keep their relative order in the rebuilt arrays, so a no-op
  // update returns the input unchanged.
  std::vector<int> remap(n, -1);
  std::vector<double> out_scalars;
  std::vector<int> out_parents;
  for (int u = 0; u < n; ++u) {
    if (!alive[u]) continue;
    remap[u] = static_cast<int>(out_scalars.size());
    out_scalars.push_back(new_f[u]);
    out_parents.push_back(-1);  // rewritten below for every non-root survivor
  }

  double scale = 1.0;
  for (int u = 0; u < n; ++u)
    if (alive[u]) scale = std::max(scale, std::abs(new_f[u]));
  const double eps = 1e-9 * scale;  // snap/merge tolerance for insertions

  std::vector<std::vector<InsertRequest>> pending(n);  // by candidate edge child index
  std::vector<std::vector<int>> corr(k);               // member node -> rebuilt node id

  if (cfg.add) {
    for (int i = 0; i < k; ++i) corr[i].assign(members[i].tree->size(), -1);
    for (int i = 0; i < k; ++i) {
      const MemberView& mv = members[i];
      if (!(mv.weight > 0.0)) continue;  // nothing of this member survives at weight 0
      corr[i][mv.tree->root] = remap[b.root];
      for (size_t j = 0; j < mv.mapping->pairs.size(); ++j) {
        const PathPair& pr = mv.mapping->pairs[j];
        for (int q : pr.p1) {
          if (!alive[q])
            throw std::logic_error(
                "barycenter update: a positively weighted mapped path lost an edge");
        }
        corr[i][pr.p2.front()] = remap[pr.p1.front()];
        corr[i][pr.p2.back()] = remap[pr.p1.back()];
        const double base = new_f[pr.p1.front()];
        const double span = new_f[pr.p1.back()] - base;
        for (size_t s = 1; s + 1 < pr.p2.size(); ++s) {
          const int v = pr.p2[s];
          const double rel =
              (mv.tree->nodes[v].scalar - mv.tree->nodes[pr.p2.front()].scalar) / mv.len_m[j];
          const double scalar = base + rel * span;
          int snapped = -1, host = -1;
          for (int q : pr.p1) {
            if (std::abs(scalar - new_f[q]) <= eps) {
              snapped = q;
              break;
            }
            if (scalar < new_f[q]) {
              host = q;
              break;
            }
          }
          if (snapped >= 0)
            corr[i][v] = remap[snapped];
          else if (host >= 0)
            pending[host].push_back({scalar, i, v});
          else
            throw std::logic_error("barycenter update: insertion fell outside its path");
        }
      }
    }
  }

  // Materialize insertions edge by edge, fusing coincident requests, and
  // rewire each surviving child through the chain above it.
  for (int u = 0; u < n; ++u) {
    if (!alive[u] || u == b.root) continue;
    int top = remap[b.nodes[u].parent];
    std::vector<InsertRequest>& reqs = pending[u];
    std::sort(reqs.begin(), reqs.end(), [](const InsertRequest& a, const InsertRequest& b) {
      return std::tie(a.scalar, a.member, a.node) < std::tie(b.scalar, b.member, b.node);
    });
    size_t s = 0;
    while (s < reqs.size()) {
      const double anchor = reqs[s].scalar;
      const int id = static_cast<int>(out_scalars.size());
      out_scalars.push_back(anchor);
      out_parents.push_back(top);
      while (s < reqs.size() && reqs[s].scalar - anchor <= eps) {
        corr[reqs[s].member][reqs[s].node] = id;
        ++s;
      }
      top = id;
    }
    out_parents[remap[u]] = top;
  }

  // Graft unmapped member subtrees below their host nodes, scaled down by
  // the member's share. Every unmapped member edge hangs below exactly one
  // mapped-path node, so iterating hosts covers each subtree once.
  if (cfg.add) {
    for (int i = 0; i < k; ++i) {
      const MemberView& mv = members[i];
      if (!(mv.weight > 0.0)) continue;
      const double share = mv.weight / cfg.divisor;
      const std::vector<std::vector<int>> mkids = children_lists(*mv.tree);
      for (int v = 0; v < mv.tree->size(); ++v) {
        if (corr[i][v] < 0) continue;
        for (int c : mkids[v]) {
          if (mv.member_edge_mapped[c]) continue;
          const double base_f = out_scalars[corr[i][v]];
          const double member_base = mv.tree->nodes[v].scalar;
          std::vector<std::pair<int, int>> work = {{c, corr[i][v]}};
          while (!work.empty()) {
            const auto [mnode, parent_id] = work.back();
            work.pop_back();
            const int id = static_cast<int>(out_scalars.size());
            out_scalars.push_back(base_f +
                                  share * (mv.tree->nodes[mnode].scalar - member_base));
            out_parents.push_back(parent_id);
            for (int cc : mkids[mnode]) work.emplace_back(cc, id);
          }
        }
      }
    }
  }

  const MergeTree assembled = make_tree(b.kind, out_scalars, out_parents);
  MergeTree out = contract_unary_nodes(assembled);
  require_valid(out, context);
  return out;
}

std::vector<MemberView> checked_views(const MergeTree& b, const std::vector<PathMapping>& mappings,
                                      const std::vector<MergeTree>& trees, const char* context) {
  if (trees.empty()) throw std::invalid_argument(std::string(context) + ": no member trees");
  if (mappings.size() != trees.size())
    throw std::invalid_argument(std::string(context) + ": one mapping per member tree required");
  require_valid(b, context);
  std::vector<MemberView> views;
  views.reserve(trees.size());
  for (size_t i = 0; i < trees.size(); ++i) {
    require_valid(trees[i], context);
    if (trees[i].kind != b.kind)
      throw std::invalid_argument(std::string(context) + ": member tree kind differs");
    const std::vector<std::string> problems = validate_path_mapping(mappings[i], b, trees[i]);
    if (!problems.empty())
      throw std::invalid_argument(std::string(context) + ": mapping " + std::to_string(i) +
                                  " invalid: " + problems.front());
    views.push_back(build_view(b, trees[i], mappings[i], 1.0));
  }
  return views;
}

}  // namespace

PathMapping identity_mapping(const MergeTree& t) {
  PathMapping m;
  const std::vector<std::vector<int>> kids = children_lists(t);
  std::vector<int> stack = {t.root};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int c : kids[u]) {
      m.pairs.push_back({{u, c}, {u, c}});
      stack.push_back(c);
    }
  }
  return m;
}

Geodesic make_geodesic(const MergeTree& t0, const MergeTree& t1) {
  require_valid(t0, "geodesic endpoint");
  require_valid(t1, "geodesic endpoint");
  Geodesic g;
  g.t0 = t0;
  g.t1 = t1;
  PathDistanceResult r = path_mapping_distance(t0, t1);
  g.mapping = std::move(r.mapping);
  g.distance = r.distance;
  return g;
}

MergeTree sample_geodesic(const Geodesic& g, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("sample_geodesic: alpha must lie in [0, 1]");
  const PathMapping self = identity_mapping(g.t0);
  std::vector<MemberView> views;
  views.reserve(2);
  views.push_back(build_view(g.t0, g.t0, self, 1.0 - alpha));
  views.push_back(build_view(g.t0, g.t1, g.mapping, alpha));
  const UpdateConfig cfg;  // relabel + add over true weights
  return weighted_update(g.t0, views, cfg, "geodesic sample");
}

MergeTree remove_unmatched(const MergeTree& b, const std::vector<PathMapping>& mappings,
                           const std::vector<MergeTree>& trees) {
  const std::vector<MemberView> views = checked_views(b, mappings, trees, "remove_unmatched");
  UpdateConfig cfg;
  cfg.relabel = false;
  cfg.add = false;
  return weighted_update(b, views, cfg, "remove_unmatched");
}

MergeTree relabel_barycenter(const MergeTree& b, const std::vector<PathMapping>& mappings,
                             const std::vector<MergeTree>& trees) {
  const std::vector<MemberView> views = checked_views(b, mappings, trees, "relabel_barycenter");
  UpdateConfig cfg;
  cfg.relabel = true;
  cfg.add = false;
  cfg.divisor = static_cast<double>(trees.size());
  return weighted_update(b, views, cfg, "relabel_barycenter");
}

MergeTree add_unmatched(const MergeTree& b, const std::vector<PathMapping>& mappings,
                        const std::vector<MergeTree>& trees) {
  const std::vector<MemberView> views = checked_views(b, mappings, trees, "add_unmatched");
  UpdateConfig cfg;
  cfg.relabel = false;
  cfg.add = true;
  cfg.divisor = static_cast<double>(trees.size());
  return weighted_update(b, views, cfg, "add_unmatched");
}

PmBarycenterResult pm_barycenter(const std::vector<MergeTree>& trees,
                                 const PmBarycenterOptions& options) {
  if (trees.empty()) throw std::invalid_argument("pm_barycenter: need at least one member tree");
  for (const MergeTree& t : trees) require_valid(t, "pm_barycenter member");
  for (const MergeTree& t : trees) {
    if (t.kind != trees.front().kind)
      throw std::invalid_argument("pm_barycenter: members mix split and join trees");
  }
  const int k = static_cast<int>(trees.size());
  if (options.init_index < 0 || options.init_index >= k)
    throw std::invalid_argument("pm_barycenter: init_index out of range");
  if (options.max_iterations < 1)
    throw std::invalid_argument("pm_barycenter: max_iterations must be at least 1");

  PmBarycenterResult res;
  res.tree = trees[options.init_index];
  res.mappings.assign(k, {});
  std::vector<double> dist(k, 0.0);
  const auto assign = [&]() {
    parallel_for(k, options.threads, [&](int i) {
      PathDistanceResult r = path_mapping_distance(res.tree, trees[i]);
      res.mappings[i] = std::move(r.mapping);
      dist[i] = r.distance;
    });
    double e = 0.0;
    for (double d : dist) e += d;
    return e;
  };

  const auto leaf_count = [&]() {
    int leaves = 0;
    for (const auto& kids : children_lists(res.tree))
      if (kids.empty()) ++leaves;
    return leaves;
  };

  double energy = assign();
  res.energy_trace.push_back(energy);
  res.leaf_trace.push_back(leaf_count());

  UpdateConfig cfg;
  cfg.relabel = true;
  cfg.add = options.variant == BarycenterVariant::mean;
  cfg.median = options.variant == BarycenterVariant::median;
  cfg.divisor = static_cast<double>(k);

  for (int it = 0; it < options.max_iterations; ++it) {
    std::vector<MemberView> views;
    views.reserve(k);
    for (int i = 0; i < k; ++i)
      views.push_back(build_view(res.tree, trees[i], res.mappings[i], 1.0));
    res.tree = weighted_update(res.tree, views, cfg, "pm_barycenter update");

    const double prev = energy;
    energy = assign();
    res.energy_trace.push_back(energy);
    res.leaf_trace.push_back(leaf_count());
    ++res.iterations;
    if (prev == 0.0) break;
    if (std::abs(energy - prev) <= options.rel_tolerance * prev) break;
  }
  return res;
}

double frechet_energy(const MergeTree& b, const std::vector<MergeTree>& trees, Metric metric,
                      int threads) {
  std::vector<double> per(trees.size(), 0.0);
  if (metric == Metric::path) {
    parallel_for(static_cast<int>(trees.size()), threads,
                 [&](int i) { per[i] = path_mapping_distance(b, trees[i]).distance; });
  } else {
    const Bdt bb = elder_bdt(b);
    parallel_for(static_cast<int>(trees.size()), threads, [&](int i) {
      const double d = wasserstein_distance(bb, elder_bdt(trees[i])).distance;
      per[i] = d * d;
    });
  }
  double sum = 0.0;
  for (double v : per) sum += v;
  return sum;
}

}  // namespace mtd
