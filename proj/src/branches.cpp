#include "mtdist/branches.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtd {

namespace {

// Per-node winner of the elder rule: the leaf with the highest scalar in
// the node's subtree, ties broken toward the smallest external id. The
// continuing child at a saddle is the one whose subtree owns that leaf.
std::vector<int> elder_leaf_per_node(const MergeTree& t,
                                     const std::vector<std::vector<int>>& kids) {
  const int n = t.size();
  std::vector<int> best(n, -1);
  // Children precede parents nowhere in particular, so process nodes in
  // decreasing depth via an explicit post-order stack.
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> stack = {t.root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : kids[v]) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (kids[v].empty()) {
      best[v] = v;
      continue;
    }
    int win = -1;
    for (int c : kids[v]) {
      const int cand = best[c];
      if (win < 0) {
        win = cand;
        continue;
      }
      const double fw = t.nodes[win].scalar;
      const double fc = t.nodes[cand].scalar;
      if (fc > fw || (fc == fw && t.nodes[cand].id < t.nodes[win].id)) win = cand;
    }
    best[v] = win;
  }
  return best;
}

}  // namespace

BranchDecomposition branch_decomposition_elder(const MergeTree& t) {
  require_valid(t, "branch_decomposition_elder");
  const auto kids = children_lists(t);
  const auto best = elder_leaf_per_node(t, kids);

  BranchDecomposition d;
  // Each job opens one branch: the main branch starts at the root, every
  // other branch starts at a saddle and immediately steps into the side
  // child that lost the elder rule there.
  struct Job {
    int saddle;  // first path node
    int via;     // second path node, -1 for the main branch
    int parent_branch;
  };
  std::vector<Job> jobs = {{.saddle = t.root, .via = -1, .parent_branch = -1}};
  while (!jobs.empty()) {
    const Job job = jobs.back();
    jobs.pop_back();
    const int self = static_cast<int>(d.branches.size());

    Branch br;
    br.parent = job.parent_branch;
    br.path.push_back(job.saddle);
    int v = job.via >= 0 ? job.via : job.saddle;
    if (job.via >= 0) br.path.push_back(v);
    while (!kids[v].empty()) {
      int cont = -1;
      for (int c : kids[v]) {
        if (cont < 0 && best[c] == best[v]) {
          cont = c;
        } else {
          jobs.push_back({.saddle = v, .via = c, .parent_branch = self});
        }
      }
      v = cont;
      br.path.push_back(v);
    }
    br.leaf = v;
    br.birth = t.nodes[job.saddle].scalar;
    br.death = t.nodes[v].scalar;
    if (job.parent_branch < 0) d.main = self;
    d.branches.push_back(std::move(br));
  }
  return d;
}

Bdt bdt_of(const BranchDecomposition& d, const MergeTree& t) {
  Bdt b;
  b.kind = t.kind;
  b.root = d.main;
  b.branches.reserve(d.branches.size());
  for (const Branch& br : d.branches) {
    BdtBranch node;
    node.id = t.nodes[br.leaf].id;
    node.birth = br.birth;
    node.death = br.death;
    node.parent = br.parent;
    b.branches.push_back(node);
  }
  return b;
}

Bdt elder_bdt(const MergeTree& t) {
  return bdt_of(branch_decomposition_elder(t), t);
}

std::vector<std::vector<int>> bdt_children(const Bdt& b) {
  std::vector<std::vector<int>> kids(b.branches.size());
  for (int i = 0; i < b.size(); ++i) {
    const int p = b.branches[i].parent;
    if (p >= 0) kids[p].push_back(i);
  }
  return kids;
}

namespace {

void check_bdt(const Bdt& b) {
  if (b.branches.empty()) throw std::invalid_argument("bdt_to_tree: empty decomposition");
  if (b.root < 0 || b.root >= b.size())
    throw std::invalid_argument("bdt_to_tree: root index out of range");
  for (int i = 0; i < b.size(); ++i) {
    const BdtBranch& br = b.branches[i];
    if (!(br.death > br.birth))
      throw std::invalid_argument("bdt_to_tree: branch " + std::to_string(br.id) +
                                  " has nonpositive persistence");
    if ((br.parent < 0) != (i == b.root))
      throw std::invalid_argument("bdt_to_tree: parent links disagree with root");
    if (br.parent >= b.size())
      throw std::invalid_argument("bdt_to_tree: parent index out of range");
    if (br.parent >= 0) {
      const BdtBranch& pa = b.branches[br.parent];
      if (br.birth < pa.birth || br.death > pa.death)
        throw std::invalid_argument("bdt_to_tree: branch " + std::to_string(br.id) +
                                    " is not nested inside its parent");
      if (br.birth <= pa.birth)
        throw std::invalid_argument("bdt_to_tree: branch " + std::to_string(br.id) +
                                    " attaches at its parent's start");
    }
  }
}

}  // namespace

MergeTree bdt_to_tree(const Bdt& b) {
  check_bdt(b);
  const auto kids = bdt_children(b);

  std::vector<double> scalars;
  std::vector<int> parents;
  auto add_node = [&](double f, int parent) {
    scalars.push_back(f);
    parents.push_back(parent);
    return static_cast<int>(scalars.size()) - 1;
  };

  // Materialize one branch as a chain root-side node -> saddles -> leaf,
  // where saddles sit at the distinct birth values of child branches.
  // Children sharing a birth value share the saddle node.
  struct Job {
    int branch;
    int attach;  // node the branch's start hangs from (-1 for the main branch)
  };
  std::vector<Job> jobs;
  {
    const int root_node = add_node(b.branches[b.root].birth, -1);
    jobs.push_back({.branch = b.root, .attach = root_node});
  }
  while (!jobs.empty()) {
    const Job job = jobs.back();
    jobs.pop_back();
    const BdtBranch& br = b.branches[job.branch];

    std::map<double, std::vector<int>> at_birth;
    for (int c : kids[job.branch]) at_birth[b.branches[c].birth].push_back(c);

    int prev = job.attach;
    double prev_f = scalars[prev];
    for (const auto& [birth, group] : at_birth) {
      int saddle = prev;
      if (birth > prev_f) {
        saddle = add_node(birth, prev);
        prev = saddle;
        prev_f = birth;
      }
      for (int c : group) jobs.push_back({.branch = c, .attach = saddle});
    }
    add_node(br.death, prev);
  }

  MergeTree t = make_tree(b.kind, scalars, parents);
  require_valid(t, "bdt_to_tree");
  return t;
}

MergeTree simplify(const MergeTree& t, double threshold_fraction) {
  require_valid(t, "simplify");
  if (!(threshold_fraction >= 0.0))
    throw std::invalid_argument("simplify: threshold fraction must be nonnegative");
  const double threshold = threshold_fraction * scalar_range(t);

  MergeTree cur = t;
  for (;;) {
    const BranchDecomposition d = branch_decomposition_elder(cur);
    // The least persistent removable branch. Children of a branch are
    // strictly less persistent than the branch itself, so the minimum over
    // non-main branches is automatically childless, i.e. a single edge.
    int pick = -1;
    for (int i = 0; i < static_cast<int>(d.branches.size()); ++i) {
      if (i == d.main) continue;
      const Branch& br = d.branches[i];
      if (!(br.persistence() < threshold)) continue;
      if (pick < 0 || br.persistence() < d.branches[pick].persistence() ||
          (br.persistence() == d.branches[pick].persistence() &&
           cur.nodes[br.leaf].id < cur.nodes[d.branches[pick].leaf].id)) {
        pick = i;
      }
    }
    if (pick < 0) break;

    std::vector<char> alive(cur.size(), 1);
    alive[d.branches[pick].leaf] = 0;
    cur = contract_unary_nodes(compact_alive(cur, alive));
    if (cur.size() == 2) break;  // single edge, nothing removable remains
  }
  return cur;
}

}  // namespace mtd
