#include "mtdist/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mtdist/assignment.hpp"
#include "mtdist/parallel.hpp"

namespace mtd {

double ground_distance(BdPoint a, BdPoint b) {
  if (a.y == a.x && b.y == b.x) return 0.0;  // diagonal points are interchangeable
  return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kPruneEps = 1e-12;

double persistence(const BdtBranch& b) { return b.death - b.birth; }

// Squared cost of projecting a whole subtree onto the diagonal; the
// destroy option of the recursive assignment.
std::vector<double> destroy_costs(const Bdt& t, const std::vector<std::vector<int>>& kids) {
  std::vector<double> out(t.branches.size(), 0.0);
  // Children carry higher indices in no particular order; accumulate in
  // reverse topological order via an explicit stack.
  std::vector<int> order;
  order.reserve(t.branches.size());
  std::vector<int> stack = {t.root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : kids[v]) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    const double pers = persistence(t.branches[v]);
    out[v] = 0.5 * pers * pers;  // squared distance to the diagonal
    for (int c : kids[v]) out[v] += out[c];
  }
  return out;
}

// Recursive squared-cost table between subtree pairs under the rooted
// isomorphism constraint: a pair costs its ground distance squared plus an
// exact assignment of the children where dropping destroys the subtree.
class WassSolver {
 public:
  WassSolver(const Bdt& a, const Bdt& b)
      : a_(a), b_(b), ka_(bdt_children(a)), kb_(bdt_children(b)) {
    da_ = destroy_costs(a, ka_);
    db_ = destroy_costs(b, kb_);
    memo_.assign(a.branches.size() * b.branches.size(), kNan);
  }

  double cost(int i, int j) {
    double& slot = memo_[i * b_.branches.size() + j];
    if (!std::isnan(slot)) return slot;
    const double g = ground_distance(branch_point(a_.branches[i]), branch_point(b_.branches[j]));
    slot = g * g + children_assignment(i, j).cost;
    return slot;
  }

  Assignment children_assignment(int i, int j) {
    const auto& ca = ka_[i];
    const auto& cb = kb_[j];
    std::vector<double> drop_a(ca.size()), drop_b(cb.size());
    for (std::size_t k = 0; k < ca.size(); ++k) drop_a[k] = da_[ca[k]];
    for (std::size_t k = 0; k < cb.size(); ++k) drop_b[k] = db_[cb[k]];
    return solve_assignment(
        static_cast<int>(ca.size()), static_cast<int>(cb.size()),
        [&](int x, int y) { return cost(ca[x], cb[y]); }, drop_a, drop_b);
  }

  void collect_matches(int i, int j, std::vector<std::pair<int, int>>& out) {
    out.emplace_back(i, j);
    const Assignment sol = children_assignment(i, j);
    for (auto [x, y] : sol.matches) collect_matches(ka_[i][x], kb_[j][y], out);
  }

 private:
  const Bdt& a_;
  const Bdt& b_;
  std::vector<std::vector<int>> ka_, kb_;
  std::vector<double> da_, db_;
  std::vector<double> memo_;
};

void check_bdt_arg(const Bdt& t, const char* context) {
  if (t.branches.empty())
    throw std::invalid_argument(std::string(context) + ": empty branch decomposition");
  if (t.root < 0 || t.root >= t.size())
    throw std::invalid_argument(std::string(context) + ": root index out of range");
}

}  // namespace

WassersteinResult wasserstein_distance(const Bdt& a, const Bdt& b) {
  check_bdt_arg(a, "wasserstein_distance");
  check_bdt_arg(b, "wasserstein_distance");
  if (a.kind != b.kind)
    throw std::invalid_argument("wasserstein_distance: cannot compare split and join trees");
  WassSolver solver(a, b);
  WassersteinResult out;
  out.distance = std::sqrt(solver.cost(a.root, b.root));
  solver.collect_matches(a.root, b.root, out.matches);
  return out;
}

Bdt normalize_bdt(const Bdt& b) {
  check_bdt_arg(b, "normalize_bdt");
  Bdt out = b;
  for (int i = 0; i < b.size(); ++i) {
    const int p = b.branches[i].parent;
    if (p < 0) continue;
    const double lo = b.branches[p].birth;
    const double span = b.branches[p].death - lo;
    if (!(span > 0.0))
      throw std::invalid_argument("normalize_bdt: parent branch with nonpositive span");
    out.branches[i].birth = (b.branches[i].birth - lo) / span;
    out.branches[i].death = (b.branches[i].death - lo) / span;
  }
  return out;
}

Bdt denormalize_bdt(const Bdt& b) {
  check_bdt_arg(b, "denormalize_bdt");
  Bdt out = b;
  const auto kids = bdt_children(b);
  std::vector<int> stack = {b.root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int c : kids[v]) {
      const double lo = out.branches[v].birth;
      const double span = out.branches[v].death - lo;
      out.branches[c].birth = lo + span * b.branches[c].birth;
      out.branches[c].death = lo + span * b.branches[c].death;
      stack.push_back(c);
    }
  }
  return out;
}

double wasserstein_energy(const Bdt& candidate, const std::vector<Bdt>& members, int threads) {
  std::vector<double> sq(members.size(), 0.0);
  parallel_for(static_cast<int>(members.size()), threads, [&](int i) {
    const double d = wasserstein_distance(candidate, members[i]).distance;
    sq[i] = d * d;
  });
  double total = 0.0;
  for (double v : sq) total += v;
  return total;
}

namespace {

// Remove zero-persistence subtrees: a branch survives if it or any
// descendant still carries persistence. The root always survives.
Bdt prune_flat_subtrees(const Bdt& b) {
  const auto kids = bdt_children(b);
  std::vector<char> keep(b.size(), 0);
  std::vector<int> order;
  std::vector<int> stack = {b.root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : kids[v]) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    keep[v] = persistence(b.branches[v]) > kPruneEps ? 1 : 0;
    for (int c : kids[v]) keep[v] = keep[v] || keep[c];
  }
  keep[b.root] = 1;

  Bdt out;
  out.kind = b.kind;
  std::vector<int> remap(b.size(), -1);
  for (int v = 0; v < b.size(); ++v) {
    if (!keep[v]) continue;
    // Parents precede children in `order`, but not in index order; map
    // after the keep pass using the original parent links.
    remap[v] = static_cast<int>(out.branches.size());
    out.branches.push_back(b.branches[v]);
  }
  for (BdtBranch& br : out.branches)
    if (br.parent >= 0) br.parent = remap[br.parent];
  out.root = remap[b.root];
  return out;
}

}  // namespace

WassBarycenterResult wasserstein_barycenter(const std::vector<Bdt>& members,
                                            const WassBarycenterOptions& opts) {
  if (members.empty())
    throw std::invalid_argument("wasserstein_barycenter: no members");
  for (const Bdt& m : members) check_bdt_arg(m, "wasserstein_barycenter");
  for (const Bdt& m : members)
    if (m.kind != members.front().kind)
      throw std::invalid_argument("wasserstein_barycenter: mixed tree kinds");
  if (opts.init_index < 0 || opts.init_index >= static_cast<int>(members.size()))
    throw std::invalid_argument("wasserstein_barycenter: init index out of range");
  if (opts.init) {
    check_bdt_arg(*opts.init, "wasserstein_barycenter");
    if (opts.init->kind != members.front().kind)
      throw std::invalid_argument("wasserstein_barycenter: init candidate kind mismatch");
  }

  const int n = static_cast<int>(members.size());
  Bdt cand = opts.init ? *opts.init : members[opts.init_index];
  long long next_id = 0;
  for (const BdtBranch& br : cand.branches) next_id = std::max(next_id, br.id + 1);
  for (const Bdt& m : members)
    for (const BdtBranch& br : m.branches) next_id = std::max(next_id, br.id + 1);

  WassBarycenterResult out;
  std::vector<WassersteinResult> matchings(n);

  auto assignment_round = [&] {
    double energy = 0.0;
    std::vector<double> sq(n, 0.0);
    parallel_for(n, opts.threads, [&](int i) {
      matchings[i] = wasserstein_distance(cand, members[i]);
      sq[i] = matchings[i].distance * matchings[i].distance;
    });
    for (double v : sq) energy += v;
    return energy;
  };

  double prev = assignment_round();
  out.energy_trace.push_back(prev);
  out.leaf_trace.push_back(cand.size());

  while (out.iterations < opts.max_iterations) {
    // Update step: average each candidate branch over the members, taking
    // the member's matched point where one exists and the candidate's own
    // diagonal projection where the branch was destroyed.
    std::vector<BdPoint> sums(cand.size());
    for (int v = 0; v < cand.size(); ++v) {
      const BdPoint diag = diagonal_projection(branch_point(cand.branches[v]));
      sums[v] = {diag.x * n, diag.y * n};
    }
    for (int i = 0; i < n; ++i) {
      for (auto [cv, mv] : matchings[i].matches) {
        const BdPoint diag = diagonal_projection(branch_point(cand.branches[cv]));
        const BdPoint pt = branch_point(members[i].branches[mv]);
        sums[cv].x += pt.x - diag.x;
        sums[cv].y += pt.y - diag.y;
      }
    }

    Bdt next;
    next.kind = cand.kind;
    next.root = cand.root;
    next.branches = cand.branches;
    for (int v = 0; v < cand.size(); ++v) {
      next.branches[v].birth = sums[v].x / n;
      next.branches[v].death = sums[v].y / n;
    }

    // Spawn step: member subtrees unmatched under a matched parent enter
    // the candidate pulled most of the way to their diagonal, the exact
    // minimizer of one match against n-1 destructions.
    for (int i = 0; i < n; ++i) {
      const auto kids = bdt_children(members[i]);
      std::vector<int> cand_of(members[i].size(), -1);
      for (auto [cv, mv] : matchings[i].matches) cand_of[mv] = cv;
      // Walk down from matched member branches into unmatched children.
      std::vector<int> stack;
      for (auto [cv, mv] : matchings[i].matches) stack.push_back(mv);
      while (!stack.empty()) {
        const int mv = stack.back();
        stack.pop_back();
        for (int c : kids[mv]) {
          if (cand_of[c] >= 0) {
            stack.push_back(c);
            continue;
          }
          const BdPoint pt = branch_point(members[i].branches[c]);
          const BdPoint diag = diagonal_projection(pt);
          BdtBranch spawn;
          spawn.id = next_id++;
          spawn.birth = (pt.x + (n - 1) * diag.x) / n;
          spawn.death = (pt.y + (n - 1) * diag.y) / n;
          spawn.parent = cand_of[mv];
          cand_of[c] = static_cast<int>(next.branches.size());
          next.branches.push_back(spawn);
          stack.push_back(c);
        }
      }
    }

    cand = prune_flat_subtrees(next);
    ++out.iterations;

    const double energy = assignment_round();
    out.energy_trace.push_back(energy);
    out.leaf_trace.push_back(cand.size());
    if (prev == 0.0 || std::abs(energy - prev) <= opts.rel_tolerance * prev) break;
    prev = energy;
  }

  out.barycenter = cand;
  return out;
}

Bdt wasserstein_interpolate(const Bdt& a, const Bdt& b, double alpha) {
  check_bdt_arg(a, "wasserstein_interpolate");
  check_bdt_arg(b, "wasserstein_interpolate");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("wasserstein_interpolate: alpha outside [0, 1]");

  const WassersteinResult w = wasserstein_distance(a, b);
  std::vector<int> b_of_a(a.size(), -1);
  for (auto [i, j] : w.matches) b_of_a[i] = j;
  std::vector<char> b_matched(b.size(), 0);
  for (auto [i, j] : w.matches) b_matched[j] = 1;

  Bdt out;
  out.kind = a.kind;
  long long next_id = 0;

  // a-side branches in index order: parents of matched branches are
  // matched, parents of unmatched ones may be either, and both already
  // have an output slot by the time their children are visited top-down.
  const auto ka = bdt_children(a);
  const auto kb = bdt_children(b);
  std::vector<int> out_of_a(a.size(), -1);
  std::vector<int> stack = {a.root};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const BdPoint pa = branch_point(a.branches[i]);
    const BdPoint target =
        b_of_a[i] >= 0 ? branch_point(b.branches[b_of_a[i]]) : diagonal_projection(pa);
    BdtBranch br;
    br.id = next_id++;
    br.birth = (1.0 - alpha) * pa.x + alpha * target.x;
    br.death = (1.0 - alpha) * pa.y + alpha * target.y;
    br.parent = a.branches[i].parent >= 0 ? out_of_a[a.branches[i].parent] : -1;
    out_of_a[i] = static_cast<int>(out.branches.size());
    if (br.parent < 0) out.root = out_of_a[i];
    out.branches.push_back(br);
    for (int c : ka[i]) stack.push_back(c);
  }

  // Unmatched b-side subtrees grow from the diagonal under the output
  // counterpart of their closest matched ancestor.
  std::vector<int> out_of_b(b.size(), -1);
  for (auto [i, j] : w.matches) out_of_b[j] = out_of_a[i];
  std::vector<int> walk = {b.root};
  while (!walk.empty()) {
    const int j = walk.back();
    walk.pop_back();
    for (int c : kb[j]) walk.push_back(c);
    if (b_matched[j] || j == b.root) continue;
    // The walk is top-down and the root is always matched, so the parent
    // output slot exists by the time any unmatched branch is reached.
    const int parent_out = out_of_b[b.branches[j].parent];
    if (parent_out < 0)
      throw std::logic_error("wasserstein_interpolate: match structure skipped a level");
    const BdPoint pb = branch_point(b.branches[j]);
    const BdPoint diag = diagonal_projection(pb);
    BdtBranch br;
    br.id = next_id++;
    br.birth = (1.0 - alpha) * diag.x + alpha * pb.x;
    br.death = (1.0 - alpha) * diag.y + alpha * pb.y;
    br.parent = parent_out;
    out_of_b[j] = static_cast<int>(out.branches.size());
    out.branches.push_back(br);
  }

  return prune_flat_subtrees(out);
}

}  // namespace mtd
