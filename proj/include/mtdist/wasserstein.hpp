#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mtdist/branches.hpp"

namespace mtd {

// Branches as points in the birth/death plane.
struct BdPoint {
  double x = 0.0;  // birth
  double y = 0.0;  // death
};

inline BdPoint branch_point(const BdtBranch& b) { return {b.birth, b.death}; }

// Nearest diagonal point, the zero-persistence shadow of a branch.
inline BdPoint diagonal_projection(BdPoint p) {
  const double m = 0.5 * (p.x + p.y);
  return {m, m};
}

// Euclidean in the plane, except between two diagonal points, which are
// interchangeable and therefore at distance zero.
double ground_distance(BdPoint a, BdPoint b);

struct WassersteinResult {
  double distance = 0.0;  // square root of the total squared cost
  // Matched branch index pairs (first tree, second tree), roots included.
  // Branches absent on a side are destroyed onto the diagonal.
  std::vector<std::pair<int, int>> matches;
};

// Rooted-isomorphism-constrained 2-Wasserstein distance between branch
// decomposition trees: roots always pair, children match only under
// matched parents, destruction projects a whole subtree to the diagonal.
// Exact via recursive children assignment.
WassersteinResult wasserstein_distance(const Bdt& a, const Bdt& b);

// Map every non-root branch into its parent's local frame: (birth, death)
// become coordinates relative to the original parent span. The root keeps
// absolute coordinates. Throws on zero-persistence parents.
Bdt normalize_bdt(const Bdt& b);
// Inverse, applied top-down so children read their parent's absolute span.
Bdt denormalize_bdt(const Bdt& b);

struct WassBarycenterOptions {
  int init_index = 0;
  // Explicit initial candidate, e.g. a previous centroid to warm-start a
  // clustering round; overrides init_index when set.
  std::optional<Bdt> init;
  int max_iterations = 100;
  double rel_tolerance = 0.01;
  int threads = 1;
};

struct WassBarycenterResult {
  Bdt barycenter;                    // normalized coordinates
  std::vector<double> energy_trace;  // Frechet energy before/after each update
  // Candidate branch count aligned with energy_trace; every branch ends in
  // one leaf of the rebuilt tree, so this is also its leaf count.
  std::vector<int> leaf_trace;
  int iterations = 0;
};

// Frechet mean under squared Wasserstein distances in normalized
// coordinates: assignment step against every member, then an update that
// averages matched member points (destroyed members contribute the
// candidate's own diagonal projection) and spawns candidates for member
// branches unmatched under matched parents. Energy never increases.
WassBarycenterResult wasserstein_barycenter(const std::vector<Bdt>& members,
                                            const WassBarycenterOptions& opts = {});

// Point on the Wasserstein geodesic between two normalized BDTs: matched
// branches interpolate linearly, unmatched ones shrink toward or grow from
// their diagonal projection. alpha = 0 gives a, alpha = 1 gives b.
Bdt wasserstein_interpolate(const Bdt& a, const Bdt& b, double alpha);

// Sum over members of squared distances to the candidate, the quantity the
// barycenter minimizes (raw coordinates in, computed as-is).
double wasserstein_energy(const Bdt& candidate, const std::vector<Bdt>& members,
                          int threads = 1);

}  // namespace mtd
