#pragma once

#include <vector>

#include "mtdist/merge_tree.hpp"
#include "mtdist/path_distance.hpp"

namespace mtd {

enum class Metric { path, wasserstein };

// The mapping that pairs every edge of t with itself, parents listed before
// children. Feeding it to the update engine pins one member to the current
// candidate, which is how a geodesic endpoint keeps its own geometry.
PathMapping identity_mapping(const MergeTree& t);

struct Geodesic {
  MergeTree t0;
  MergeTree t1;
  PathMapping mapping;  // optimal path mapping from t0 onto t1
  double distance = 0.0;
};

// Precomputes the optimal mapping between the endpoints; sampling runs the
// weighted two-member update against it.
Geodesic make_geodesic(const MergeTree& t0, const MergeTree& t1);

// Tree at parameter alpha in [0, 1]: matched nodes interpolate linearly,
// interior path nodes keep their relative position, subtrees missing from
// the far endpoint shrink by 1-alpha, subtrees missing from the near one
// grow by alpha. sample(0) reproduces t0 and sample(1) is isomorphic to t1
// once degree-2 leftovers are contracted. Throws on alpha outside [0, 1].
MergeTree sample_geodesic(const Geodesic& g, double alpha);

// The three update subroutines, each usable on its own. `mappings[i]` pairs
// paths of b with paths of trees[i] and must validate; every mapping needs
// at least one pair (optimal mappings between valid trees always have one).

// Drops every edge of b that no mapping covers, then repairs single-child
// nodes. Unmapped edges always form whole subtrees, so no holes appear.
MergeTree remove_unmatched(const MergeTree& b, const std::vector<PathMapping>& mappings,
                           const std::vector<MergeTree>& trees);

// Sets each edge length to the mean over members of its proportional
// segment on the mapped partner path; members that do not map the edge
// contribute zero. Node scalars are rebuilt from the new lengths with the
// root anchored at the mean member root value.
MergeTree relabel_barycenter(const MergeTree& b, const std::vector<PathMapping>& mappings,
                             const std::vector<MergeTree>& trees);

// Inserts interior member-path nodes at their relative positions along the
// mapped candidate paths and grafts unmapped member subtrees there, edge
// lengths scaled by 1/k.
MergeTree add_unmatched(const MergeTree& b, const std::vector<PathMapping>& mappings,
                        const std::vector<MergeTree>& trees);

enum class BarycenterVariant { mean, median };

struct PmBarycenterOptions {
  BarycenterVariant variant = BarycenterVariant::mean;
  int init_index = 0;
  int max_iterations = 100;
  double rel_tolerance = 0.01;  // stop once |E_t - E_{t-1}| <= rel_tolerance * E_{t-1}
  int threads = 1;
};

struct PmBarycenterResult {
  MergeTree tree;
  std::vector<double> energy_trace;   // energy before any update, then one entry per update
  std::vector<int> leaf_trace;        // candidate leaf count, aligned with energy_trace
  std::vector<PathMapping> mappings;  // final optimal mapping per member
  int iterations = 0;                 // number of update steps taken
};

// Frechet-mean iteration under the path mapping distance: start from the
// member picked by init_index, then alternate optimal-mapping assignment
// with the remove/relabel/add update (the median variant aggregates with
// the lower median and never adds edges). The energy is not guaranteed to
// decrease monotonically, so the loop stops on small relative change or
// after max_iterations.
PmBarycenterResult pm_barycenter(const std::vector<MergeTree>& trees,
                                 const PmBarycenterOptions& options = {});

// Energy of candidate b against the members: plain sum of path mapping
// distances, or sum of squared Wasserstein distances between elder BDTs.
double frechet_energy(const MergeTree& b, const std::vector<MergeTree>& trees, Metric metric,
                      int threads = 1);

}  // namespace mtd
