#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mtdist/interpolate.hpp"
#include "mtdist/merge_tree.hpp"

namespace mtd {

// All pairwise distances under the chosen metric: path mapping distances,
// or Wasserstein distances between the elder BDTs in their raw coordinates.
// Each unordered pair is computed once and mirrored, so the matrix comes
// back exactly symmetric with a zero diagonal.
std::vector<std::vector<double>> distance_matrix(const std::vector<MergeTree>& trees,
                                                 Metric metric, int threads = 1);

// Chance-corrected agreement of two partitions from the standard
// contingency-table formula, in [-1, 1] and invariant under relabeling.
// Degenerate pairs whose expected agreement already equals the maximum
// (both trivial partitions) score 1.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

struct KmeansRun {
  uint64_t seed = 0;             // derived generator seed this run drew from
  std::vector<int> assignments;  // member index -> cluster id
  // Energy after every assignment and every recentering half-step, in
  // order. Under the Wasserstein metric the sequence never increases.
  std::vector<double> energy_trace;
  double energy = 0.0;  // final energy, the run-selection key
  int rounds = 0;       // completed assign/recenter rounds
};

struct ClusterOptions {
  int runs = 1;
  uint64_t seed = 42;
  int max_rounds = 50;
  int threads = 1;
  // Ground-truth labels; when non-empty the result reports the adjusted
  // rand index of the best run against them.
  std::vector<int> truth;
};

struct ClusterResult {
  std::vector<int> assignments;      // best run's member -> cluster id
  std::vector<MergeTree> centroids;  // best run's centroids, one per cluster
  std::vector<KmeansRun> runs;
  double energy = 0.0;        // best run's final energy
  std::optional<double> ari;  // agreement with ClusterOptions::truth
};

// Lloyd-style k-means over a merge-tree ensemble. Each run initializes the
// centroids as k distinct members drawn without replacement, then
// alternates nearest-centroid assignment with barycenter recentering until
// the assignment stops changing or max_rounds is hit; the best of `runs`
// seeded runs by final energy wins. Energy is the Frechet objective of the
// metric: summed distances for the path metric, summed squared distances
// for Wasserstein. The Wasserstein variant runs entirely in locally
// normalized branch coordinates, the space its barycenter optimizes, which
// keeps the energy trace non-increasing.
ClusterResult kmeans(const std::vector<MergeTree>& trees, int k, Metric metric,
                     const ClusterOptions& options = {});

struct ReductionResult {
  std::vector<int> keyframes;            // sorted, always includes first and last
  std::vector<MergeTree> reconstructed;  // one tree per original frame index
  // Per-frame distance between the original and its reconstruction, under
  // both metrics regardless of which one drove the reconstruction.
  // Keyframe rows are exactly zero: their reconstruction is the original.
  std::vector<double> path_error;
  std::vector<double> wasserstein_error;
};

// Greedy keyframe selection for a tree time series: repeatedly drop the
// interior frame whose reconstruction from its current neighbors lies
// nearest to the original under the chosen metric (ties to the smallest
// frame index), until `keep` frames remain. Endpoints are never dropped.
std::vector<int> temporal_reduce(const std::vector<MergeTree>& trees, int keep,
                                 Metric metric, int threads = 1);

// Rebuild every frame from the keyframes: a keyframe is returned as-is, a
// frame t strictly between keyframes l < r is the geodesic point at
// (t - l) / (r - l). The path metric interpolates along an optimal path
// mapping; Wasserstein interpolates the elder BDTs in locally normalized
// coordinates, which keeps the result invertible into a valid tree.
ReductionResult temporal_reconstruct(const std::vector<MergeTree>& trees,
                                     const std::vector<int>& keyframes, Metric metric,
                                     int threads = 1);

}  // namespace mtd
