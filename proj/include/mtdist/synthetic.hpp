#pragma once

#include <cstdint>
#include <vector>

#include "mtdist/grid.hpp"
#include "mtdist/merge_tree.hpp"

namespace mtd {

// Ensemble of Gaussian-hill scalar fields: four tall main peaks whose
// height order shuffles across members, plus five smaller bumps riding the
// flank of main peak 0. The peaks sit in two pairs whose within-pair gaps
// are far smaller than any cross-pair gap, which pins the merge topology
// of every member to ((0 1) (2 3)) no matter how the positions jitter;
// only the heights, and with them the identity of the global maximum, are
// free to move. Every random quantity is drawn as range midpoint +
// jitter * uniform offset, so jitter 0 collapses the ensemble onto one
// deterministic field.
struct AnalyticConfig {
  int members = 20;
  int width = 128;
  int height = 128;
  uint64_t seed = 42;
  // Each main peak draws its height from a step-staggered sub-range of
  // width main_span starting at main_low; the sub-ranges overlap, which is
  // what lets the tallest-peak identity vary. Hill 0, the one carrying the
  // side bumps, gets the top sub-range so the global maximum regularly
  // lands on it and regularly escapes to hill 3.
  double main_low = 0.90;
  double main_step = 0.02;
  double main_span = 0.12;
  double main_sigma = 6.0;
  // Five side bumps at 72 degree spacing around peak 0, on a ladder of
  // radii side_radius +/- 3 with inner bumps taller. The ladder staggers
  // the flank saddles so every member merges the bumps in the same order;
  // near-equal saddles would let jitter permute the merge order, which
  // tree metrics price as whole subtree moves.
  double side_low = 0.25;
  double side_high = 0.40;
  double side_radius = 16.0;
  // Largest random displacement of any peak center, in cells.
  double position_jitter = 3.0;
  // Scales every random excursion; members are identical at 0.
  double jitter = 1.0;
};

// Generates the members and enforces the structural contract: each field's
// split tree simplifies at the 2% persistence threshold to exactly 9
// leaves (4 mains + 5 sides), and with jitter active the global maximum
// must land on at least two different main peaks across the ensemble (the
// maximum swap). Violations throw; configs whose geometry cannot keep the
// peaks separated are rejected up front.
std::vector<ScalarGrid> gen_analytical(const AnalyticConfig& config = {});

struct SwapClustersResult {
  std::vector<ScalarGrid> grids;
  std::vector<int> labels;  // ground-truth phase per member
};

// Clustering fixture with `phases` groups of `per_phase` members each.
// Phases differ in the height of a marker peak, which tree-level metrics
// see as a clean separation. Within the last phase the two tallest peaks
// swap order halfway through, flipping which one anchors the most
// persistent branch: the merge trees barely move, but the branch
// decompositions restructure, so BDT-based metrics split that phase.
SwapClustersResult gen_swap_clusters(int phases = 3, int per_phase = 4, uint64_t seed = 42);

// Frames sampled evenly along one optimal-path-mapping geodesic:
// sample(i / (n - 1)) for i = 0..n-1. Interior frames carry no information
// beyond the endpoints, the ideal case for temporal reduction.
std::vector<MergeTree> gen_geodesic_series(const MergeTree& t0, const MergeTree& t1, int n);

}  // namespace mtd
