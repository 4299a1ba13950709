#include "mtdist/ensemble.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "mtdist/branches.hpp"
#include "mtdist/parallel.hpp"
#include "mtdist/path_distance.hpp"
#include "mtdist/rng.hpp"
#include "mtdist/wasserstein.hpp"

namespace mtd {

namespace {

void check_members(const std::vector<MergeTree>& trees, const char* context) {
  if (trees.empty()) throw std::invalid_argument(std::string(context) + ": no trees");
  for (const MergeTree& t : trees) require_valid(t, context);
  for (const MergeTree& t : trees)
    if (t.kind != trees.front().kind)
      throw std::invalid_argument(std::string(context) + ": trees mix split and join kinds");
}

// One geodesic frame between two trees. The path metric samples the
// optimal-path-mapping geodesic; Wasserstein interpolates the elder BDTs
// in locally normalized coordinates, the representation that stays
// invertible into a valid merge tree, and folds the result back.
MergeTree reconstruct_between(const MergeTree& left, const MergeTree& right, double alpha,
                              Metric metric) {
  if (metric == Metric::path) return sample_geodesic(make_geodesic(left, right), alpha);
  const Bdt a = normalize_bdt(elder_bdt(left));
  const Bdt b = normalize_bdt(elder_bdt(right));
  return bdt_to_tree(denormalize_bdt(wasserstein_interpolate(a, b, alpha)));
}

// Distance between an original frame and its reconstruction, under the
// metric that drives a reduction.
double frame_error(const MergeTree& original, const MergeTree& reconstruction, Metric metric) {
  if (metric == Metric::path) return path_mapping_distance(original, reconstruction).distance;
  return wasserstein_distance(elder_bdt(original), elder_bdt(reconstruction)).distance;
}

// The two metric backends k-means runs on. Each exposes the centroid
// representation, the member's Frechet energy term against a centroid
// (plain distance for the path metric, squared distance for Wasserstein),
// a recentering step, and the conversion back to a reportable tree.
struct PathSpace {
  using Centroid = MergeTree;
  const std::vector<MergeTree>& trees;

  Centroid member(int i) const { return trees[i]; }

  double energy_term(const Centroid& c, int i) const {
    return path_mapping_distance(c, trees[i]).distance;
  }

  // The path barycenter iteration cannot warm-start from an arbitrary
  // candidate; it grows from the cluster's lowest-index member instead,
  // which keeps runs deterministic.
  Centroid recenter(const std::vector<int>& cluster, const Centroid&) const {
    std::vector<MergeTree> sub;
    sub.reserve(cluster.size());
    for (int i : cluster) sub.push_back(trees[i]);
    return pm_barycenter(sub).tree;
  }

  MergeTree to_tree(const Centroid& c) const { return c; }
};

struct WassSpace {
  using Centroid = Bdt;
  // Locally normalized elder BDTs, the coordinates the Wasserstein
  // barycenter optimizes. Assigning in the same space keeps assignment and
  // recentering two descent steps on one objective.
  std::vector<Bdt> members;

  explicit WassSpace(const std::vector<MergeTree>& trees) {
    members.reserve(trees.size());
    for (const MergeTree& t : trees) members.push_back(normalize_bdt(elder_bdt(t)));
  }

  Centroid member(int i) const { return members[i]; }

  double energy_term(const Centroid& c, int i) const {
    const double d = wasserstein_distance(c, members[i]).distance;
    return d * d;
  }

  // Warm-started from the previous centroid so recentering can only lower
  // the cluster's energy, the half of the Lloyd guarantee the assignment
  // step does not cover.
  Centroid recenter(const std::vector<int>& cluster, const Centroid& previous) const {
    std::vector<Bdt> sub;
    sub.reserve(cluster.size());
    for (int i : cluster) sub.push_back(members[i]);
    WassBarycenterOptions opts;
    opts.init = previous;
    return wasserstein_barycenter(sub, opts).barycenter;
  }

  MergeTree to_tree(const Centroid& c) const { return bdt_to_tree(denormalize_bdt(c)); }
};

template <class Space>
KmeansRun run_kmeans(const Space& space, int n, int k, uint64_t seed, int max_rounds,
                     std::vector<typename Space::Centroid>& centroids_out) {
  KmeansRun run;
  run.seed = seed;
  Rng rng(seed);

  std::vector<typename Space::Centroid> centroids;
  centroids.reserve(k);
  for (int i : rng.sample_without_replacement(n, k)) centroids.push_back(space.member(i));

  run.assignments.assign(n, -1);
  std::vector<double> cost(n, 0.0);
  std::vector<int> previous;

  while (true) {
    // Assignment half-step: every member moves to its cheapest centroid,
    // ties to the smaller cluster id.
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_cost = space.energy_term(centroids[0], i);
      for (int c = 1; c < k; ++c) {
        const double v = space.energy_term(centroids[c], i);
        if (v < best_cost) {
          best = c;
          best_cost = v;
        }
      }
      run.assignments[i] = best;
      cost[i] = best_cost;
    }

    // A cluster emptied by the move restarts at the member currently
    // served worst, skipping members whose departure would only empty
    // another cluster. Their cost drops to zero, so the repair keeps the
    // energy trace non-increasing.
    std::vector<int> size(k, 0);
    for (int a : run.assignments) ++size[a];
    for (int c = 0; c < k; ++c) {
      if (size[c] > 0) continue;
      int worst = -1;
      for (int i = 0; i < n; ++i)
        if (size[run.assignments[i]] > 1 && (worst < 0 || cost[i] > cost[worst])) worst = i;
      --size[run.assignments[worst]];
      run.assignments[worst] = c;
      size[c] = 1;
      centroids[c] = space.member(worst);
      cost[worst] = 0.0;
    }

    double assigned = 0.0;
    for (double v : cost) assigned += v;
    run.energy_trace.push_back(assigned);

    if (run.assignments == previous) break;
    previous = run.assignments;

    // Recenter half-step: each cluster's centroid becomes the barycenter
    // of its members.
    for (int c = 0; c < k; ++c) {
      std::vector<int> cluster;
      for (int i = 0; i < n; ++i)
        if (run.assignments[i] == c) cluster.push_back(i);
      centroids[c] = space.recenter(cluster, centroids[c]);
    }
    double recentered = 0.0;
    for (int i = 0; i < n; ++i) {
      cost[i] = space.energy_term(centroids[run.assignments[i]], i);
      recentered += cost[i];
    }
    run.energy_trace.push_back(recentered);

    ++run.rounds;
    if (run.rounds >= max_rounds) break;
  }

  run.energy = run.energy_trace.back();
  centroids_out = std::move(centroids);
  return run;
}

template <class Space>
ClusterResult cluster_all(const Space& space, int n, int k, const ClusterOptions& options) {
  ClusterResult out;
  out.runs.resize(options.runs);
  std::vector<std::vector<typename Space::Centroid>> centroids(options.runs);
  // Runs are independent given their derived seeds, so they parallelize
  // across the ensemble while each stays sequential inside.
  parallel_for(options.runs, options.threads, [&](int r) {
    out.runs[r] = run_kmeans(space, n, k, Rng::derive(options.seed, static_cast<uint64_t>(r)),
                             options.max_rounds, centroids[r]);
  });

  int best = 0;
  for (int r = 1; r < options.runs; ++r)
    if (out.runs[r].energy < out.runs[best].energy) best = r;
  out.assignments = out.runs[best].assignments;
  out.energy = out.runs[best].energy;
  out.centroids.reserve(k);
  for (const auto& c : centroids[best]) out.centroids.push_back(space.to_tree(c));
  return out;
}

}  // namespace

std::vector<std::vector<double>> distance_matrix(const std::vector<MergeTree>& trees,
                                                 Metric metric, int threads) {
  check_members(trees, "distance_matrix");
  const int n = static_cast<int>(trees.size());
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));

  std::vector<Bdt> bdts;
  if (metric == Metric::wasserstein) {
    bdts.reserve(n);
    for (const MergeTree& t : trees) bdts.push_back(elder_bdt(t));
  }

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  parallel_for(static_cast<int>(pairs.size()), threads, [&](int p) {
    const auto [i, j] = pairs[p];
    const double d = metric == Metric::path
                         ? path_mapping_distance(trees[i], trees[j]).distance
                         : wasserstein_distance(bdts[i], bdts[j]).distance;
    m[i][j] = d;
    m[j][i] = d;
  });
  return m;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("adjusted_rand_index: label vectors differ in length");
  const auto comb2 = [](long long m) { return m * (m - 1) / 2; };

  std::map<int, long long> rows, cols;
  std::map<std::pair<int, int>, long long> cells;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++rows[a[i]];
    ++cols[b[i]];
    ++cells[{a[i], b[i]}];
  }

  long long together = 0, in_a = 0, in_b = 0;
  for (const auto& [cell, count] : cells) together += comb2(count);
  for (const auto& [label, count] : rows) in_a += comb2(count);
  for (const auto& [label, count] : cols) in_b += comb2(count);

  const long long total = comb2(static_cast<long long>(a.size()));
  if (total == 0) return 1.0;  // zero or one item, all partitions coincide
  const double expected =
      static_cast<double>(in_a) * static_cast<double>(in_b) / static_cast<double>(total);
  const double maximum = 0.5 * (static_cast<double>(in_a) + static_cast<double>(in_b));
  // Expected agreement reaches the maximum only when both partitions are
  // all-singletons or both are one block, and those pairs are identical.
  if (maximum == expected) return 1.0;
  return (static_cast<double>(together) - expected) / (maximum - expected);
}

ClusterResult kmeans(const std::vector<MergeTree>& trees, int k, Metric metric,
                     const ClusterOptions& options) {
  check_members(trees, "kmeans");
  const int n = static_cast<int>(trees.size());
  if (k < 1 || k > n)
    throw std::invalid_argument("kmeans: k must lie between 1 and the member count");
  if (options.runs < 1) throw std::invalid_argument("kmeans: runs must be at least 1");
  if (options.max_rounds < 1)
    throw std::invalid_argument("kmeans: max_rounds must be at least 1");
  if (!options.truth.empty() && options.truth.size() != trees.size())
    throw std::invalid_argument("kmeans: ground-truth labels differ in length from members");

  ClusterResult out;
  if (metric == Metric::path) {
    out = cluster_all(PathSpace{trees}, n, k, options);
  } else {
    out = cluster_all(WassSpace(trees), n, k, options);
  }
  if (!options.truth.empty()) out.ari = adjusted_rand_index(out.assignments, options.truth);
  return out;
}

std::vector<int> temporal_reduce(const std::vector<MergeTree>& trees, int keep, Metric metric,
                                 int threads) {
  check_members(trees, "temporal_reduce");
  const int n = static_cast<int>(trees.size());
  if (n < 2) throw std::invalid_argument("temporal_reduce: need at least two frames");
  if (keep < 2)
    throw std::invalid_argument("temporal_reduce: must keep at least the two endpoints");
  if (keep > n)
    throw std::invalid_argument("temporal_reduce: cannot keep more frames than given");

  std::vector<int> kept(n);
  for (int i = 0; i < n; ++i) kept[i] = i;

  // Error of rebuilding frame t from keyframes l and r, keyed by the whole
  // triple so entries stay valid across unrelated removals.
  std::map<std::array<int, 3>, double> cache;

  while (static_cast<int>(kept.size()) > keep) {
    std::vector<std::array<int, 3>> missing;
    for (std::size_t j = 1; j + 1 < kept.size(); ++j) {
      const std::array<int, 3> key = {kept[j - 1], kept[j], kept[j + 1]};
      if (!cache.count(key)) missing.push_back(key);
    }
    std::vector<double> fresh(missing.size(), 0.0);
    parallel_for(static_cast<int>(missing.size()), threads, [&](int x) {
      const auto [l, t, r] = missing[x];
      const double alpha = static_cast<double>(t - l) / static_cast<double>(r - l);
      fresh[x] = frame_error(trees[t], reconstruct_between(trees[l], trees[r], alpha, metric),
                             metric);
    });
    for (std::size_t x = 0; x < missing.size(); ++x) cache[missing[x]] = fresh[x];

    // Drop the frame cheapest to rebuild; on ties the earliest one goes.
    std::size_t drop = 1;
    double best = cache[{kept[0], kept[1], kept[2]}];
    for (std::size_t j = 2; j + 1 < kept.size(); ++j) {
      const double v = cache[{kept[j - 1], kept[j], kept[j + 1]}];
      if (v < best) {
        best = v;
        drop = j;
      }
    }
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return kept;
}

ReductionResult temporal_reconstruct(const std::vector<MergeTree>& trees,
                                     const std::vector<int>& keyframes, Metric metric,
                                     int threads) {
  check_members(trees, "temporal_reconstruct");
  const int n = static_cast<int>(trees.size());
  if (keyframes.empty()) throw std::invalid_argument("temporal_reconstruct: no keyframes");
  for (std::size_t i = 1; i < keyframes.size(); ++i)
    if (keyframes[i] <= keyframes[i - 1])
      throw std::invalid_argument("temporal_reconstruct: keyframes must strictly increase");
  if (keyframes.front() != 0 || keyframes.back() != n - 1)
    throw std::invalid_argument(
        "temporal_reconstruct: keyframes must include the first and last frame");

  ReductionResult out;
  out.keyframes = keyframes;
  out.reconstructed.resize(n);
  out.path_error.assign(n, 0.0);
  out.wasserstein_error.assign(n, 0.0);

  for (int kf : keyframes) out.reconstructed[kf] = trees[kf];

  // Segments are independent; each computes its geodesic once and samples
  // every interior frame from it.
  const int segments = static_cast<int>(keyframes.size()) - 1;
  parallel_for(segments, threads, [&](int s) {
    const int l = keyframes[s];
    const int r = keyframes[s + 1];
    if (r - l < 2) return;
    if (metric == Metric::path) {
      const Geodesic g = make_geodesic(trees[l], trees[r]);
      for (int t = l + 1; t < r; ++t)
        out.reconstructed[t] =
            sample_geodesic(g, static_cast<double>(t - l) / static_cast<double>(r - l));
    } else {
      const Bdt a = normalize_bdt(elder_bdt(trees[l]));
      const Bdt b = normalize_bdt(elder_bdt(trees[r]));
      for (int t = l + 1; t < r; ++t)
        out.reconstructed[t] = bdt_to_tree(denormalize_bdt(wasserstein_interpolate(
            a, b, static_cast<double>(t - l) / static_cast<double>(r - l))));
    }
  });

  // Keyframes keep their exact zeros: their reconstruction is the stored
  // original, so only interior frames need measuring.
  std::vector<char> is_keyframe(n, 0);
  for (int kf : keyframes) is_keyframe[kf] = 1;
  std::vector<int> interior;
  for (int t = 0; t < n; ++t)
    if (!is_keyframe[t]) interior.push_back(t);

  parallel_for(static_cast<int>(interior.size()), threads, [&](int x) {
    const int t = interior[x];
    out.path_error[t] = path_mapping_distance(trees[t], out.reconstructed[t]).distance;
    out.wasserstein_error[t] =
        wasserstein_distance(elder_bdt(trees[t]), elder_bdt(out.reconstructed[t])).distance;
  });
  return out;
}

}  // namespace mtd
