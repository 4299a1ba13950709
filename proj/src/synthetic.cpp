#include "mtdist/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtdist/branches.hpp"
#include "mtdist/interpolate.hpp"
#include "mtdist/rng.hpp"

namespace mtd {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Persistence fraction the structural contracts simplify at.
constexpr double kSimplifyFraction = 0.02;

struct Bump {
  double cx = 0.0;
  double cy = 0.0;
  double height = 0.0;
  double sigma = 1.0;
};

ScalarGrid render(int width, int height, const std::vector<Bump>& bumps) {
  ScalarGrid g;
  g.width = width;
  g.height = height;
  g.values.assign(static_cast<std::size_t>(width) * height, 0.0);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double v = 0.0;
      for (const Bump& b : bumps) {
        const double dx = x - b.cx;
        const double dy = y - b.cy;
        v += b.height * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
      }
      g.at(x, y) = v;
    }
  return g;
}

int leaf_count(const MergeTree& t) {
  int leaves = 0;
  for (const auto& kids : children_lists(t))
    if (kids.empty()) ++leaves;
  return leaves;
}

int argmax_vertex(const ScalarGrid& g) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(g.values.size()); ++i)
    if (g.values[i] > g.values[best]) best = i;
  return best;
}

// Range midpoint plus a jitter-scaled uniform offset. The draw happens
// even at jitter 0, so the generator consumes the same stream for every
// configuration of the same shape.
double jittered(Rng& rng, double mid, double half, double jitter) {
  return mid + jitter * rng.uniform(-half, half);
}

int simplified_leaves(const ScalarGrid& g) {
  return leaf_count(simplify(split_tree(g), kSimplifyFraction));
}

}  // namespace

std::vector<ScalarGrid> gen_analytical(const AnalyticConfig& c) {
  if (c.members < 1) throw std::invalid_argument("gen_analytical: members must be positive");
  if (c.jitter < 0.0 || c.position_jitter < 0.0)
    throw std::invalid_argument("gen_analytical: jitter amounts must be non-negative");
  if (c.main_sigma <= 0.0 || c.main_span < 0.0 || c.main_step < 0.0 || c.main_low <= 0.0)
    throw std::invalid_argument("gen_analytical: malformed main peak ranges");
  if (c.side_low > c.side_high || c.side_low <= 0.0)
    throw std::invalid_argument("gen_analytical: malformed side peak range");

  // The hills sit in two pairs, one per quadrant row: (0 1) low, (2 3)
  // high. Saddle heights between Gaussian hills fall off with distance, so
  // keeping both within-pair gaps well below every cross-pair gap fixes the
  // merge topology of every member at ((0 1) (2 3)): first each pair joins
  // over its own col, then the pairs join over a far lower one. Were two of
  // those cols allowed to trade places under jitter, members would stop
  // agreeing on the trunk structure and tree metrics would price the
  // disagreement as whole hills torn down and rebuilt.
  const double cx[4] = {0.266 * c.width, 0.578 * c.width, 0.344 * c.width, 0.656 * c.width};
  const double cy[4] = {0.281 * c.height, 0.281 * c.height, 0.797 * c.height, 0.797 * c.height};

  // Worst-case col heights under jitter: each center moves by at most
  // position_jitter per axis, so a pairwise gap shifts by at most
  // 2*sqrt(2) of that. Cols of two unit hills d apart peak near
  // 2*exp(-(d/2)^2 / (2 sigma^2)).
  const double shift = 2.0 * std::sqrt(2.0) * c.position_jitter * c.jitter;
  const auto gap = [&](int i, int j) {
    return std::hypot(cx[i] - cx[j], cy[i] - cy[j]);
  };
  const auto col = [&](double d, double height_sum) {
    return height_sum * std::exp(-0.25 * d * d / (2.0 * c.main_sigma * c.main_sigma));
  };
  const double h_max = c.main_low + 3.0 * c.main_step + c.main_span;
  const double pair_gap = std::min(gap(0, 1), gap(2, 3));
  const double cross_gap = std::min(std::min(gap(0, 2), gap(0, 3)), std::min(gap(1, 2), gap(1, 3)));
  if (pair_gap - shift < 4.0 * c.main_sigma)
    throw std::invalid_argument("gen_analytical: peaks too close for their widths");
  // The paired cols must stay below the side ring's lowest flank saddle,
  // which the ladder places near 0.4 * side_low.
  if (col(pair_gap - shift, 2.0 * h_max) > 0.3 * c.side_low)
    throw std::invalid_argument("gen_analytical: paired hills rise into the side saddles");
  // And the cross cols must stay clearly below the paired cols, or the
  // merge topology is up to the jitter again.
  if (2.0 * col(cross_gap - shift, 2.0 * h_max) > col(pair_gap + shift, 2.0 * c.main_low))
    throw std::invalid_argument("gen_analytical: hill pairs too close to stay nested");
  if (c.side_radius - 3.0 < 2.0 * c.main_sigma)
    throw std::invalid_argument("gen_analytical: side ring inside the main summit");
  const double ring_extent = c.side_radius + 3.0 + 5.2 + c.position_jitter * c.jitter;
  if (ring_extent > std::min(cx[0], cy[0]) || ring_extent > 0.75 * pair_gap)
    throw std::invalid_argument("gen_analytical: side ring leaves hill 0's basin");
  if (c.side_high >= c.main_low)
    throw std::invalid_argument("gen_analytical: side peaks rival the main peaks");

  std::vector<ScalarGrid> out;
  out.reserve(c.members);
  std::set<int> argmax_identities;

  for (int m = 0; m < c.members; ++m) {
    Rng rng(Rng::derive(c.seed, static_cast<uint64_t>(m)));
    std::vector<Bump> bumps;
    bumps.reserve(9);
    // Hill 0 takes the top height band so the global maximum mostly
    // contests between the flanked hill and hill 3. When hill 0 wins, the
    // side bumps nest under the most persistent branch; when it loses they
    // nest under hill 0's own branch, and that back-and-forth is the
    // instability branch decompositions are meant to expose.
    constexpr int band[4] = {3, 0, 1, 2};
    for (int i = 0; i < 4; ++i) {
      const double mid = c.main_low + band[i] * c.main_step + 0.5 * c.main_span;
      Bump b;
      b.height = jittered(rng, mid, 0.5 * c.main_span, c.jitter);
      b.cx = jittered(rng, cx[i], c.position_jitter, c.jitter);
      b.cy = jittered(rng, cy[i], c.position_jitter, c.jitter);
      b.sigma = c.main_sigma;
      bumps.push_back(b);
    }
    for (int k = 0; k < 5; ++k) {
      // Radius, height, and width ladders: bump k sits 1.5 cells further
      // out than bump k-1 and is one step shorter, so the five flank
      // saddles come out strictly ordered with gaps no jitter can close.
      // The half-step angle offset keeps every lobe pointed away from
      // hill 1, whose col with hill 0 is the nearest foreign saddle.
      const double angle = jittered(rng, 2.0 * kPi * (k + 0.5) / 5.0, kPi / 30.0, c.jitter);
      const double radius = c.side_radius - 3.0 + 1.5 * k;
      const double step = 0.25 * (c.side_high - c.side_low);
      Bump b;
      b.height = jittered(rng, c.side_high - k * step, 0.2 * step, c.jitter);
      b.cx = bumps[0].cx + radius * std::cos(angle);
      b.cy = bumps[0].cy + radius * std::sin(angle);
      b.sigma = 2.2 + 0.1 * k;
      bumps.push_back(b);
    }

    ScalarGrid g = render(c.width, c.height, bumps);

    const int leaves = simplified_leaves(g);
    if (leaves != 9)
      throw std::runtime_error("gen_analytical: member " + std::to_string(m) +
                               " simplified to " + std::to_string(leaves) +
                               " leaves instead of 9");

    const int v = argmax_vertex(g);
    const double px = v % c.width;
    const double py = v / c.width;
    int nearest = 0;
    double nearest_d = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double d = (px - cx[i]) * (px - cx[i]) + (py - cy[i]) * (py - cy[i]);
      if (i == 0 || d < nearest_d) {
        nearest = i;
        nearest_d = d;
      }
    }
    argmax_identities.insert(nearest);

    out.push_back(std::move(g));
  }

  // The maximum swap is the whole point of the ensemble; a jittered run
  // that never moves the global maximum means the ranges are too narrow.
  if (c.members >= 2 && c.jitter > 0.0 && argmax_identities.size() < 2)
    throw std::runtime_error("gen_analytical: configured ranges produced no maximum swap");

  return out;
}

SwapClustersResult gen_swap_clusters(int phases, int per_phase, uint64_t seed) {
  if (phases < 1 || per_phase < 1)
    throw std::invalid_argument("gen_swap_clusters: phases and per_phase must be positive");

  constexpr int kWidth = 64;
  constexpr int kHeight = 64;
  // Fixed geometry: two tall hills left and right, a marker hill on the
  // right hill's flank whose height encodes the phase, and three side
  // bumps on the left hill's far flank. Bump radii and heights are
  // staggered so every saddle on a shared root-to-leaf path has its own
  // height band: jitter can then never permute the merge order, and
  // within-phase tree distances stay small. The bumps re-nest under
  // whichever tall hill loses the maximum, which is what destabilizes
  // branch decompositions in the swap phase.
  constexpr double kLeftX = 22.0, kLeftY = 32.0;
  constexpr double kRightX = 52.0, kRightY = 32.0;
  constexpr double kMarkerX = 52.0, kMarkerY = 48.0;
  constexpr double kMainSigma = 5.0;
  constexpr double kMarkerSigma = 2.0;
  constexpr double kBumpSigma = 1.8;
  constexpr double kBumpAngles[3] = {2.0 * kPi / 3.0, kPi, 4.0 * kPi / 3.0};
  constexpr double kBumpRadii[3] = {11.0, 13.5, 16.0};
  constexpr double kBumpHeights[3] = {0.45, 0.42, 0.39};

  SwapClustersResult out;
  out.grids.reserve(static_cast<std::size_t>(phases) * per_phase);

  for (int p = 0; p < phases; ++p) {
    // Marker heights spaced evenly from 0.70 down to 0.20 across phases.
    const double marker =
        phases > 1 ? 0.70 - 0.5 * static_cast<double>(p) / (phases - 1) : 0.45;
    const bool swap_phase = p == phases - 1;
    for (int i = 0; i < per_phase; ++i) {
      const int m = p * per_phase + i;
      Rng rng(Rng::derive(seed, static_cast<uint64_t>(m)));

      // The swap phase keeps the two tall hills nearly level and exchanges
      // their order for the second half of its members; the jitter is kept
      // below half the gap so the intended order always survives.
      double left_h = swap_phase ? 0.97 : 1.02;
      double right_h = swap_phase ? 0.93 : 0.88;
      if (swap_phase && i >= (per_phase + 1) / 2) std::swap(left_h, right_h);
      left_h += rng.uniform(-0.01, 0.01);
      right_h += rng.uniform(-0.01, 0.01);

      std::vector<Bump> bumps;
      bumps.push_back({kLeftX, kLeftY, left_h, kMainSigma});
      bumps.push_back({kRightX, kRightY, right_h, kMainSigma});
      bumps.push_back({kMarkerX, kMarkerY, marker + rng.uniform(-0.01, 0.01), kMarkerSigma});
      for (int k = 0; k < 3; ++k)
        bumps.push_back({kLeftX + kBumpRadii[k] * std::cos(kBumpAngles[k]),
                         kLeftY + kBumpRadii[k] * std::sin(kBumpAngles[k]),
                         kBumpHeights[k] + rng.uniform(-0.01, 0.01), kBumpSigma});

      ScalarGrid g = render(kWidth, kHeight, bumps);
      const int leaves = simplified_leaves(g);
      if (leaves != 6)
        throw std::runtime_error("gen_swap_clusters: member " + std::to_string(m) +
                                 " simplified to " + std::to_string(leaves) +
                                 " leaves instead of 6");
      out.grids.push_back(std::move(g));
      out.labels.push_back(p);
    }
  }

  if (per_phase >= 2) {
    bool left_tallest = false;
    bool right_tallest = false;
    for (int i = 0; i < per_phase; ++i) {
      const ScalarGrid& g = out.grids[static_cast<std::size_t>(phases - 1) * per_phase + i];
      (argmax_vertex(g) % kWidth < kWidth / 2 ? left_tallest : right_tallest) = true;
    }
    if (!left_tallest || !right_tallest)
      throw std::runtime_error("gen_swap_clusters: the swap phase failed to flip its maximum");
  }

  return out;
}

std::vector<MergeTree> gen_geodesic_series(const MergeTree& t0, const MergeTree& t1, int n) {
  if (n < 2) throw std::invalid_argument("gen_geodesic_series: need at least two frames");
  const Geodesic g = make_geodesic(t0, t1);
  std::vector<MergeTree> frames;
  frames.reserve(n);
  for (int i = 0; i < n; ++i)
    frames.push_back(sample_geodesic(g, static_cast<double>(i) / (n - 1)));
  return frames;
}

}  // namespace mtd
