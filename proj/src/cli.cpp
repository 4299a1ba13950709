#include "mtdist/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mtdist/branches.hpp"
#include "mtdist/ensemble.hpp"
#include "mtdist/grid.hpp"
#include "mtdist/interpolate.hpp"
#include "mtdist/io.hpp"
#include "mtdist/merge_tree.hpp"
#include "mtdist/path_distance.hpp"
#include "mtdist/synthetic.hpp"
#include "mtdist/wasserstein.hpp"

namespace mtd {

namespace {

// Flag combinations CLI11 cannot express; mapped to exit code 1.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Options shared by every subcommand.
struct Globals {
  uint64_t seed = 42;
  std::string metric = "path";
  std::string out;
  bool quiet = false;
  int threads = 1;
};

void add_globals(CLI::App* cmd, Globals& g) {
  cmd->add_option("--seed", g.seed, "Seed for all randomness")->capture_default_str();
  cmd->add_option("--metric", g.metric, "Distance metric")
      ->check(CLI::IsMember({"path", "wasserstein"}))
      ->capture_default_str();
  cmd->add_option("--out", g.out, "Output file (directory for gen)");
  cmd->add_flag("--quiet", g.quiet, "Suppress summary lines");
  cmd->add_option("--threads", g.threads, "Concurrent workers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

Metric parse_metric(const Globals& g) {
  return g.metric == "path" ? Metric::path : Metric::wasserstein;
}

// Artifacts go to stdout unless --out redirects them to a file; summaries
// only appear once the artifact is out of the way.
void emit_artifact(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out.empty())
    out << text;
  else
    write_text_file(g.out, text);
}

void emit_summary(const Globals& g, std::ostream& out, const std::string& line) {
  if (!g.out.empty() && !g.quiet) out << line << "\n";
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int leaf_count(const MergeTree& t) {
  int leaves = 0;
  for (const auto& kids : children_lists(t))
    if (kids.empty()) ++leaves;
  return leaves;
}

// Tree arguments accept either a tree JSON or a grid text file; grids get
// their split tree extracted (the join tree is reachable via `tree --kind
// join` plus a saved file). simplify_fraction 0 keeps the raw tree.
MergeTree load_input_tree(const std::string& path, double simplify_fraction) {
  MergeTree t = has_suffix(path, ".json") ? load_tree(path) : split_tree(load_grid(path));
  if (simplify_fraction > 0.0) t = simplify(t, simplify_fraction);
  return t;
}

std::vector<MergeTree> load_members(const Manifest& m, double simplify_fraction) {
  std::vector<MergeTree> trees;
  trees.reserve(m.members.size());
  for (const std::string& path : m.members) trees.push_back(load_input_tree(path, simplify_fraction));
  return trees;
}

std::string member_name(const char* stem, int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03d.%s", stem, index, ext);
  return buf;
}

std::string tree_summary(const MergeTree& t) {
  return "nodes " + std::to_string(t.size()) + " leaves " + std::to_string(leaf_count(t));
}

std::string trace_csv(const std::vector<double>& energy, const std::vector<int>& leaves) {
  std::string out = "iteration,energy,leaves\n";
  for (std::size_t i = 0; i < energy.size(); ++i)
    out += std::to_string(i) + "," + format_full(energy[i]) + "," + std::to_string(leaves[i]) +
           "\n";
  return out;
}

std::string assignments_csv(const std::vector<int>& assignments) {
  std::string out = "member,cluster\n";
  for (std::size_t i = 0; i < assignments.size(); ++i)
    out += std::to_string(i) + "," + std::to_string(assignments[i]) + "\n";
  return out;
}

std::vector<int> parse_labels_csv(const std::string& text, const std::string& origin, int n) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "member,cluster")
    throw ParseError(origin + ": expected header \"member,cluster\"");
  std::vector<int> labels(n, -1);
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() && in.eof()) break;
    const std::string where = origin + ": line " + std::to_string(row);
    int member = 0, cluster = 0;
    char comma = 0;
    std::istringstream fields(line);
    if (!(fields >> member >> comma >> cluster) || comma != ',')
      throw ParseError(where + ": expected \"member,cluster\"");
    if (member < 0 || member >= n) throw ParseError(where + ": member out of range");
    if (labels[member] != -1) throw ParseError(where + ": duplicate member");
    labels[member] = cluster;
  }
  for (int i = 0; i < n; ++i)
    if (labels[i] == -1)
      throw ParseError(origin + ": missing label for member " + std::to_string(i));
  return labels;
}

// Per-subcommand parameter blocks. CLI11 keeps pointers to these between
// parsing and dispatch, so they live in one bag per invocation.
struct TreeArgs {
  std::string input;
  std::string kind = "split";
  double simplify = 0.0;
  std::string dot;
  bool highlight_branches = false;
};

struct SimplifyArgs {
  std::string input;
  double threshold = 0.02;
};

struct PairArgs {
  std::string a;
  std::string b;
  double simplify = 0.0;
  std::string dot;
  double alpha = 0.5;
};

struct BarycenterArgs {
  std::vector<std::string> inputs;
  std::string manifest;
  std::string variant = "mean";
  int max_iter = 100;
  double tol = 0.01;
  int init_index = 0;
  std::string trace;
  double simplify = 0.0;
};

struct ClusterArgs {
  std::string manifest;
  int k = 0;
  int runs = 1;
  int max_rounds = 50;
  std::string truth;
  std::string trace;
  double simplify = 0.0;
};

struct ReduceArgs {
  std::string manifest;
  int keep = 0;
  double simplify = 0.0;
};

struct MatrixArgs {
  std::string manifest;
  double simplify = 0.0;
};

struct GenAnalyticArgs {
  int members = 20;
  int width = 128;
  int height = 128;
  double jitter = 1.0;
  double position_jitter = 3.0;
};

struct GenSwapArgs {
  int phases = 3;
  int per_phase = 4;
};

struct GenSeriesArgs {
  std::string a;
  std::string b;
  int frames = 0;
  double simplify = 0.0;
};

void run_tree(const Globals& g, const TreeArgs& a, std::ostream& out) {
  if (a.highlight_branches && a.dot.empty())
    throw UsageError("--highlight-branches needs --dot");
  const ScalarGrid grid = load_grid(a.input);
  MergeTree t = a.kind == "split" ? split_tree(grid) : join_tree(grid);
  if (a.simplify > 0.0) t = simplify(t, a.simplify);
  if (!a.dot.empty()) {
    DotOptions opts;
    opts.branch_decomposition = a.highlight_branches;
    write_text_file(a.dot, export_dot(t, opts));
  }
  emit_artifact(g, out, tree_to_json(t));
  emit_summary(g, out, tree_summary(t));
}

void run_simplify(const Globals& g, const SimplifyArgs& a, std::ostream& out) {
  const MergeTree t = simplify(load_input_tree(a.input, 0.0), a.threshold);
  emit_artifact(g, out, tree_to_json(t));
  emit_summary(g, out, tree_summary(t));
}

void run_dist(const Globals& g, const PairArgs& a, std::ostream& out) {
  const MergeTree t1 = load_input_tree(a.a, a.simplify);
  const MergeTree t2 = load_input_tree(a.b, a.simplify);
  double d = 0.0;
  if (parse_metric(g) == Metric::path) {
    const PathDistanceResult r = path_mapping_distance(t1, t2);
    d = r.distance;
    if (!a.dot.empty()) {
      DotOptions opts;
      opts.mapping = &r.mapping;
      opts.other = &t2;
      write_text_file(a.dot, export_dot(t1, opts));
    }
  } else {
    if (!a.dot.empty()) throw UsageError("--dot renders path mappings; use --metric path");
    d = wasserstein_distance(elder_bdt(t1), elder_bdt(t2)).distance;
  }
  emit_artifact(g, out, format_fixed(d) + "\n");
}

void run_geodesic(const Globals& g, const PairArgs& a, std::ostream& out) {
  const MergeTree t1 = load_input_tree(a.a, a.simplify);
  const MergeTree t2 = load_input_tree(a.b, a.simplify);
  MergeTree sample;
  if (parse_metric(g) == Metric::path) {
    sample = sample_geodesic(make_geodesic(t1, t2), a.alpha);
  } else {
    const Bdt mixed = wasserstein_interpolate(normalize_bdt(elder_bdt(t1)),
                                              normalize_bdt(elder_bdt(t2)), a.alpha);
    sample = bdt_to_tree(denormalize_bdt(mixed));
  }
  emit_artifact(g, out, tree_to_json(sample));
  emit_summary(g, out, tree_summary(sample));
}

void run_barycenter(const Globals& g, const BarycenterArgs& a, std::ostream& out) {
  if (a.manifest.empty() == a.inputs.empty())
    throw UsageError("pass either member files or --manifest, not both");
  std::vector<MergeTree> trees;
  if (!a.manifest.empty())
    trees = load_members(load_manifest(a.manifest), a.simplify);
  else
    for (const std::string& path : a.inputs) trees.push_back(load_input_tree(path, a.simplify));

  MergeTree result;
  std::vector<double> energy;
  std::vector<int> leaves;
  int iterations = 0;
  if (parse_metric(g) == Metric::path) {
    PmBarycenterOptions opts;
    opts.variant = a.variant == "mean" ? BarycenterVariant::mean : BarycenterVariant::median;
    opts.init_index = a.init_index;
    opts.max_iterations = a.max_iter;
    opts.rel_tolerance = a.tol;
    opts.threads = g.threads;
    PmBarycenterResult r = pm_barycenter(trees, opts);
    result = std::move(r.tree);
    energy = std::move(r.energy_trace);
    leaves = std::move(r.leaf_trace);
    iterations = r.iterations;
  } else {
    if (a.variant != "mean")
      throw UsageError("the median variant is defined for --metric path only");
    std::vector<Bdt> members;
    members.reserve(trees.size());
    for (const MergeTree& t : trees) members.push_back(normalize_bdt(elder_bdt(t)));
    WassBarycenterOptions opts;
    opts.init_index = a.init_index;
    opts.max_iterations = a.max_iter;
    opts.rel_tolerance = a.tol;
    opts.threads = g.threads;
    WassBarycenterResult r = wasserstein_barycenter(members, opts);
    result = bdt_to_tree(denormalize_bdt(r.barycenter));
    energy = std::move(r.energy_trace);
    leaves = std::move(r.leaf_trace);
    iterations = r.iterations;
  }

  if (!a.trace.empty()) write_text_file(a.trace, trace_csv(energy, leaves));
  emit_artifact(g, out, tree_to_json(result));
  emit_summary(g, out,
               "iterations " + std::to_string(iterations) + " energy " +
                   format_fixed(energy.back()) + " " + tree_summary(result));
}

void run_cluster(const Globals& g, const ClusterArgs& a, std::ostream& out) {
  const Manifest manifest = load_manifest(a.manifest);
  const std::vector<MergeTree> trees = load_members(manifest, a.simplify);

  ClusterOptions opts;
  opts.runs = a.runs;
  opts.seed = g.seed;
  opts.max_rounds = a.max_rounds;
  opts.threads = g.threads;
  if (!a.truth.empty())
    opts.truth = parse_labels_csv(read_text_file(a.truth), a.truth,
                                  static_cast<int>(trees.size()));
  else
    opts.truth = manifest.labels;

  const ClusterResult r = kmeans(trees, a.k, parse_metric(g), opts);

  if (!a.trace.empty()) {
    // Trace of the winning run: lowest final energy, earliest run on ties.
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.runs.size(); ++i)
      if (r.runs[i].energy < r.runs[best].energy) best = i;
    std::string csv = "iteration,energy\n";
    for (std::size_t i = 0; i < r.runs[best].energy_trace.size(); ++i)
      csv += std::to_string(i) + "," + format_full(r.runs[best].energy_trace[i]) + "\n";
    write_text_file(a.trace, csv);
  }

  emit_artifact(g, out, assignments_csv(r.assignments));
  std::string summary = "energy " + format_fixed(r.energy);
  if (r.ari) summary += " ari " + format_fixed(*r.ari);
  emit_summary(g, out, summary);
}

void run_reduce(const Globals& g, const ReduceArgs& a, std::ostream& out) {
  const std::vector<MergeTree> trees = load_members(load_manifest(a.manifest), a.simplify);
  const Metric metric = parse_metric(g);
  const std::vector<int> keyframes = temporal_reduce(trees, a.keep, metric, g.threads);
  const ReductionResult r = temporal_reconstruct(trees, keyframes, metric, g.threads);

  std::string csv = "frame,keyframe,path_error,wasserstein_error\n";
  std::size_t next_key = 0;
  double max_path = 0.0, max_wass = 0.0;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const bool kept = next_key < keyframes.size() && keyframes[next_key] == static_cast<int>(i);
    if (kept) ++next_key;
    csv += std::to_string(i) + "," + (kept ? "1" : "0") + "," + format_full(r.path_error[i]) +
           "," + format_full(r.wasserstein_error[i]) + "\n";
    max_path = std::max(max_path, r.path_error[i]);
    max_wass = std::max(max_wass, r.wasserstein_error[i]);
  }

  emit_artifact(g, out, csv);
  emit_summary(g, out,
               "keyframes " + std::to_string(keyframes.size()) + " of " +
                   std::to_string(trees.size()) + " max_path_error " + format_fixed(max_path) +
                   " max_wasserstein_error " + format_fixed(max_wass));
}

void run_matrix(const Globals& g, const MatrixArgs& a, std::ostream& out) {
  const std::vector<MergeTree> trees = load_members(load_manifest(a.manifest), a.simplify);
  const auto m = distance_matrix(trees, parse_metric(g), g.threads);
  std::string csv;
  for (const auto& row : m) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) csv += ",";
      csv += format_full(row[j]);
    }
    csv += "\n";
  }
  emit_artifact(g, out, csv);
  emit_summary(g, out, "members " + std::to_string(trees.size()));
}

void require_out_dir(const Globals& g) {
  if (g.out.empty()) throw UsageError("gen writes several files; pass --out DIR");
}

// Writes generated grids (or trees) plus a manifest into --out.
void write_ensemble_dir(const Globals& g, std::ostream& out,
                        const std::vector<ScalarGrid>& grids,
                        const std::vector<MergeTree>& trees, const Manifest& manifest) {
  std::filesystem::create_directories(g.out);
  const std::filesystem::path dir(g.out);
  Manifest m = manifest;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    m.members.push_back(member_name("member", static_cast<int>(i), "txt"));
    save_grid(grids[i], (dir / m.members.back()).string());
  }
  for (std::size_t i = 0; i < trees.size(); ++i) {
    m.members.push_back(member_name("frame", static_cast<int>(i), "json"));
    save_tree(trees[i], (dir / m.members.back()).string());
  }
  save_manifest(m, (dir / "manifest.json").string());
  if (!g.quiet)
    out << "wrote " << m.members.size() << " members to " << g.out << "\n";
}

void run_gen_analytic(const Globals& g, const GenAnalyticArgs& a, std::ostream& out) {
  require_out_dir(g);
  AnalyticConfig c;
  c.members = a.members;
  c.width = a.width;
  c.height = a.height;
  c.seed = g.seed;
  c.jitter = a.jitter;
  c.position_jitter = a.position_jitter;
  write_ensemble_dir(g, out, gen_analytical(c), {}, {});
}

void run_gen_swap(const Globals& g, const GenSwapArgs& a, std::ostream& out) {
  require_out_dir(g);
  const SwapClustersResult r = gen_swap_clusters(a.phases, a.per_phase, g.seed);
  Manifest m;
  m.labels = r.labels;
  write_ensemble_dir(g, out, r.grids, {}, m);
}

void run_gen_series(const Globals& g, const GenSeriesArgs& a, std::ostream& out) {
  require_out_dir(g);
  const MergeTree t0 = load_input_tree(a.a, a.simplify);
  const MergeTree t1 = load_input_tree(a.b, a.simplify);
  const std::vector<MergeTree> frames = gen_geodesic_series(t0, t1, a.frames);
  Manifest m;
  for (std::size_t i = 0; i < frames.size(); ++i) m.times.push_back(static_cast<double>(i));
  write_ensemble_dir(g, out, {}, frames, m);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Merge tree distances, geodesics, barycenters, and ensemble tools", "mtd"};
  app.require_subcommand(1);

  Globals g;

  TreeArgs tree_args;
  CLI::App* tree_cmd = app.add_subcommand("tree", "Extract a merge tree from a scalar grid");
  add_globals(tree_cmd, g);
  tree_cmd->add_option("input", tree_args.input, "Grid text file")->required();
  tree_cmd->add_option("--kind", tree_args.kind, "Tree kind")
      ->check(CLI::IsMember({"split", "join"}))
      ->capture_default_str();
  tree_cmd->add_option("--simplify", tree_args.simplify,
                       "Drop features below this fraction of the scalar range");
  tree_cmd->add_option("--dot", tree_args.dot, "Also write a Graphviz rendering here");
  tree_cmd->add_flag("--highlight-branches", tree_args.highlight_branches,
                     "Color the Graphviz nodes by elder branch");

  SimplifyArgs simplify_args;
  CLI::App* simplify_cmd =
      app.add_subcommand("simplify", "Persistence-simplify a merge tree");
  add_globals(simplify_cmd, g);
  simplify_cmd->add_option("input", simplify_args.input, "Tree JSON or grid file")->required();
  simplify_cmd->add_option("--threshold", simplify_args.threshold,
                           "Persistence threshold as a fraction of the scalar range")
      ->capture_default_str();

  PairArgs dist_args;
  CLI::App* dist_cmd = app.add_subcommand("dist", "Distance between two merge trees");
  add_globals(dist_cmd, g);
  dist_cmd->add_option("a", dist_args.a, "First tree or grid")->required();
  dist_cmd->add_option("b", dist_args.b, "Second tree or grid")->required();
  dist_cmd->add_option("--simplify", dist_args.simplify, "Simplify inputs first");
  dist_cmd->add_option("--dot", dist_args.dot, "Write the optimal mapping as Graphviz here");

  PairArgs geo_args;
  CLI::App* geo_cmd = app.add_subcommand("geodesic", "Sample the geodesic between two trees");
  add_globals(geo_cmd, g);
  geo_cmd->add_option("a", geo_args.a, "First tree or grid")->required();
  geo_cmd->add_option("b", geo_args.b, "Second tree or grid")->required();
  geo_cmd->add_option("--alpha", geo_args.alpha, "Position along the geodesic")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  geo_cmd->add_option("--simplify", geo_args.simplify, "Simplify inputs first");

  BarycenterArgs bary_args;
  CLI::App* bary_cmd = app.add_subcommand("barycenter", "Frechet mean or median of members");
  add_globals(bary_cmd, g);
  bary_cmd->add_option("members", bary_args.inputs, "Member tree or grid files");
  bary_cmd->add_option("--manifest", bary_args.manifest, "Manifest listing the members");
  bary_cmd->add_option("--variant", bary_args.variant, "Aggregation variant")
      ->check(CLI::IsMember({"mean", "median"}))
      ->capture_default_str();
  bary_cmd->add_option("--max-iter", bary_args.max_iter, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bary_cmd->add_option("--tol", bary_args.tol, "Relative energy tolerance")
      ->capture_default_str();
  bary_cmd->add_option("--init-index", bary_args.init_index, "Member initializing the candidate")
      ->capture_default_str();
  bary_cmd->add_option("--trace", bary_args.trace, "Write iteration,energy,leaves CSV here");
  bary_cmd->add_option("--simplify", bary_args.simplify, "Simplify members first");

  ClusterArgs cluster_args;
  CLI::App* cluster_cmd = app.add_subcommand("cluster", "K-means over ensemble members");
  add_globals(cluster_cmd, g);
  cluster_cmd->add_option("--manifest", cluster_args.manifest, "Manifest listing the members")
      ->required();
  cluster_cmd->add_option("--k", cluster_args.k, "Number of clusters")
      ->required()
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--runs", cluster_args.runs, "Independent restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster_cmd->add_option("--max-rounds", cluster_args.max_rounds, "Lloyd round cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster_cmd->add_option("--truth", cluster_args.truth,
                          "member,cluster CSV with ground truth (defaults to manifest labels)");
  cluster_cmd->add_option("--trace", cluster_args.trace, "Write the winning run's energy trace");
  cluster_cmd->add_option("--simplify", cluster_args.simplify, "Simplify members first");

  ReduceArgs reduce_args;
  CLI::App* reduce_cmd =
      app.add_subcommand("reduce", "Greedy keyframe selection for a tree time series");
  add_globals(reduce_cmd, g);
  reduce_cmd->add_option("--manifest", reduce_args.manifest, "Manifest listing the frames")
      ->required();
  reduce_cmd->add_option("--keep", reduce_args.keep, "Number of keyframes to keep")->required();
  reduce_cmd->add_option("--simplify", reduce_args.simplify, "Simplify frames first");

  MatrixArgs matrix_args;
  CLI::App* matrix_cmd = app.add_subcommand("matrix", "Pairwise distance matrix");
  add_globals(matrix_cmd, g);
  matrix_cmd->add_option("--manifest", matrix_args.manifest, "Manifest listing the members")
      ->required();
  matrix_cmd->add_option("--simplify", matrix_args.simplify, "Simplify members first");

  CLI::App* gen_cmd = app.add_subcommand("gen", "Seeded synthetic ensembles");
  gen_cmd->require_subcommand(1);

  GenAnalyticArgs analytic_args;
  CLI::App* analytic_cmd =
      gen_cmd->add_subcommand("analytic", "Four-hill ensemble with a shuffling maximum");
  add_globals(analytic_cmd, g);
  analytic_cmd->add_option("--members", analytic_args.members, "Ensemble size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analytic_cmd->add_option("--width", analytic_args.width, "Grid width")
      ->capture_default_str();
  analytic_cmd->add_option("--height", analytic_args.height, "Grid height")
      ->capture_default_str();
  analytic_cmd->add_option("--jitter", analytic_args.jitter, "Scale of all random excursions")
      ->capture_default_str();
  analytic_cmd
      ->add_option("--position-jitter", analytic_args.position_jitter,
                   "Peak center displacement in cells")
      ->capture_default_str();

  GenSwapArgs swap_args;
  CLI::App* swap_cmd =
      gen_cmd->add_subcommand("swap", "Phase-labeled fixture with a maximum swap phase");
  add_globals(swap_cmd, g);
  swap_cmd->add_option("--phases", swap_args.phases, "Number of phases")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  swap_cmd->add_option("--per-phase", swap_args.per_phase, "Members per phase")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  GenSeriesArgs series_args;
  CLI::App* series_cmd =
      gen_cmd->add_subcommand("series", "Frames sampled along one geodesic");
  add_globals(series_cmd, g);
  series_cmd->add_option("a", series_args.a, "First endpoint tree or grid")->required();
  series_cmd->add_option("b", series_args.b, "Second endpoint tree or grid")->required();
  series_cmd->add_option("--frames", series_args.frames, "Number of frames")
      ->required()
      ->check(CLI::Range(2, 1000000));
  series_cmd->add_option("--simplify", series_args.simplify, "Simplify endpoints first");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (tree_cmd->parsed()) run_tree(g, tree_args, out);
    if (simplify_cmd->parsed()) run_simplify(g, simplify_args, out);
    if (dist_cmd->parsed()) run_dist(g, dist_args, out);
    if (geo_cmd->parsed()) run_geodesic(g, geo_args, out);
    if (bary_cmd->parsed()) run_barycenter(g, bary_args, out);
    if (cluster_cmd->parsed()) run_cluster(g, cluster_args, out);
    if (reduce_cmd->parsed()) run_reduce(g, reduce_args, out);
    if (matrix_cmd->parsed()) run_matrix(g, matrix_args, out);
    if (gen_cmd->parsed()) {
      if (analytic_cmd->parsed()) run_gen_analytic(g, analytic_args, out);
      if (swap_cmd->parsed()) run_gen_swap(g, swap_args, out);
      if (series_cmd->parsed()) run_gen_series(g, series_args, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace mtd
