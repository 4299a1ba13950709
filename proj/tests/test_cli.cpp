#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtdist/branches.hpp"
#include "mtdist/cli.hpp"
#include "mtdist/grid.hpp"
#include "mtdist/interpolate.hpp"
#include "mtdist/io.hpp"
#include "mtdist/merge_tree.hpp"
#include "mtdist/path_distance.hpp"
#include "mtdist/wasserstein.hpp"

using mtd::MergeTree;

TEST_SUITE_BEGIN("cli");

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = mtd::cli_main(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool same_cli_result(const CliResult& a, const CliResult& b) {
  return a.code == b.code && a.out == b.out && a.err == b.err;
}

// Fresh directory under the system temp root, cleaned up on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("mtdist-cli-" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }

  std::string file(const std::string& name) const { return (path / name).string(); }
};

// Byte content of every regular file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot_dir(const std::string& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file())
      files[std::filesystem::relative(entry.path(), dir).string()] =
          mtd::read_text_file(entry.path().string());
  return files;
}

bool same_tree_exact(const MergeTree& a, const MergeTree& b) {
  if (a.kind != b.kind || a.root != b.root || a.size() != b.size()) return false;
  for (int v = 0; v < a.size(); ++v)
    if (a.nodes[v].id != b.nodes[v].id || a.nodes[v].scalar != b.nodes[v].scalar ||
        a.nodes[v].parent != b.nodes[v].parent)
      return false;
  return true;
}

int leaf_count(const MergeTree& t) {
  int leaves = 0;
  for (const auto& kids : mtd::children_lists(t))
    if (kids.empty()) ++leaves;
  return leaves;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Shared on-disk fixture: a three-member analytic ensemble plus two of its
// simplified split trees, generated through the tool itself exactly once.
struct Fixture {
  TempDir dir;
  std::string ens;
  std::string manifest;
  std::string t0;
  std::string t1;

  Fixture() {
    ens = dir.file("ens");
    manifest = ens + "/manifest.json";
    t0 = dir.file("t0.json");
    t1 = dir.file("t1.json");
    REQUIRE(run({"gen", "analytic", "--members", "3", "--out", ens}).code == 0);
    REQUIRE(run({"tree", ens + "/member_000.txt", "--simplify", "0.02", "--out", t0}).code == 0);
    REQUIRE(run({"tree", ens + "/member_001.txt", "--simplify", "0.02", "--out", t1}).code == 0);
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_CASE("usage failures exit 1 and help exits 0") {
  CHECK(run({}).code == 1);
  CHECK(run({}).err.find("Usage") != std::string::npos);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"dist", "--metric", "hamming", "a", "b"}).code == 1);

  const CliResult help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("Subcommands") != std::string::npos);
  CHECK(help.err.empty());

  const CliResult sub_help = run({"dist", "--help"});
  CHECK(sub_help.code == 0);
  CHECK(sub_help.out.find("mtd dist") != std::string::npos);
}

TEST_CASE("tree extraction matches the library") {
  const Fixture& f = fixture();
  const mtd::ScalarGrid grid = mtd::load_grid(f.ens + "/member_000.txt");

  SUBCASE("split with simplification") {
    const CliResult r = run({"tree", f.ens + "/member_000.txt", "--simplify", "0.02"});
    REQUIRE(r.code == 0);
    const MergeTree direct = mtd::simplify(mtd::split_tree(grid), 0.02);
    CHECK(same_tree_exact(mtd::tree_from_json(r.out, "cli"), direct));
  }
  SUBCASE("join kind") {
    const CliResult r = run({"tree", f.ens + "/member_000.txt", "--kind", "join"});
    REQUIRE(r.code == 0);
    CHECK(same_tree_exact(mtd::tree_from_json(r.out, "cli"), mtd::join_tree(grid)));
  }
  SUBCASE("--out moves the artifact and prints a summary") {
    TempDir tmp;
    const CliResult r =
        run({"tree", f.ens + "/member_000.txt", "--simplify", "0.02", "--out", tmp.file("t.json")});
    REQUIRE(r.code == 0);
    CHECK(r.out == "nodes 18 leaves 9\n");
    const MergeTree t = mtd::load_tree(tmp.file("t.json"));
    CHECK(t.size() == 18);
    const CliResult quiet = run({"tree", f.ens + "/member_000.txt", "--simplify", "0.02", "--out",
                                 tmp.file("t2.json"), "--quiet"});
    CHECK(quiet.code == 0);
    CHECK(quiet.out.empty());
  }
  SUBCASE("--highlight-branches needs --dot") {
    CHECK(run({"tree", f.ens + "/member_000.txt", "--highlight-branches"}).code == 1);
    TempDir tmp;
    const CliResult r = run({"tree", f.ens + "/member_000.txt", "--simplify", "0.02", "--dot",
                             tmp.file("t.dot"), "--highlight-branches", "--out",
                             tmp.file("t.json"), "--quiet"});
    REQUIRE(r.code == 0);
    CHECK(mtd::read_text_file(tmp.file("t.dot")).find("digraph") != std::string::npos);
  }
}

TEST_CASE("simplify subcommand applies the persistence threshold") {
  const Fixture& f = fixture();
  const CliResult r = run({"simplify", f.t0, "--threshold", "0.5"});
  REQUIRE(r.code == 0);
  const MergeTree direct = mtd::simplify(mtd::load_tree(f.t0), 0.5);
  CHECK(same_tree_exact(mtd::tree_from_json(r.out, "cli"), direct));
}

TEST_CASE("dist prints the library distance under both metrics") {
  const Fixture& f = fixture();
  const MergeTree t0 = mtd::load_tree(f.t0);
  const MergeTree t1 = mtd::load_tree(f.t1);

  const CliResult path = run({"dist", f.t0, f.t1});
  REQUIRE(path.code == 0);
  CHECK(path.out == mtd::format_fixed(mtd::path_mapping_distance(t0, t1).distance) + "\n");

  const CliResult wass = run({"dist", f.t0, f.t1, "--metric", "wasserstein"});
  REQUIRE(wass.code == 0);
  const double dw = mtd::wasserstein_distance(mtd::elder_bdt(t0), mtd::elder_bdt(t1)).distance;
  CHECK(wass.out == mtd::format_fixed(dw) + "\n");

  SUBCASE("mapping rendering") {
    TempDir tmp;
    REQUIRE(run({"dist", f.t0, f.t1, "--dot", tmp.file("m.dot")}).code == 0);
    const std::string dot = mtd::read_text_file(tmp.file("m.dot"));
    CHECK(dot.find("cluster_a") != std::string::npos);
    CHECK(dot.find("cluster_b") != std::string::npos);
    CHECK(run({"dist", f.t0, f.t1, "--metric", "wasserstein", "--dot", tmp.file("n.dot")}).code ==
          1);
  }
  SUBCASE("bad inputs") {
    CHECK(run({"dist", f.t0}).code == 1);
    CHECK(run({"dist", f.t0, fixture().dir.file("absent.json")}).code == 2);
    TempDir tmp;
    mtd::write_text_file(tmp.file("junk.json"), "{]");
    const CliResult r = run({"dist", f.t0, tmp.file("junk.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("junk.json") != std::string::npos);
  }
}

TEST_CASE("geodesic endpoints and interior samples") {
  const Fixture& f = fixture();
  const MergeTree t0 = mtd::load_tree(f.t0);

  const CliResult at_zero = run({"geodesic", f.t0, f.t1, "--alpha", "0"});
  REQUIRE(at_zero.code == 0);
  const MergeTree back = mtd::tree_from_json(at_zero.out, "cli");
  CHECK(mtd::path_mapping_distance(t0, back).distance == doctest::Approx(0.0).epsilon(1e-12));

  const CliResult wass = run({"geodesic", f.t0, f.t1, "--alpha", "0.5", "--metric",
                              "wasserstein"});
  REQUIRE(wass.code == 0);
  // tree_from_json validates, so parsing is the structural check.
  CHECK(mtd::tree_from_json(wass.out, "cli").size() > 0);

  CHECK(run({"geodesic", f.t0, f.t1, "--alpha", "1.5"}).code == 1);
}

TEST_CASE("barycenter matches the library and writes the trace") {
  const Fixture& f = fixture();
  TempDir tmp;
  const CliResult r = run({"barycenter", "--manifest", f.manifest, "--simplify", "0.02",
                           "--trace", tmp.file("tr.csv"), "--out", tmp.file("b.json")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("iterations ") == 0);

  std::vector<MergeTree> members;
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "/member_%03d.txt", i);
    members.push_back(mtd::simplify(mtd::split_tree(mtd::load_grid(f.ens + name)), 0.02));
  }
  const mtd::PmBarycenterResult direct = mtd::pm_barycenter(members);
  CHECK(same_tree_exact(mtd::load_tree(tmp.file("b.json")), direct.tree));

  const std::vector<std::string> lines = split_lines(mtd::read_text_file(tmp.file("tr.csv")));
  REQUIRE(lines.size() == direct.energy_trace.size() + 1);
  CHECK(lines[0] == "iteration,energy,leaves");
  CHECK(lines[1] == "0," + mtd::format_full(direct.energy_trace[0]) + "," +
                        std::to_string(direct.leaf_trace[0]));

  SUBCASE("member source validation") {
    CHECK(run({"barycenter"}).code == 1);
    CHECK(run({"barycenter", f.t0, "--manifest", f.manifest}).code == 1);
    CHECK(run({"barycenter", f.t0, f.t1, "--variant", "median", "--metric", "wasserstein"})
              .code == 1);
  }
  SUBCASE("wasserstein barycenter rebuilds a valid tree") {
    const CliResult w = run({"barycenter", f.t0, f.t1, "--metric", "wasserstein"});
    REQUIRE(w.code == 0);
    CHECK(mtd::tree_from_json(w.out, "cli").size() > 0);
  }
}

TEST_CASE("cluster recovers the swap fixture phases") {
  TempDir tmp;
  REQUIRE(run({"gen", "swap", "--out", tmp.file("swap")}).code == 0);
  const std::string manifest = tmp.file("swap/manifest.json");

  const CliResult r = run({"cluster", "--manifest", manifest, "--k", "3", "--simplify", "0.02",
                           "--runs", "2", "--out", tmp.file("cl.csv"), "--trace",
                           tmp.file("tr.csv")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("energy ") == 0);
  CHECK(r.out.find(" ari 1.000000000\n") != std::string::npos);

  const std::vector<std::string> rows = split_lines(mtd::read_text_file(tmp.file("cl.csv")));
  REQUIRE(rows.size() == 13);
  CHECK(rows[0] == "member,cluster");
  const std::vector<std::string> trace = split_lines(mtd::read_text_file(tmp.file("tr.csv")));
  CHECK(trace.size() >= 2);
  CHECK(trace[0] == "iteration,energy");

  SUBCASE("explicit truth file overrides manifest labels") {
    std::string truth = "member,cluster\n";
    for (int i = 0; i < 12; ++i) truth += std::to_string(i) + "," + std::to_string(i / 4) + "\n";
    mtd::write_text_file(tmp.file("truth.csv"), truth);
    const CliResult with_truth = run({"cluster", "--manifest", manifest, "--k", "3", "--simplify",
                                      "0.02", "--runs", "2", "--truth", tmp.file("truth.csv"),
                                      "--out", tmp.file("cl2.csv")});
    REQUIRE(with_truth.code == 0);
    CHECK(with_truth.out == r.out);
  }
  SUBCASE("truth files must cover every member exactly once") {
    mtd::write_text_file(tmp.file("short.csv"), "member,cluster\n0,0\n");
    const CliResult bad = run({"cluster", "--manifest", manifest, "--k", "3", "--simplify",
                               "0.02", "--truth", tmp.file("short.csv")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("missing label") != std::string::npos);
  }
}

TEST_CASE("reduce keeps endpoints and reports zero keyframe error") {
  const Fixture& f = fixture();
  TempDir tmp;
  REQUIRE(run({"gen", "series", f.t0, f.t1, "--frames", "6", "--out", tmp.file("series")}).code ==
          0);
  CHECK(run({"gen", "series", f.t0, f.t1, "--frames", "1", "--out", tmp.file("x")}).code == 1);

  const CliResult r = run({"reduce", "--manifest", tmp.file("series/manifest.json"), "--keep",
                           "2", "--out", tmp.file("red.csv")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("keyframes 2 of 6") == 0);

  const std::vector<std::string> rows = split_lines(mtd::read_text_file(tmp.file("red.csv")));
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "frame,keyframe,path_error,wasserstein_error");
  for (int i = 1; i <= 6; ++i) {
    std::istringstream fields(rows[i]);
    int frame = 0, kept = 0;
    char c1 = 0, c2 = 0;
    double path_error = 0.0;
    REQUIRE((fields >> frame >> c1 >> kept >> c2 >> path_error));
    CHECK(frame == i - 1);
    CHECK(kept == (i == 1 || i == 6 ? 1 : 0));
    if (kept == 1) CHECK(path_error == 0.0);
    CHECK(path_error < 1e-6);
  }
}

TEST_CASE("matrix output is symmetric with a zero diagonal") {
  const Fixture& f = fixture();
  const CliResult r = run({"matrix", "--manifest", f.manifest, "--simplify", "0.02"});
  REQUIRE(r.code == 0);

  const std::vector<std::string> rows = split_lines(r.out);
  REQUIRE(rows.size() == 3);
  std::vector<std::vector<double>> m;
  for (const std::string& row : rows) {
    std::vector<double> vals;
    std::istringstream fields(row);
    std::string cell;
    while (std::getline(fields, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 3);
    m.push_back(vals);
  }
  for (int i = 0; i < 3; ++i) {
    CHECK(m[i][i] == 0.0);
    for (int j = 0; j < 3; ++j) CHECK(m[i][j] == m[j][i]);
  }
  const double d01 =
      mtd::path_mapping_distance(mtd::load_tree(f.t0), mtd::load_tree(f.t1)).distance;
  CHECK(m[0][1] == d01);
}

TEST_CASE("gen writes loadable ensembles and requires --out") {
  CHECK(run({"gen", "analytic", "--members", "2"}).code == 1);

  TempDir tmp;
  REQUIRE(run({"gen", "analytic", "--members", "2", "--seed", "11", "--out", tmp.file("e")})
              .code == 0);
  const mtd::Manifest m = mtd::load_manifest(tmp.file("e/manifest.json"));
  REQUIRE(m.members.size() == 2);
  CHECK(m.labels.empty());
  for (const std::string& path : m.members) {
    const MergeTree t = mtd::simplify(mtd::split_tree(mtd::load_grid(path)), 0.02);
    CHECK(leaf_count(t) == 9);
  }

  REQUIRE(run({"gen", "swap", "--phases", "2", "--per-phase", "2", "--out", tmp.file("s")})
              .code == 0);
  const mtd::Manifest swap = mtd::load_manifest(tmp.file("s/manifest.json"));
  CHECK(swap.members.size() == 4);
  CHECK(swap.labels == std::vector<int>{0, 0, 1, 1});

  const Fixture& f = fixture();
  REQUIRE(run({"gen", "series", f.t0, f.t1, "--frames", "3", "--out", tmp.file("g")}).code == 0);
  const mtd::Manifest series = mtd::load_manifest(tmp.file("g/manifest.json"));
  REQUIRE(series.members.size() == 3);
  CHECK(series.times == std::vector<double>{0.0, 1.0, 2.0});
  for (const std::string& path : series.members) CHECK(mtd::load_tree(path).size() > 0);
}

TEST_CASE("identical invocations produce identical bytes") {
  const Fixture& f = fixture();

  // Console-artifact subcommands twice each, compared byte for byte.
  const std::vector<std::vector<std::string>> console_cases = {
      {"tree", f.ens + "/member_000.txt", "--simplify", "0.02"},
      {"simplify", f.t0, "--threshold", "0.3"},
      {"dist", f.t0, f.t1},
      {"dist", f.t0, f.t1, "--metric", "wasserstein"},
      {"geodesic", f.t0, f.t1, "--alpha", "0.25"},
      {"geodesic", f.t0, f.t1, "--alpha", "0.25", "--metric", "wasserstein"},
      {"barycenter", f.t0, f.t1},
      {"barycenter", f.t0, f.t1, "--metric", "wasserstein"},
      {"barycenter", f.t0, f.t1, "--variant", "median"},
      {"matrix", "--manifest", f.manifest, "--simplify", "0.02"},
      {"matrix", "--manifest", f.manifest, "--simplify", "0.02", "--metric", "wasserstein"},
  };
  for (const auto& args : console_cases) {
    const CliResult first = run(args);
    REQUIRE(first.code == 0);
    CHECK(same_cli_result(first, run(args)));
  }

  // File-writing subcommands twice into separate directories; the produced
  // trees, grids, manifests, and CSVs must match byte for byte too.
  TempDir a;
  TempDir b;
  const std::vector<std::vector<std::string>> dir_cases = {
      {"gen", "analytic", "--members", "2", "--seed", "11"},
      {"gen", "swap", "--phases", "2", "--per-phase", "2", "--seed", "7"},
      {"gen", "series", f.t0, f.t1, "--frames", "3"},
  };
  for (std::size_t i = 0; i < dir_cases.size(); ++i) {
    const std::string name = "case" + std::to_string(i);
    std::vector<std::string> into_a = dir_cases[i];
    into_a.insert(into_a.end(), {"--out", a.file(name)});
    std::vector<std::string> into_b = dir_cases[i];
    into_b.insert(into_b.end(), {"--out", b.file(name)});
    const CliResult ra = run(into_a);
    const CliResult rb = run(into_b);
    REQUIRE(ra.code == 0);
    CHECK(ra.code == rb.code);
    CHECK(snapshot_dir(a.file(name)) == snapshot_dir(b.file(name)));
  }

  // Seeded subcommand with internal randomness: clustering restarts.
  REQUIRE(run({"gen", "swap", "--out", a.file("swap")}).code == 0);
  const std::vector<std::string> cluster_args = {
      "cluster", "--manifest", a.file("swap/manifest.json"), "--k", "3",
      "--simplify", "0.02", "--runs", "2"};
  const CliResult c1 = run(cluster_args);
  REQUIRE(c1.code == 0);
  CHECK(same_cli_result(c1, run(cluster_args)));
}

TEST_SUITE_END();
