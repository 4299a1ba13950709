#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mtdist/grid.hpp"
#include "mtdist/merge_tree.hpp"
#include "mtdist/path_mapping.hpp"

namespace mtd {

// Raised for malformed or unreadable files; the message names the
// offending file and field so failures are actionable from a shell.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Full-precision float for machine-readable output; 17 significant digits
// round-trip every finite double exactly.
std::string format_full(double v);

// Fixed 9-decimal float for human-facing tables.
std::string format_fixed(double v);

// Trees travel as JSON {"kind": "split"|"join", "nodes": [{"id", "scalar",
// "parent"}, ...]} with parents indexing the nodes array, -1 for the root.
// Join trees are held in memory with negated scalars; the files always
// carry the original field values.
std::string tree_to_json(const MergeTree& t);
MergeTree tree_from_json(const std::string& text, const std::string& origin);
void save_tree(const MergeTree& t, const std::string& path);
MergeTree load_tree(const std::string& path);

// Grids travel as text: a "width height" header line, then one line of
// space-separated full-precision values per row.
std::string grid_to_text(const ScalarGrid& g);
ScalarGrid grid_from_text(const std::string& text, const std::string& origin);
void save_grid(const ScalarGrid& g, const std::string& path);
ScalarGrid load_grid(const std::string& path);

// Ensemble manifest: member file paths plus optional ground-truth labels
// and time indices. Empty vectors mean the field is absent; when present,
// lengths must match the member count.
struct Manifest {
  std::vector<std::string> members;
  std::vector<int> labels;
  std::vector<double> times;
};

std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const std::string& text, const std::string& origin);
void save_manifest(const Manifest& m, const std::string& path);

// Loads a manifest, resolves member paths relative to the manifest's
// directory, and checks that every member file exists.
Manifest load_manifest(const std::string& path);

// Graphviz export. With `mapping` set (which needs the partner tree in
// `other`) the two trees render side by side and every mapped path pair
// gets its own color, gray for unmapped nodes. With branch_decomposition
// set, nodes take the color of their elder branch instead.
struct DotOptions {
  const PathMapping* mapping = nullptr;
  const MergeTree* other = nullptr;
  bool branch_decomposition = false;
};

std::string export_dot(const MergeTree& t, const DotOptions& options = {});

// Whole-file helpers shared by the command-line tool.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mtd
