#include "mtdist/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mtdist/branches.hpp"

namespace mtd {

namespace {

using nlohmann::json;

// Distinguishable fill colors cycled by index; gray stays reserved for
// unmapped nodes.
const char* const kPalette[] = {"lightcoral",  "skyblue",   "palegreen", "orange",
                                "plum",        "khaki",     "lightpink", "aquamarine",
                                "burlywood",   "lightsteelblue"};
constexpr int kPaletteSize = static_cast<int>(sizeof(kPalette) / sizeof(kPalette[0]));

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

const json& field(const json& obj, const char* name, const std::string& where) {
  const auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(where + ": missing \"" + name + "\"");
  return *it;
}

double number_field(const json& obj, const char* name, const std::string& where) {
  const json& v = field(obj, name, where);
  if (!v.is_number()) throw ParseError(where + ": \"" + name + "\" is not a number");
  return v.get<double>();
}

long long integer_field(const json& obj, const char* name, const std::string& where) {
  const json& v = field(obj, name, where);
  if (!v.is_number_integer()) throw ParseError(where + ": \"" + name + "\" is not an integer");
  return v.get<long long>();
}

// The stored scalar is split-oriented; files carry the field value.
double file_scalar(const MergeTree& t, int v) {
  return t.kind == TreeKind::join ? -t.nodes[v].scalar : t.nodes[v].scalar;
}

void append_tree_nodes(std::string& out, const MergeTree& t, const std::string& prefix,
                       const std::vector<std::string>& colors) {
  for (int v = 0; v < t.size(); ++v) {
    out += "  " + prefix + std::to_string(v);
    out += " [label=\"" + std::to_string(t.nodes[v].id) + "\\n" +
           format_fixed(file_scalar(t, v)) + "\"";
    if (!colors.empty()) out += ", fillcolor=" + colors[v];
    out += "];\n";
  }
  for (int v = 0; v < t.size(); ++v)
    if (t.nodes[v].parent >= 0)
      out += "  " + prefix + std::to_string(v) + " -> " + prefix +
             std::to_string(t.nodes[v].parent) + ";\n";
}

}  // namespace

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

std::string tree_to_json(const MergeTree& t) {
  std::string out = "{\n  \"kind\": \"";
  out += t.kind == TreeKind::split ? "split" : "join";
  out += "\",\n  \"nodes\": [\n";
  for (int v = 0; v < t.size(); ++v) {
    out += "    {\"id\": " + std::to_string(t.nodes[v].id);
    out += ", \"scalar\": " + format_full(file_scalar(t, v));
    out += ", \"parent\": " + std::to_string(t.nodes[v].parent) + "}";
    if (v + 1 < t.size()) out += ",";
    out += "\n";
  }
  out += "  ]\n}\n";
  return out;
}

MergeTree tree_from_json(const std::string& text, const std::string& origin) {
  const json j = parse_json(text, origin);
  if (!j.is_object()) throw ParseError(origin + ": top level is not an object");

  const json& kind = field(j, "kind", origin);
  MergeTree t;
  if (kind == "split")
    t.kind = TreeKind::split;
  else if (kind == "join")
    t.kind = TreeKind::join;
  else
    throw ParseError(origin + ": \"kind\" must be \"split\" or \"join\"");

  const json& nodes = field(j, "nodes", origin);
  if (!nodes.is_array()) throw ParseError(origin + ": \"nodes\" is not an array");

  const int n = static_cast<int>(nodes.size());
  t.nodes.reserve(n);
  for (int v = 0; v < n; ++v) {
    const std::string where = origin + ": node " + std::to_string(v);
    if (!nodes[v].is_object()) throw ParseError(where + ": not an object");
    TreeNode node;
    node.id = integer_field(nodes[v], "id", where);
    node.scalar = number_field(nodes[v], "scalar", where);
    if (t.kind == TreeKind::join) node.scalar = -node.scalar;
    const long long parent = integer_field(nodes[v], "parent", where);
    if (parent < -1 || parent >= n)
      throw ParseError(where + ": parent " + std::to_string(parent) + " out of range");
    node.parent = static_cast<int>(parent);
    if (node.parent == -1) {
      if (t.root != -1) throw ParseError(where + ": second root");
      t.root = v;
    }
    t.nodes.push_back(node);
  }

  const std::vector<std::string> violations = validate_merge_tree(t);
  if (!violations.empty()) throw ParseError(origin + ": " + violations.front());
  return t;
}

void save_tree(const MergeTree& t, const std::string& path) {
  write_text_file(path, tree_to_json(t));
}

MergeTree load_tree(const std::string& path) {
  return tree_from_json(read_text_file(path), path);
}

std::string grid_to_text(const ScalarGrid& g) {
  std::string out = std::to_string(g.width) + " " + std::to_string(g.height) + "\n";
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (x > 0) out += " ";
      out += format_full(g.values[static_cast<std::size_t>(y) * g.width + x]);
    }
    out += "\n";
  }
  return out;
}

ScalarGrid grid_from_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(origin + ": empty file");

  ScalarGrid g;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> g.width >> g.height) || header >> extra)
      throw ParseError(origin + ": header must be \"width height\"");
  }
  if (g.width <= 0 || g.height <= 0)
    throw ParseError(origin + ": grid dimensions must be positive");

  g.values.reserve(static_cast<std::size_t>(g.width) * g.height);
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    const std::string where = origin + ": line " + std::to_string(rows + 2);
    if (rows == g.height) throw ParseError(origin + ": more rows than the header promises");
    std::istringstream row(line);
    double v = 0.0;
    int got = 0;
    while (row >> v) {
      ++got;
      if (got <= g.width) g.values.push_back(v);
    }
    if (!row.eof()) throw ParseError(where + ": not a number");
    if (got != g.width)
      throw ParseError(where + ": expected " + std::to_string(g.width) + " values, got " +
                       std::to_string(got));
    ++rows;
  }
  if (rows != g.height)
    throw ParseError(origin + ": header promises " + std::to_string(g.height) +
                     " rows, file has " + std::to_string(rows));

  try {
    require_valid(g, origin.c_str());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return g;
}

void save_grid(const ScalarGrid& g, const std::string& path) {
  write_text_file(path, grid_to_text(g));
}

ScalarGrid load_grid(const std::string& path) {
  return grid_from_text(read_text_file(path), path);
}

std::string manifest_to_json(const Manifest& m) {
  std::string out = "{\n  \"members\": [\n";
  for (std::size_t i = 0; i < m.members.size(); ++i) {
    out += "    " + json(m.members[i]).dump();
    if (i + 1 < m.members.size()) out += ",";
    out += "\n";
  }
  out += "  ]";
  if (!m.labels.empty()) {
    out += ",\n  \"labels\": [";
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      if (i > 0) out += ", ";
      out += std::to_string(m.labels[i]);
    }
    out += "]";
  }
  if (!m.times.empty()) {
    out += ",\n  \"times\": [";
    for (std::size_t i = 0; i < m.times.size(); ++i) {
      if (i > 0) out += ", ";
      out += format_full(m.times[i]);
    }
    out += "]";
  }
  out += "\n}\n";
  return out;
}

Manifest manifest_from_json(const std::string& text, const std::string& origin) {
  const json j = parse_json(text, origin);
  if (!j.is_object()) throw ParseError(origin + ": top level is not an object");

  Manifest m;
  const json& members = field(j, "members", origin);
  if (!members.is_array() || members.empty())
    throw ParseError(origin + ": \"members\" must be a non-empty array");
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!members[i].is_string())
      throw ParseError(origin + ": member " + std::to_string(i) + " is not a string");
    m.members.push_back(members[i].get<std::string>());
  }

  if (j.contains("labels")) {
    const json& labels = j["labels"];
    if (!labels.is_array() || labels.size() != m.members.size())
      throw ParseError(origin + ": \"labels\" length does not match members");
    for (const json& v : labels) {
      if (!v.is_number_integer()) throw ParseError(origin + ": label is not an integer");
      m.labels.push_back(v.get<int>());
    }
  }

  if (j.contains("times")) {
    const json& times = j["times"];
    if (!times.is_array() || times.size() != m.members.size())
      throw ParseError(origin + ": \"times\" length does not match members");
    for (const json& v : times) {
      if (!v.is_number()) throw ParseError(origin + ": time is not a number");
      m.times.push_back(v.get<double>());
    }
  }

  return m;
}

void save_manifest(const Manifest& m, const std::string& path) {
  write_text_file(path, manifest_to_json(m));
}

Manifest load_manifest(const std::string& path) {
  Manifest m = manifest_from_json(read_text_file(path), path);
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  for (std::string& member : m.members) {
    std::filesystem::path p(member);
    if (p.is_relative()) p = dir / p;
    if (!std::filesystem::exists(p))
      throw ParseError(path + ": member file not found: " + member);
    member = p.string();
  }
  return m;
}

std::string export_dot(const MergeTree& t, const DotOptions& options) {
  require_valid(t, "export_dot");
  if (options.mapping && options.branch_decomposition)
    throw std::invalid_argument("export_dot: choose one highlight");
  if (options.mapping && !options.other)
    throw std::invalid_argument("export_dot: mapping highlight needs the partner tree");

  std::string out = "digraph mergetree {\n";
  out += "  rankdir=BT;\n";
  out += "  node [shape=box, style=filled, fillcolor=white, fontsize=10];\n";

  if (options.mapping) {
    const MergeTree& other = *options.other;
    const std::vector<std::string> violations =
        validate_path_mapping(*options.mapping, t, other);
    if (!violations.empty())
      throw std::invalid_argument("export_dot: " + violations.front());

    std::vector<std::string> colors1(t.size(), "gray");
    std::vector<std::string> colors2(other.size(), "gray");
    for (std::size_t k = 0; k < options.mapping->pairs.size(); ++k) {
      const char* color = kPalette[k % kPaletteSize];
      for (int v : options.mapping->pairs[k].p1) colors1[v] = color;
      for (int v : options.mapping->pairs[k].p2) colors2[v] = color;
    }
    out += "  subgraph cluster_a {\n    label=\"first\";\n";
    append_tree_nodes(out, t, "a", colors1);
    out += "  }\n";
    out += "  subgraph cluster_b {\n    label=\"second\";\n";
    append_tree_nodes(out, other, "b", colors2);
    out += "  }\n";
  } else if (options.branch_decomposition) {
    const BranchDecomposition d = branch_decomposition_elder(t);
    std::vector<std::string> colors(t.size(), "gray");
    for (std::size_t b = 0; b < d.branches.size(); ++b) {
      const Branch& branch = d.branches[b];
      const char* color = kPalette[b % kPaletteSize];
      // The start saddle belongs to the parent branch's interior; the main
      // branch owns its whole path.
      const std::size_t first = static_cast<int>(b) == d.main ? 0 : 1;
      for (std::size_t i = first; i < branch.path.size(); ++i) colors[branch.path[i]] = color;
    }
    append_tree_nodes(out, t, "a", colors);
  } else {
    append_tree_nodes(out, t, "a", {});
  }

  out += "}\n";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace mtd
