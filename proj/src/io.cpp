#include "hierlab/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hierlab {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::string trim(std::string s) {
  auto issp = [](unsigned char ch) { return std::isspace(ch); };
  while (!s.empty() && issp(s.back())) s.pop_back();
  size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path,
                                               bool required) {
  std::ifstream in(path);
  if (!in) {
    if (required) throw std::runtime_error("cannot open " + path.string());
    return {};
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    auto cells = split_line(line, ',');
    for (auto& c : cells) c = trim(c);
    if (first) {
      first = false;
      // Header row: first cell non-numeric.
      if (!cells.empty() && !looks_numeric(cells[0])) continue;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

NodeId to_node(const std::string& s) {
  return static_cast<NodeId>(std::stol(s));
}

}  // namespace

Dataset load_csv_dataset(const fs::path& dir) {
  Dataset ds;
  auto edge_rows = read_csv(dir / "edges.csv", true);
  auto label_rows = read_csv(dir / "labels.csv", false);
  auto feat_rows = read_csv(dir / "features.csv", false);
  auto ann_rows = read_csv(dir / "annotations.csv", false);

  NodeId max_id = -1;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& row : edge_rows) {
    if (row.size() < 2) throw std::runtime_error("edges.csv: bad row");
    NodeId u = to_node(row[0]), v = to_node(row[1]);
    max_id = std::max({max_id, u, v});
    if (u == v) {
      ++ds.warnings.dropped_self_loops;
      continue;
    }
    edges.emplace_back(u, v);
  }
  for (const auto* rows : {&label_rows, &feat_rows, &ann_rows})
    for (const auto& row : *rows) {
      if (row.size() < 2) throw std::runtime_error("csv: bad row");
      max_id = std::max(max_id, to_node(row[0]));
    }
  NodeId n = max_id + 1;

  std::vector<std::int32_t> labels;
  if (!label_rows.empty()) {
    labels.assign(n, -1);
    for (const auto& row : label_rows)
      labels[to_node(row[0])] = static_cast<std::int32_t>(std::stol(row[1]));
  }

  SparseFeatures features;
  if (!feat_rows.empty()) {
    std::int64_t d = static_cast<std::int64_t>(feat_rows.front().size()) - 1;
    std::vector<double> dense(static_cast<size_t>(n) * d, 0.0);
    for (const auto& row : feat_rows) {
      if (static_cast<std::int64_t>(row.size()) != d + 1)
        throw std::runtime_error("features.csv: ragged row");
      NodeId v = to_node(row[0]);
      for (std::int64_t j = 0; j < d; ++j)
        dense[static_cast<size_t>(v) * d + j] = std::stod(row[j + 1]);
    }
    features = SparseFeatures::from_dense(n, d, dense);
  }

  size_t before = edges.size();
  ds.graph = Graph(n, std::move(edges), std::move(labels), std::move(features));
  ds.warnings.dropped_duplicates =
      static_cast<std::int64_t>(before) - ds.graph.num_edges();

  if (!ann_rows.empty()) {
    ds.generation.assign(n, 0);
    for (const auto& row : ann_rows)
      ds.generation[to_node(row[0])] = static_cast<int>(std::stol(row[1]));
  }
  return ds;
}

void write_csv_dataset(const fs::path& dir, const Graph& g,
                       const std::vector<int>* generations) {
  fs::create_directories(dir);
  {
    std::ostringstream out;
    out << "src,dst\n";
    for (const auto& [u, v] : g.edges()) out << u << "," << v << "\n";
    atomic_write(dir / "edges.csv", out.str());
  }
  if (g.has_labels()) {
    std::ostringstream out;
    out << "node,label\n";
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      if (g.label(v) >= 0) out << v << "," << g.label(v) << "\n";
    atomic_write(dir / "labels.csv", out.str());
  }
  if (g.has_features()) {
    const auto& f = g.features();
    std::ostringstream out;
    out << "node";
    for (std::int64_t j = 0; j < f.cols; ++j) out << ",f" << j;
    out << "\n";
    for (std::int64_t i = 0; i < f.rows; ++i) {
      out << i;
      std::int64_t k = f.offsets[i];
      for (std::int64_t j = 0; j < f.cols; ++j) {
        double v = 0.0;
        if (k < f.offsets[i + 1] && f.col[k] == j) v = f.val[k++];
        out << "," << v;
      }
      out << "\n";
    }
    atomic_write(dir / "features.csv", out.str());
  }
  if (generations && !generations->empty()) {
    int iterations = *std::max_element(generations->begin(), generations->end());
    std::ostringstream out;
    out << "node,generation,level\n";
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      const char* level = "bottom";
      int gen = (*generations)[v];
      if (gen < iterations - 1)
        level = "top";
      else if (gen == iterations - 1)
        level = "middle";
      out << v << "," << gen << "," << level << "\n";
    }
    atomic_write(dir / "annotations.csv", out.str());
  }
}

Dataset load_citation(const fs::path& content, const fs::path& cites) {
  std::ifstream cin(content);
  if (!cin) throw std::runtime_error("cannot open " + content.string());

  Dataset ds;
  std::unordered_map<std::string, NodeId> id_of;
  std::unordered_map<std::string, std::int32_t> label_of;
  std::vector<std::int32_t> labels;
  std::vector<double> feat_vals;
  std::int64_t d = -1;

  std::string line;
  while (std::getline(cin, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_line(line, '\t');
    if (cells.size() < 3) throw std::runtime_error("content: bad row");
    const std::string& sid = cells.front();
    const std::string label = trim(cells.back());
    std::int64_t row_d = static_cast<std::int64_t>(cells.size()) - 2;
    if (d < 0) d = row_d;
    if (row_d != d) throw std::runtime_error("content: ragged features");

    if (id_of.count(sid)) throw std::runtime_error("content: duplicate id " + sid);
    NodeId v = static_cast<NodeId>(id_of.size());
    id_of.emplace(sid, v);
    auto [it, fresh] = label_of.emplace(
        label, static_cast<std::int32_t>(label_of.size()));
    if (fresh) ds.label_names.push_back(label);
    labels.push_back(it->second);
    for (std::int64_t j = 0; j < d; ++j)
      feat_vals.push_back(std::stod(cells[j + 1]));
  }
  NodeId n = static_cast<NodeId>(id_of.size());

  std::ifstream ein(cites);
  if (!ein) throw std::runtime_error("cannot open " + cites.string());
  std::vector<std::pair<NodeId, NodeId>> edges;
  while (std::getline(ein, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_line(line, '\t');
    if (cells.size() < 2) {
      // Some dumps separate with spaces.
      cells = split_line(line, ' ');
      cells.erase(std::remove(cells.begin(), cells.end(), std::string{}),
                  cells.end());
    }
    if (cells.size() < 2) throw std::runtime_error("cites: bad row");
    auto a = id_of.find(trim(cells[0]));
    auto b = id_of.find(trim(cells[1]));
    if (a == id_of.end() || b == id_of.end()) {
      ++ds.warnings.dropped_unknown_id;
      continue;
    }
    if (a->second == b->second) {
      ++ds.warnings.dropped_self_loops;
      continue;
    }
    edges.emplace_back(a->second, b->second);
  }

  size_t before = edges.size();
  ds.graph = Graph(n, std::move(edges), std::move(labels),
                   SparseFeatures::from_dense(n, d, feat_vals));
  ds.warnings.dropped_duplicates =
      static_cast<std::int64_t>(before) - ds.graph.num_edges();
  return ds;
}

void write_embedding_csv(const fs::path& path, const PoincareEmbedding& emb) {
  std::ostringstream out;
  out.precision(17);
  out << "node";
  for (int j = 0; j < emb.dim; ++j) out << ",x" << j;
  out << ",norm\n";
  for (NodeId v = 0; v < emb.num_nodes(); ++v) {
    out << v;
    for (int j = 0; j < emb.dim; ++j) out << "," << emb.points[v * emb.dim + j];
    out << "," << emb.norms[v] << "\n";
  }
  atomic_write(path, out.str());
}

PoincareEmbedding read_embedding_csv(const fs::path& path) {
  auto rows = read_csv(path, true);
  if (rows.empty()) throw std::runtime_error("embedding csv: empty");
  int dim = static_cast<int>(rows.front().size()) - 2;
  if (dim < 1) throw std::runtime_error("embedding csv: bad width");
  PoincareEmbedding emb;
  emb.dim = dim;
  emb.points.assign(rows.size() * static_cast<size_t>(dim), 0.0);
  emb.norms.assign(rows.size(), 0.0);
  for (const auto& row : rows) {
    NodeId v = to_node(row[0]);
    if (v < 0 || v >= static_cast<NodeId>(rows.size()))
      throw std::runtime_error("embedding csv: node id out of range");
    for (int j = 0; j < dim; ++j)
      emb.points[static_cast<size_t>(v) * dim + j] = std::stod(row[j + 1]);
    emb.norms[v] = std::stod(row[dim + 1]);
  }
  return emb;
}

void write_curvature_csv(const fs::path& path, const Graph& g,
                         const EdgeCurvatureTable& table) {
  std::ostringstream out;
  out.precision(17);
  out << "u,v,kappa\n";
  for (size_t e = 0; e < table.kappa.size(); ++e)
    out << g.edges()[e].first << "," << g.edges()[e].second << ","
        << table.kappa[e] << "\n";
  atomic_write(path, out.str());
}

EdgeCurvatureTable read_curvature_csv(const fs::path& path, const Graph& g) {
  auto rows = read_csv(path, true);
  std::map<std::pair<NodeId, NodeId>, double> by_edge;
  for (const auto& row : rows) {
    if (row.size() < 3) throw std::runtime_error("curvature csv: bad row");
    NodeId u = to_node(row[0]), v = to_node(row[1]);
    if (u > v) std::swap(u, v);
    by_edge[{u, v}] = std::stod(row[2]);
  }
  EdgeCurvatureTable table;
  table.kappa.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    auto it = by_edge.find(e);
    if (it == by_edge.end())
      throw std::runtime_error("curvature csv: missing edge entry");
    table.kappa.push_back(it->second);
  }
  return table;
}

void atomic_write(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

}  // namespace hierlab
