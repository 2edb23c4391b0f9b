#pragma once

#include <filesystem>
#include <string>

#include "hierlab/curvature.hpp"
#include "hierlab/graph.hpp"
#include "hierlab/hyperbolic.hpp"

namespace hierlab {

struct LoadWarnings {
  std::int64_t dropped_unknown_id = 0;  // citation edges to unseen node ids
  std::int64_t dropped_self_loops = 0;
  std::int64_t dropped_duplicates = 0;
};

struct Dataset {
  Graph graph;
  std::vector<int> generation;           // empty unless annotations present
  std::vector<std::string> label_names;  // interned order, may be empty
  LoadWarnings warnings;
};

/// Directory layout: edges.csv (src,dst), optional labels.csv (node,label),
/// features.csv (node,f0,...), annotations.csv (node,generation,level).
/// Headers are optional and detected.
Dataset load_csv_dataset(const std::filesystem::path& dir);

void write_csv_dataset(const std::filesystem::path& dir, const Graph& g,
                       const std::vector<int>* generations = nullptr);

/// Raw citation files: `<id>TAB<f0..fk>TAB<label>` rows in `content`,
/// `<cited>TAB<citing>` rows in `cites`. String ids and labels are interned
/// in first-seen order; edges naming unknown ids are dropped and counted.
Dataset load_citation(const std::filesystem::path& content,
                      const std::filesystem::path& cites);

void write_embedding_csv(const std::filesystem::path& path,
                         const PoincareEmbedding& emb);
PoincareEmbedding read_embedding_csv(const std::filesystem::path& path);

void write_curvature_csv(const std::filesystem::path& path, const Graph& g,
                         const EdgeCurvatureTable& table);
/// Requires one row per edge of `g`; order-insensitive.
EdgeCurvatureTable read_curvature_csv(const std::filesystem::path& path,
                                      const Graph& g);

/// Writes `text` to `path` via a temporary file + rename.
void atomic_write(const std::filesystem::path& path, const std::string& text);

}  // namespace hierlab
