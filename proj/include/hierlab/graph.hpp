#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace hierlab {

using NodeId = std::int32_t;

/// Hop-distance sentinel for unreachable nodes.
inline constexpr int kUnreachableHops = std::numeric_limits<int>::max();

/// Sparse row-major feature matrix in CSR layout. rows == 0 means "absent".
struct SparseFeatures {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::int64_t> offsets;  // size rows + 1
  std::vector<std::int32_t> col;
  std::vector<double> val;

  bool empty() const { return rows == 0; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(col.size()); }

  static SparseFeatures identity(std::int64_t n);
  static SparseFeatures from_dense(std::int64_t rows, std::int64_t cols,
                                   const std::vector<double>& values);

  /// Scales each row so its entries sum to 1 (rows summing to 0 are left alone).
  void row_normalize();
};

/// Immutable undirected graph. Edges are stored once as (min,max) pairs,
/// deduplicated; adjacency is a sorted CSR structure. Labels are optional
/// per-node class ids (-1 = unlabeled). Self-loops are rejected.
class Graph {
 public:
  Graph() = default;
  Graph(NodeId n, std::vector<std::pair<NodeId, NodeId>> edge_list,
        std::vector<std::int32_t> labels = {}, SparseFeatures features = {},
        std::int32_t num_classes = 0);

  NodeId num_nodes() const { return n_; }
  std::int64_t num_edges() const { return static_cast<std::int64_t>(edges_.size()); }
  const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const;
  int degree(NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const;

  const std::vector<std::int32_t>& labels() const { return labels_; }
  std::int32_t label(NodeId v) const { return labels_.empty() ? -1 : labels_[v]; }
  bool has_labels() const { return !labels_.empty(); }
  bool fully_labeled() const;
  std::int32_t num_classes() const { return num_classes_; }

  const SparseFeatures& features() const { return features_; }
  bool has_features() const { return !features_.empty(); }

  const std::vector<std::int64_t>& adj_offsets() const { return offsets_; }
  const std::vector<NodeId>& adj() const { return adj_; }

  void check_node(NodeId v) const;  // throws std::out_of_range

 private:
  NodeId n_ = 0;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::int64_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<std::int32_t> labels_;
  std::int32_t num_classes_ = 0;
  SparseFeatures features_;
};

/// Disjoint train/val/test node-id sets. Vectors are kept sorted.
struct SplitMask {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;

  bool in_train(NodeId v) const;
  /// Throws std::invalid_argument if the sets overlap or reference bad ids.
  void validate(NodeId n) const;
};

/// Labels as seen by a semi-supervised learner: node's label if it is in the
/// train set, -1 otherwise.
std::vector<std::int32_t> visible_labels(const Graph& g, const SplitMask& mask);

/// BFS hop distances from `source`, exact up to `max_hops`, kUnreachableHops
/// beyond (or for disconnected nodes).
std::vector<int> shortest_path_lengths(const Graph& g, NodeId source,
                                       int max_hops = kUnreachableHops);

}  // namespace hierlab
