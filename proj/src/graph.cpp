#include "hierlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace hierlab {

SparseFeatures SparseFeatures::identity(std::int64_t n) {
  SparseFeatures f;
  f.rows = n;
  f.cols = n;
  f.offsets.resize(n + 1);
  f.col.resize(n);
  f.val.assign(n, 1.0);
  for (std::int64_t i = 0; i <= n; ++i) f.offsets[i] = i;
  for (std::int64_t i = 0; i < n; ++i) f.col[i] = static_cast<std::int32_t>(i);
  return f;
}

SparseFeatures SparseFeatures::from_dense(std::int64_t rows, std::int64_t cols,
                                          const std::vector<double>& values) {
  if (static_cast<std::int64_t>(values.size()) != rows * cols)
    throw std::invalid_argument("from_dense: size mismatch");
  SparseFeatures f;
  f.rows = rows;
  f.cols = cols;
  f.offsets.resize(rows + 1, 0);
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) {
      double v = values[i * cols + j];
      if (v != 0.0) {
        f.col.push_back(static_cast<std::int32_t>(j));
        f.val.push_back(v);
      }
    }
    f.offsets[i + 1] = static_cast<std::int64_t>(f.col.size());
  }
  return f;
}

void SparseFeatures::row_normalize() {
  for (std::int64_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::int64_t k = offsets[i]; k < offsets[i + 1]; ++k) s += val[k];
    if (s != 0.0) {
      for (std::int64_t k = offsets[i]; k < offsets[i + 1]; ++k) val[k] /= s;
    }
  }
}

Graph::Graph(NodeId n, std::vector<std::pair<NodeId, NodeId>> edge_list,
             std::vector<std::int32_t> labels, SparseFeatures features,
             std::int32_t num_classes) {
  if (n < 0) throw std::invalid_argument("graph: negative node count");
  n_ = n;

  for (auto& [u, v] : edge_list) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("graph: self-loop rejected");
    if (u > v) std::swap(u, v);
  }
  std::sort(edge_list.begin(), edge_list.end());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
  edges_ = std::move(edge_list);

  offsets_.assign(static_cast<size_t>(n) + 1, 0);
  for (const auto& [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (NodeId i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adj_.resize(2 * edges_.size());
  std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adj_[cursor[u]++] = v;
    adj_[cursor[v]++] = u;
  }
  for (NodeId i = 0; i < n; ++i)
    std::sort(adj_.begin() + offsets_[i], adj_.begin() + offsets_[i + 1]);

  if (!labels.empty()) {
    if (static_cast<NodeId>(labels.size()) != n)
      throw std::invalid_argument("graph: labels size mismatch");
    std::int32_t max_label = -1;
    for (auto y : labels) {
      if (y < -1) throw std::invalid_argument("graph: label < -1");
      max_label = std::max(max_label, y);
    }
    num_classes_ = num_classes > 0 ? num_classes : max_label + 1;
    if (max_label >= num_classes_)
      throw std::invalid_argument("graph: label >= num_classes");
    labels_ = std::move(labels);
  } else {
    num_classes_ = num_classes;
  }

  if (!features.empty()) {
    if (features.rows != n)
      throw std::invalid_argument("graph: feature rows != node count");
    features_ = std::move(features);
  }
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  check_node(v);
  return {adj_.data() + offsets_[v],
          static_cast<size_t>(offsets_[v + 1] - offsets_[v])};
}

int Graph::degree(NodeId v) const {
  check_node(v);
  return static_cast<int>(offsets_[v + 1] - offsets_[v]);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::fully_labeled() const {
  if (labels_.empty()) return n_ == 0;
  for (auto y : labels_)
    if (y < 0) return false;
  return true;
}

void Graph::check_node(NodeId v) const {
  if (v < 0 || v >= n_)
    throw std::out_of_range("graph: node id " + std::to_string(v) +
                            " out of range [0," + std::to_string(n_) + ")");
}

bool SplitMask::in_train(NodeId v) const {
  return std::binary_search(train.begin(), train.end(), v);
}

void SplitMask::validate(NodeId n) const {
  auto check_set = [&](const std::vector<NodeId>& s, const char* name) {
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 0 || s[i] >= n)
        throw std::invalid_argument(std::string("split: bad id in ") + name);
      if (i > 0 && s[i] <= s[i - 1])
        throw std::invalid_argument(std::string("split: unsorted/duplicate in ") + name);
    }
  };
  check_set(train, "train");
  check_set(val, "val");
  check_set(test, "test");
  std::vector<char> seen(n, 0);
  for (const auto* s : {&train, &val, &test})
    for (NodeId v : *s) {
      if (seen[v]) throw std::invalid_argument("split: sets overlap");
      seen[v] = 1;
    }
}

std::vector<std::int32_t> visible_labels(const Graph& g, const SplitMask& mask) {
  std::vector<std::int32_t> vis(g.num_nodes(), -1);
  for (NodeId v : mask.train) vis[v] = g.label(v);
  return vis;
}

std::vector<int> shortest_path_lengths(const Graph& g, NodeId source, int max_hops) {
  g.check_node(source);
  std::vector<int> dist(g.num_nodes(), kUnreachableHops);
  dist[source] = 0;
  std::deque<NodeId> queue{source};
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    if (dist[u] >= max_hops) continue;
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] == kUnreachableHops) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace hierlab
