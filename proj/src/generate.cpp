#include "hierlab/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hierlab {

HnmGraph hnm_generate(int module_size, int iterations) {
  if (module_size < 3) throw std::invalid_argument("hnm: module_size < 3");
  if (iterations < 1) throw std::invalid_argument("hnm: iterations < 1");
  double projected = std::pow(static_cast<double>(module_size), iterations);
  if (projected > 1e6) throw std::invalid_argument("hnm: > 1e6 nodes");

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> peripheral;
  std::vector<int> generation(module_size, 1);
  NodeId size = module_size;

  // Seed module: complete graph, node 0 is the hub.
  for (NodeId u = 0; u < module_size; ++u)
    for (NodeId v = u + 1; v < module_size; ++v) edges.emplace_back(u, v);
  for (NodeId v = 1; v < module_size; ++v) peripheral.push_back(v);

  for (int it = 2; it <= iterations; ++it) {
    std::int64_t base_edges = static_cast<std::int64_t>(edges.size());
    std::vector<NodeId> new_peripheral;
    for (int r = 1; r < module_size; ++r) {
      NodeId shift = r * size;
      for (std::int64_t e = 0; e < base_edges; ++e)
        edges.emplace_back(edges[e].first + shift, edges[e].second + shift);
      for (NodeId p : peripheral) {
        edges.emplace_back(0, p + shift);  // wire replica periphery to the hub
        new_peripheral.push_back(p + shift);
      }
    }
    generation.resize(static_cast<size_t>(size) * module_size, it);
    size *= module_size;
    peripheral = std::move(new_peripheral);
  }

  HnmGraph out;
  out.graph = Graph(size, std::move(edges));
  out.annotation.module_size = module_size;
  out.annotation.iterations = iterations;
  out.annotation.generation = std::move(generation);
  out.annotation.community.assign(size, -1);
  return out;
}

HnmGraph hnm_three_community(int iterations, int module_size) {
  if (iterations < 2) throw std::invalid_argument("hnm3: iterations < 2");
  HnmGraph replica = hnm_generate(module_size, iterations);
  NodeId block = replica.graph.num_nodes();
  NodeId n = 3 * block;

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(3 * replica.graph.num_edges() + 3);
  std::vector<std::int32_t> labels(n);
  std::vector<int> generation(n);
  for (int r = 0; r < 3; ++r) {
    NodeId shift = r * block;
    for (const auto& [u, v] : replica.graph.edges())
      edges.emplace_back(u + shift, v + shift);
    for (NodeId v = 0; v < block; ++v) {
      labels[v + shift] = r;
      generation[v + shift] = replica.annotation.generation[v];
    }
  }
  // Bridge the three replica hubs with a triangle.
  edges.emplace_back(0, block);
  edges.emplace_back(block, 2 * block);
  edges.emplace_back(0, 2 * block);

  HnmGraph out;
  out.graph = Graph(n, std::move(edges), labels, {}, 3);
  out.annotation.module_size = module_size;
  out.annotation.iterations = iterations;
  out.annotation.generation = std::move(generation);
  out.annotation.community = std::move(labels);
  return out;
}

HierarchyLevel hnm_level(int generation, int iterations) {
  if (generation >= iterations) return HierarchyLevel::Bottom;
  if (generation == iterations - 1) return HierarchyLevel::Middle;
  return HierarchyLevel::Top;
}

Graph ba_generate(NodeId n, int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("ba: m < 1");
  if (n <= m) throw std::invalid_argument("ba: n <= m");

  std::mt19937_64 rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> endpoint_bag;  // node repeated once per incident edge

  for (NodeId u = 0; u <= m; ++u)
    for (NodeId v = u + 1; v <= m; ++v) {
      edges.emplace_back(u, v);
      endpoint_bag.push_back(u);
      endpoint_bag.push_back(v);
    }

  std::vector<NodeId> targets;
  for (NodeId v = m + 1; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      std::uniform_int_distribution<size_t> pick(0, endpoint_bag.size() - 1);
      NodeId t = endpoint_bag[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end())
        targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, v);
      endpoint_bag.push_back(t);
      endpoint_bag.push_back(v);
    }
  }
  return Graph(n, std::move(edges));
}

}  // namespace hierlab
