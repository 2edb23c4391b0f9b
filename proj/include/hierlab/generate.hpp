#pragma once

#include <cstdint>

#include "hierlab/graph.hpp"

namespace hierlab {

/// Per-node metadata of the hierarchical network model: `generation` is the
/// fractal iteration that created the node (1..iterations); `community` is the
/// replica id in the three-community variant, -1 otherwise.
struct HnmAnnotation {
  int module_size = 0;
  int iterations = 0;
  std::vector<int> generation;
  std::vector<std::int32_t> community;
};

struct HnmGraph {
  Graph graph;
  HnmAnnotation annotation;
};

/// Deterministic hierarchical network: a fully connected seed module of
/// `module_size` nodes, replicated module_size-1 times per iteration with the
/// outermost peripheral nodes of each new replica wired to the original hub.
/// Produces module_size^iterations nodes.
HnmGraph hnm_generate(int module_size, int iterations);

/// Three identical hierarchical networks whose top hubs are joined by a
/// triangle of bridge edges; node label = replica id (3 classes).
HnmGraph hnm_three_community(int iterations, int module_size = 4);

enum class HierarchyLevel { Top, Middle, Bottom };

/// Level band of a generation tag: bottom = last generation, middle = the one
/// before, top = everything above.
HierarchyLevel hnm_level(int generation, int iterations);

/// Barabasi-Albert preferential attachment: complete seed on m+1 nodes, then
/// each new node attaches m edges to distinct targets with probability
/// proportional to degree. Deterministic given the seed.
Graph ba_generate(NodeId n, int m, std::uint64_t seed);

}  // namespace hierlab
