#pragma once

#include <map>

#include "hierlab/graph.hpp"

namespace hierlab {

/// Local clustering coefficient per node; nodes of degree < 2 get 0.
std::vector<double> local_clustering(const Graph& g);

/// Mean local clustering coefficient per degree value present in the graph.
std::map<int, double> clustering_by_degree(const Graph& g);

/// Exact unnormalized shortest-path betweenness (Brandes), undirected pair
/// counting: each unordered source/target pair contributes once.
std::vector<double> betweenness(const Graph& g);

enum class NeighborQuantity { Connectivity, Betweenness };

/// Average nearest-neighbor quantity conditioned on a node's own quantity.
/// Degrees are keyed exactly; betweenness values are pooled into logarithmic
/// bins (10 per decade, zero values in a dedicated bin keyed 0.0). Keys are
/// the degree value or the geometric bin midpoint.
std::map<double, double> neighbor_correlation(const Graph& g, NeighborQuantity q);

/// Fraction of edges whose endpoints share a label. Requires all nodes labeled.
double edge_homophily(const Graph& g);

std::map<int, std::int64_t> degree_histogram(const Graph& g);

}  // namespace hierlab
