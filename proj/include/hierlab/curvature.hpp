#pragma once

#include <functional>
#include <optional>

#include "hierlab/graph.hpp"
#include "hierlab/hyperbolic.hpp"

namespace hierlab {

/// Probability mass over a node and its one-hop neighborhood.
struct MassDistribution {
  NodeId owner = -1;
  std::vector<std::pair<NodeId, double>> support;  // masses sum to 1

  double total() const;
};

/// Fraction of u's one-hop neighborhood carrying train label `cls`; the full
/// neighborhood is the denominator, so unlabeled neighbors dilute. Isolated
/// nodes yield 0 for every class.
double label_distribution(const Graph& g, NodeId u, std::int32_t cls,
                          const SplitMask& mask);

/// Owner keeps mass alpha; each neighbor w gets mass proportional to
/// exp(-D_w(y_w) * d(u,w)^p) with D the neighbor's own-label distribution
/// (0 when w carries no train label), renormalized to 1-alpha.
MassDistribution mass_distribution(const Graph& g, NodeId u, double alpha,
                                   double p, const SplitMask& mask);

/// Exact minimal transport cost between two mass distributions under the
/// given ground metric. Throws std::domain_error when a required ground
/// distance is infinite.
using GroundFn = std::function<double(NodeId, NodeId)>;
double wasserstein(const MassDistribution& mu, const MassDistribution& mv,
                   const GroundFn& ground);

/// Exact solver for the discrete transportation problem (MODI / u-v method
/// on the transportation tableau). Exposed for reuse and testing.
double solve_transport(const std::vector<double>& supply,
                       const std::vector<double>& demand,
                       const std::vector<std::vector<double>>& cost);

enum class GroundMetric { Hop, Embedding };

struct CurvatureOptions {
  double alpha = 0.5;
  double p = 2.0;
  bool kappa_literal = false;  // report W/d instead of 1 - W/d
  GroundMetric ground = GroundMetric::Hop;
};

/// Class-aware Ricci curvature of one edge. With the default convention this
/// is 1 - W(m_u, m_v)/d(u,v); the literal flag yields W/d.
double class_aware_ricci(const Graph& g, NodeId u, NodeId v,
                         const CurvatureOptions& opts, const SplitMask& mask,
                         const PoincareEmbedding* emb = nullptr);

/// Per-edge curvature values aligned with Graph::edges().
struct EdgeCurvatureTable {
  std::vector<double> kappa;

  /// Curvature per CSR adjacency slot (same layout as Graph::adj()).
  std::vector<double> per_slot(const Graph& g) const;
};

EdgeCurvatureTable curvature_table(const Graph& g, const CurvatureOptions& opts,
                                   const SplitMask& mask,
                                   const PoincareEmbedding* emb = nullptr);

}  // namespace hierlab
