#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hierlab/graph.hpp"

namespace hierlab {

using Vec = std::span<const double>;

/// Mobius addition on the ball of curvature c (gyrovector form).
/// Throws std::domain_error if an input is on or outside the boundary.
std::vector<double> mobius_add(Vec x, Vec y, double c);

/// Geodesic distance (2/sqrt(c)) atanh(sqrt(c) ||-x (+) y||).
double poincare_distance(Vec x, Vec y, double c);

/// Distance from the origin: (2/sqrt(c)) atanh(sqrt(c) ||x||).
double poincare_norm(Vec x, double c);

/// Distance plus Euclidean gradients w.r.t. both endpoints. Gradients are
/// zero when the points coincide.
double poincare_distance_grad(Vec x, Vec y, double c, std::span<double> grad_x,
                              std::span<double> grad_y);

/// Rescale x into the ball whenever c*||x||^2 > 1 - eps.
void project_into_ball(std::span<double> x, double c, double eps);

/// Frechet (Karcher) mean of ball points under the hyperbolic metric, by
/// Riemannian gradient descent on the summed squared distances.
std::vector<double> frechet_mean(const std::vector<double>& points, int dim,
                                 double c, int iterations = 200);

/// Per-node points in the Poincare ball plus cached hyperbolic norms.
struct PoincareEmbedding {
  int dim = 0;
  double curvature = 1.0;
  std::vector<double> points;  // n x dim, row-major
  std::vector<double> norms;   // n

  NodeId num_nodes() const {
    return dim == 0 ? 0 : static_cast<NodeId>(points.size() / dim);
  }
  Vec point(NodeId v) const { return {points.data() + static_cast<size_t>(v) * dim,
                                      static_cast<size_t>(dim)}; }
  void refresh_norms();
};

/// One stochastic step's worth of work: a positive edge plus sampled
/// negatives for its source.
struct EmbedSample {
  NodeId u = 0;
  NodeId v = 0;
  std::vector<NodeId> negatives;
};

/// Softmax negative-sampling loss over the given samples; the positive pair
/// is part of the partition function. If `grad` is non-null it receives the
/// Euclidean gradient w.r.t. every point (same layout as `points`).
double embed_loss(const std::vector<double>& points, int dim, double c,
                  std::span<const EmbedSample> samples,
                  std::vector<double>* grad = nullptr);

struct EmbedOptions {
  int dim = 2;
  int epochs = 300;
  double lr = 0.5;
  int neg_samples = 10;
  double curvature = 1.0;
  std::uint64_t seed = 1;
  int burnin_epochs = 10;     // run at lr/10
  double ball_eps = 1e-5;     // projection margin
  double init_radius = 1e-3;  // uniform init box half-width
};

/// Shallow hyperbolic embedding trained with per-edge Riemannian SGD
/// (Euclidean gradient scaled by (1-c||x||^2)^2/4, then projected).
/// Deterministic given the options. `loss_log`, if given, receives the mean
/// per-edge loss of every epoch.
PoincareEmbedding embed_train(const Graph& g, const EmbedOptions& opts,
                              std::vector<double>* loss_log = nullptr);

}  // namespace hierlab
