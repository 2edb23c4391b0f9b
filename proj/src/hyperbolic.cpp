#include "hierlab/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace hierlab {

namespace {

double dot(Vec a, Vec b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sq_norm(Vec a) { return dot(a, a); }

double sq_dist(Vec a, Vec b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void check_inside(Vec x, double c, const char* who) {
  if (c * sq_norm(x) >= 1.0)
    throw std::domain_error(std::string(who) + ": point not inside the ball");
}

}  // namespace

std::vector<double> mobius_add(Vec x, Vec y, double c) {
  if (x.size() != y.size()) throw std::invalid_argument("mobius_add: dim mismatch");
  check_inside(x, c, "mobius_add");
  check_inside(y, c, "mobius_add");
  double xy = dot(x, y), xx = sq_norm(x), yy = sq_norm(y);
  double denom = 1.0 + 2.0 * c * xy + c * c * xx * yy;
  double coef_x = (1.0 + 2.0 * c * xy + c * yy) / denom;
  double coef_y = (1.0 - c * xx) / denom;
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = coef_x * x[i] + coef_y * y[i];
  return out;
}

double poincare_distance(Vec x, Vec y, double c) {
  if (x.size() != y.size())
    throw std::invalid_argument("poincare_distance: dim mismatch");
  check_inside(x, c, "poincare_distance");
  check_inside(y, c, "poincare_distance");
  // arcosh form of the same quantity; symmetric by construction.
  double alpha = 1.0 - c * sq_norm(x);
  double beta = 1.0 - c * sq_norm(y);
  double gamma = 1.0 + 2.0 * c * sq_dist(x, y) / (alpha * beta);
  if (gamma < 1.0) gamma = 1.0;
  return std::acosh(gamma) / std::sqrt(c);
}

double poincare_norm(Vec x, double c) {
  check_inside(x, c, "poincare_norm");
  double sc = std::sqrt(c);
  return 2.0 / sc * std::atanh(sc * std::sqrt(sq_norm(x)));
}

double poincare_distance_grad(Vec x, Vec y, double c, std::span<double> grad_x,
                              std::span<double> grad_y) {
  double alpha = 1.0 - c * sq_norm(x);
  double beta = 1.0 - c * sq_norm(y);
  double delta = sq_dist(x, y);
  double gamma = 1.0 + 2.0 * c * delta / (alpha * beta);
  double sc = std::sqrt(c);
  if (gamma <= 1.0 + 1e-15) {
    std::fill(grad_x.begin(), grad_x.end(), 0.0);
    std::fill(grad_y.begin(), grad_y.end(), 0.0);
    return gamma < 1.0 ? 0.0 : std::acosh(std::max(gamma, 1.0)) / sc;
  }
  double coef = 1.0 / (sc * std::sqrt(gamma * gamma - 1.0));
  double base = 4.0 * c / (alpha * beta);
  for (size_t i = 0; i < x.size(); ++i) {
    grad_x[i] = coef * base * ((x[i] - y[i]) + c * delta / alpha * x[i]);
    grad_y[i] = coef * base * ((y[i] - x[i]) + c * delta / beta * y[i]);
  }
  return std::acosh(gamma) / sc;
}

void project_into_ball(std::span<double> x, double c, double eps) {
  double r2 = c * sq_norm(Vec{x.data(), x.size()});
  if (r2 > 1.0 - eps) {
    double target = (1.0 - eps) / std::sqrt(c);
    double scale = target / std::sqrt(sq_norm(Vec{x.data(), x.size()}));
    for (auto& xi : x) xi *= scale;
  }
}

void PoincareEmbedding::refresh_norms() {
  NodeId n = num_nodes();
  norms.resize(n);
  for (NodeId v = 0; v < n; ++v) norms[v] = poincare_norm(point(v), curvature);
}

std::vector<double> frechet_mean(const std::vector<double>& points, int dim,
                                 double c, int iterations) {
  size_t n = points.size() / dim;
  std::vector<double> mu(dim, 0.0);
  std::vector<double> gmu(dim), gx(dim), total(dim);
  for (int it = 0; it < iterations; ++it) {
    std::fill(total.begin(), total.end(), 0.0);
    for (size_t v = 0; v < n; ++v) {
      Vec x{points.data() + v * dim, static_cast<size_t>(dim)};
      double d = poincare_distance_grad(mu, x, c, gmu, gx);
      for (int i = 0; i < dim; ++i) total[i] += 2.0 * d * gmu[i];
    }
    double r2 = sq_norm(mu);
    double scale = (1.0 - c * r2) * (1.0 - c * r2) / 4.0;
    for (int i = 0; i < dim; ++i) mu[i] -= 0.05 / static_cast<double>(n) * scale * total[i];
    project_into_ball(mu, c, 1e-5);
  }
  return mu;
}

double embed_loss(const std::vector<double>& points, int dim, double c,
                  std::span<const EmbedSample> samples,
                  std::vector<double>* grad) {
  if (grad) grad->assign(points.size(), 0.0);
  auto pt = [&](NodeId v) {
    return Vec{points.data() + static_cast<size_t>(v) * dim,
               static_cast<size_t>(dim)};
  };

  double total = 0.0;
  std::vector<double> gx(dim), gy(dim);
  std::vector<double> dists, weights;
  for (const auto& s : samples) {
    // Candidate list: positive first, then negatives.
    dists.clear();
    dists.push_back(poincare_distance(pt(s.u), pt(s.v), c));
    for (NodeId w : s.negatives)
      dists.push_back(poincare_distance(pt(s.u), pt(w), c));

    double m = -dists[0];
    for (double d : dists) m = std::max(m, -d);
    double z = 0.0;
    for (double d : dists) z += std::exp(-d - m);
    double lse = m + std::log(z);
    total += dists[0] + lse;

    if (!grad) continue;
    weights.resize(dists.size());
    for (size_t k = 0; k < dists.size(); ++k)
      weights[k] = std::exp(-dists[k] - lse);  // softmax over candidates
    auto add_pair = [&](NodeId a, NodeId b, double w) {
      if (w == 0.0) return;
      poincare_distance_grad(pt(a), pt(b), c, gx, gy);
      double* ga = grad->data() + static_cast<size_t>(a) * dim;
      double* gb = grad->data() + static_cast<size_t>(b) * dim;
      for (int i = 0; i < dim; ++i) {
        ga[i] += w * gx[i];
        gb[i] += w * gy[i];
      }
    };
    add_pair(s.u, s.v, 1.0 - weights[0]);
    for (size_t k = 0; k < s.negatives.size(); ++k)
      add_pair(s.u, s.negatives[k], -weights[k + 1]);
  }
  return total;
}

namespace {

// Uniform negatives without replacement from {w : (u,w) not in E}; u itself
// is an admissible draw. Falls back to the whole complement when small.
void sample_negatives(const Graph& g, NodeId u, int count, std::mt19937_64& rng,
                      std::vector<NodeId>& out) {
  out.clear();
  NodeId n = g.num_nodes();
  auto nb = g.neighbors(u);
  NodeId complement = n - static_cast<NodeId>(nb.size());  // includes u
  if (complement <= 0) return;
  if (complement <= count) {
    for (NodeId w = 0; w < n; ++w)
      if (!std::binary_search(nb.begin(), nb.end(), w)) out.push_back(w);
    return;
  }
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  while (static_cast<int>(out.size()) < count) {
    NodeId w = pick(rng);
    if (std::binary_search(nb.begin(), nb.end(), w)) continue;
    if (std::find(out.begin(), out.end(), w) != out.end()) continue;
    out.push_back(w);
  }
}

}  // namespace

PoincareEmbedding embed_train(const Graph& g, const EmbedOptions& opts,
                              std::vector<double>* loss_log) {
  if (g.num_edges() == 0) throw std::invalid_argument("embed_train: empty edge set");
  if (opts.dim < 2) throw std::invalid_argument("embed_train: dim < 2");

  NodeId n = g.num_nodes();
  int dim = opts.dim;
  double c = opts.curvature;
  std::mt19937_64 rng(opts.seed);

  PoincareEmbedding emb;
  emb.dim = dim;
  emb.curvature = c;
  emb.points.resize(static_cast<size_t>(n) * dim);
  std::uniform_real_distribution<double> init(-opts.init_radius, opts.init_radius);
  for (auto& x : emb.points) x = init(rng);

  if (loss_log) loss_log->clear();
  std::vector<size_t> edge_order(g.num_edges());
  for (size_t i = 0; i < edge_order.size(); ++i) edge_order[i] = i;

  std::vector<EmbedSample> batch(1);
  std::vector<double> grad;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    // Burn-in at a tenth of the rate, then a linear decay to a tenth; the
    // stochastic Riemannian scheme needs shrinking steps to settle.
    double lr;
    if (epoch < opts.burnin_epochs) {
      lr = opts.lr / 10.0;
    } else {
      double progress = static_cast<double>(epoch - opts.burnin_epochs) /
                        std::max(1, opts.epochs - opts.burnin_epochs);
      lr = opts.lr * (1.0 - 0.9 * progress);
    }
    std::shuffle(edge_order.begin(), edge_order.end(), rng);
    double epoch_loss = 0.0;
    for (size_t ei : edge_order) {
      // Each undirected edge is trained from both endpoints as the anchor.
      for (auto [u, v] : {g.edges()[ei],
                          std::pair{g.edges()[ei].second, g.edges()[ei].first}}) {
        batch[0].u = u;
        batch[0].v = v;
        sample_negatives(g, u, opts.neg_samples, rng, batch[0].negatives);
        epoch_loss += 0.5 * embed_loss(emb.points, dim, c, batch, &grad);

        auto step = [&](NodeId w) {
          double* x = emb.points.data() + static_cast<size_t>(w) * dim;
          double r2 = 0.0;
          for (int i = 0; i < dim; ++i) r2 += x[i] * x[i];
          double scale = (1.0 - c * r2) * (1.0 - c * r2) / 4.0;
          const double* gw = grad.data() + static_cast<size_t>(w) * dim;
          for (int i = 0; i < dim; ++i) x[i] -= lr * scale * gw[i];
          project_into_ball({x, static_cast<size_t>(dim)}, c, opts.ball_eps);
        };
        step(u);
        step(v);
        for (NodeId w : batch[0].negatives)
          if (w != u && w != v) step(w);
      }
    }
    if (loss_log)
      loss_log->push_back(epoch_loss / static_cast<double>(g.num_edges()));
  }

  // The loss only pins the configuration up to an isometry; gyro-translate
  // the Frechet mean to the origin so norms measure depth within the layout
  // rather than an arbitrary drift.
  {
    auto mu = frechet_mean(emb.points, dim, c);
    for (auto& m : mu) m = -m;
    for (NodeId v = 0; v < n; ++v) {
      double* x = emb.points.data() + static_cast<size_t>(v) * dim;
      auto moved = mobius_add(mu, Vec{x, static_cast<size_t>(dim)}, c);
      std::copy(moved.begin(), moved.end(), x);
      project_into_ball({x, static_cast<size_t>(dim)}, c, opts.ball_eps);
    }
  }
  emb.refresh_norms();
  return emb;
}

}  // namespace hierlab
