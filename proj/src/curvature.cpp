#include "hierlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace hierlab {

double MassDistribution::total() const {
  double s = 0.0;
  for (const auto& [node, m] : support) s += m;
  return s;
}

double label_distribution(const Graph& g, NodeId u, std::int32_t cls,
                          const SplitMask& mask) {
  auto nb = g.neighbors(u);
  if (nb.empty()) return 0.0;
  std::int64_t hits = 0;
  for (NodeId v : nb)
    if (mask.in_train(v) && g.label(v) == cls) ++hits;
  return static_cast<double>(hits) / static_cast<double>(nb.size());
}

MassDistribution mass_distribution(const Graph& g, NodeId u, double alpha,
                                   double p, const SplitMask& mask) {
  auto nb = g.neighbors(u);
  if (nb.empty()) throw std::invalid_argument("mass_distribution: isolated node");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("mass_distribution: alpha outside [0,1]");

  MassDistribution m;
  m.owner = u;
  m.support.reserve(nb.size() + 1);
  m.support.emplace_back(u, alpha);

  // Hop distance to a neighbor is 1, so the distance factor is 1^p = 1 and
  // only the label-distribution term shapes the weights.
  std::vector<double> w(nb.size());
  double wsum = 0.0;
  for (size_t i = 0; i < nb.size(); ++i) {
    NodeId v = nb[i];
    double d_term = 0.0;
    if (mask.in_train(v)) d_term = label_distribution(g, v, g.label(v), mask);
    w[i] = std::exp(-d_term * std::pow(1.0, p));
    wsum += w[i];
  }
  for (size_t i = 0; i < nb.size(); ++i)
    m.support.emplace_back(nb[i], (1.0 - alpha) * w[i] / wsum);
  return m;
}

double solve_transport(const std::vector<double>& supply,
                       const std::vector<double>& demand,
                       const std::vector<std::vector<double>>& cost) {
  const int ns = static_cast<int>(supply.size());
  const int nd = static_cast<int>(demand.size());
  if (ns == 0 || nd == 0) throw std::invalid_argument("transport: empty side");

  std::vector<double> a(supply);
  std::vector<double> b(demand);
  double sa = 0.0, sb = 0.0;
  for (double x : a) sa += x;
  for (double x : b) sb += x;
  if (sa <= 0.0 || sb <= 0.0) throw std::invalid_argument("transport: zero mass");
  for (double& x : b) x *= sa / sb;  // equalize totals exactly

  // Basic cells as flow matrix + basis flags; north-west corner start keeps
  // exactly ns+nd-1 basic cells (degenerate zero-flow cells included).
  std::vector<std::vector<double>> flow(ns, std::vector<double>(nd, 0.0));
  std::vector<std::vector<char>> basic(ns, std::vector<char>(nd, 0));
  {
    int i = 0, j = 0;
    std::vector<double> ra(a), rb(b);
    while (true) {
      double f = std::min(ra[i], rb[j]);
      flow[i][j] = f;
      basic[i][j] = 1;
      ra[i] -= f;
      rb[j] -= f;
      if (i == ns - 1 && j == nd - 1) break;
      if (i < ns - 1 && (ra[i] <= rb[j] || j == nd - 1))
        ++i;
      else
        ++j;
    }
  }

  std::vector<double> u(ns), v(nd);
  std::vector<char> row_done(ns), col_done(nd);
  std::vector<int> row_parent(ns), col_parent(nd);

  const double tol = 1e-12;
  const long max_pivots = 200000L * (ns + nd);
  for (long pivot = 0;; ++pivot) {
    if (pivot > max_pivots) throw std::runtime_error("transport: pivot cap hit");

    // Potentials from the basis tree (u_i + v_j = c_ij on basic cells).
    std::fill(row_done.begin(), row_done.end(), 0);
    std::fill(col_done.begin(), col_done.end(), 0);
    u[0] = 0.0;
    row_done[0] = 1;
    std::deque<std::pair<char, int>> q{{'r', 0}};  // 'r' row, 'c' col
    while (!q.empty()) {
      auto [kind, idx] = q.front();
      q.pop_front();
      if (kind == 'r') {
        for (int j = 0; j < nd; ++j)
          if (basic[idx][j] && !col_done[j]) {
            v[j] = cost[idx][j] - u[idx];
            col_done[j] = 1;
            q.emplace_back('c', j);
          }
      } else {
        for (int i = 0; i < ns; ++i)
          if (basic[i][idx] && !row_done[i]) {
            u[i] = cost[i][idx] - v[idx];
            row_done[i] = 1;
            q.emplace_back('r', i);
          }
      }
    }

    // Entering cell: most negative reduced cost.
    int bi = -1, bj = -1;
    double best = -tol;
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < nd; ++j)
        if (!basic[i][j]) {
          double rc = cost[i][j] - u[i] - v[j];
          if (rc < best) {
            best = rc;
            bi = i;
            bj = j;
          }
        }
    if (bi < 0) break;  // optimal

    // Cycle: unique path in the basis tree from row bi to col bj.
    std::fill(row_done.begin(), row_done.end(), 0);
    std::fill(col_done.begin(), col_done.end(), 0);
    std::fill(row_parent.begin(), row_parent.end(), -1);
    std::fill(col_parent.begin(), col_parent.end(), -1);
    row_done[bi] = 1;
    std::deque<std::pair<char, int>> bfs{{'r', bi}};
    while (!bfs.empty() && !col_done[bj]) {
      auto [kind, idx] = bfs.front();
      bfs.pop_front();
      if (kind == 'r') {
        for (int j = 0; j < nd; ++j)
          if (basic[idx][j] && !col_done[j]) {
            col_done[j] = 1;
            col_parent[j] = idx;
            bfs.emplace_back('c', j);
          }
      } else {
        for (int i = 0; i < ns; ++i)
          if (basic[i][idx] && !row_done[i]) {
            row_done[i] = 1;
            row_parent[i] = idx;
            bfs.emplace_back('r', i);
          }
      }
    }
    if (!col_done[bj]) throw std::runtime_error("transport: basis not a tree");

    // Alternating cycle starting with the entering cell (+).
    std::vector<std::pair<int, int>> minus_cells, plus_cells{{bi, bj}};
    int cj = bj;
    while (true) {
      int ci = col_parent[cj];
      minus_cells.emplace_back(ci, cj);  // basic cell (ci,cj) loses flow
      if (ci == bi) break;
      cj = row_parent[ci];
      plus_cells.emplace_back(ci, cj);  // basic cell (ci,cj) gains flow
    }

    double theta = std::numeric_limits<double>::infinity();
    int li = -1, lj = -1;
    for (auto [i, j] : minus_cells)
      if (flow[i][j] < theta) {
        theta = flow[i][j];
        li = i;
        lj = j;
      }
    for (auto [i, j] : plus_cells) flow[i][j] += theta;
    for (auto [i, j] : minus_cells) flow[i][j] -= theta;
    basic[bi][bj] = 1;
    basic[li][lj] = 0;
    flow[li][lj] = 0.0;
  }

  double total = 0.0;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nd; ++j)
      if (flow[i][j] > 0.0) total += flow[i][j] * cost[i][j];
  return total;
}

double wasserstein(const MassDistribution& mu, const MassDistribution& mv,
                   const GroundFn& ground) {
  if (mu.support.empty() || mv.support.empty())
    throw std::invalid_argument("wasserstein: empty support");
  std::vector<double> supply, demand;
  std::vector<std::vector<double>> cost(mu.support.size(),
                                        std::vector<double>(mv.support.size()));
  for (const auto& [node, m] : mu.support) supply.push_back(m);
  for (const auto& [node, m] : mv.support) demand.push_back(m);
  for (size_t i = 0; i < mu.support.size(); ++i)
    for (size_t j = 0; j < mv.support.size(); ++j) {
      double d = ground(mu.support[i].first, mv.support[j].first);
      if (!std::isfinite(d))
        throw std::domain_error("wasserstein: infinite ground distance");
      cost[i][j] = d;
    }
  return solve_transport(supply, demand, cost);
}

namespace {

// Hop distances among the union of both supports, BFS capped at `cap`.
class HopGround {
 public:
  HopGround(const Graph& g, const MassDistribution& mu,
            const MassDistribution& mv, int cap)
      : g_(g), cap_(cap) {
    for (const auto& [node, m] : mu.support) add(node);
    for (const auto& [node, m] : mv.support) add(node);
  }

  double operator()(NodeId a, NodeId b) const {
    int d = dist_.at(a)[b];
    return d == kUnreachableHops ? std::numeric_limits<double>::infinity()
                                 : static_cast<double>(d);
  }

 private:
  void add(NodeId v) {
    if (!dist_.count(v)) dist_.emplace(v, shortest_path_lengths(g_, v, cap_));
  }

  const Graph& g_;
  int cap_;
  std::unordered_map<NodeId, std::vector<int>> dist_;
};

}  // namespace

double class_aware_ricci(const Graph& g, NodeId u, NodeId v,
                         const CurvatureOptions& opts, const SplitMask& mask,
                         const PoincareEmbedding* emb) {
  if (!g.has_edge(u, v)) throw std::invalid_argument("ricci: (u,v) not an edge");
  auto mu = mass_distribution(g, u, opts.alpha, opts.p, mask);
  auto mv = mass_distribution(g, v, opts.alpha, opts.p, mask);

  double w, duv;
  if (opts.ground == GroundMetric::Embedding) {
    if (!emb) throw std::invalid_argument("ricci: embedding ground needs embedding");
    auto ground = [&](NodeId a, NodeId b) {
      return poincare_distance(emb->point(a), emb->point(b), emb->curvature);
    };
    w = wasserstein(mu, mv, ground);
    duv = ground(u, v);
  } else {
    // Supports live within one hop of adjacent endpoints, so 3 hops suffice.
    HopGround ground(g, mu, mv, 3);
    w = wasserstein(mu, mv, ground);
    duv = 1.0;
  }
  if (duv <= 0.0) throw std::domain_error("ricci: degenerate edge length");
  return opts.kappa_literal ? w / duv : 1.0 - w / duv;
}

EdgeCurvatureTable curvature_table(const Graph& g, const CurvatureOptions& opts,
                                   const SplitMask& mask,
                                   const PoincareEmbedding* emb) {
  if (opts.ground == GroundMetric::Embedding && !emb)
    throw std::invalid_argument("curvature_table: embedding ground needs embedding");
  NodeId n = g.num_nodes();

  // Own-label distribution per node, shared by every mass distribution.
  std::vector<double> own_d(n, 0.0);
  for (NodeId v : mask.train) own_d[v] = label_distribution(g, v, g.label(v), mask);

  std::vector<MassDistribution> masses(n);
  for (NodeId u = 0; u < n; ++u) {
    auto nb = g.neighbors(u);
    if (nb.empty()) continue;
    auto& m = masses[u];
    m.owner = u;
    m.support.reserve(nb.size() + 1);
    m.support.emplace_back(u, opts.alpha);
    double wsum = 0.0;
    std::vector<double> w(nb.size());
    for (size_t i = 0; i < nb.size(); ++i) {
      w[i] = std::exp(-own_d[nb[i]]);
      wsum += w[i];
    }
    for (size_t i = 0; i < nb.size(); ++i)
      m.support.emplace_back(nb[i], (1.0 - opts.alpha) * w[i] / wsum);
  }

  // Lazy 3-hop BFS cache; every ground distance we need stays within 3 hops
  // of an edge endpoint.
  std::vector<std::unique_ptr<std::vector<int>>> hop_cache(n);
  auto hops = [&](NodeId a) -> const std::vector<int>& {
    if (!hop_cache[a])
      hop_cache[a] = std::make_unique<std::vector<int>>(shortest_path_lengths(g, a, 3));
    return *hop_cache[a];
  };

  EdgeCurvatureTable table;
  table.kappa.reserve(g.num_edges());
  for (const auto& [u, v] : g.edges()) {
    const auto& mu = masses[u];
    const auto& mv = masses[v];
    double w, duv;
    if (opts.ground == GroundMetric::Embedding) {
      auto ground = [&](NodeId a, NodeId b) {
        return poincare_distance(emb->point(a), emb->point(b), emb->curvature);
      };
      w = wasserstein(mu, mv, ground);
      duv = ground(u, v);
    } else {
      auto ground = [&](NodeId a, NodeId b) {
        int d = hops(a)[b];
        return d == kUnreachableHops ? std::numeric_limits<double>::infinity()
                                     : static_cast<double>(d);
      };
      w = wasserstein(mu, mv, ground);
      duv = 1.0;
    }
    table.kappa.push_back(opts.kappa_literal ? w / duv : 1.0 - w / duv);
  }
  return table;
}

std::vector<double> EdgeCurvatureTable::per_slot(const Graph& g) const {
  if (kappa.size() != static_cast<size_t>(g.num_edges()))
    throw std::invalid_argument("per_slot: table does not match graph");
  std::vector<double> slots(g.adj().size(), 0.0);
  for (size_t e = 0; e < kappa.size(); ++e) {
    auto [u, v] = g.edges()[e];
    auto nb_u = g.neighbors(u);
    auto nb_v = g.neighbors(v);
    auto it_u = std::lower_bound(nb_u.begin(), nb_u.end(), v);
    auto it_v = std::lower_bound(nb_v.begin(), nb_v.end(), u);
    slots[g.adj_offsets()[u] + (it_u - nb_u.begin())] = kappa[e];
    slots[g.adj_offsets()[v] + (it_v - nb_v.begin())] = kappa[e];
  }
  return slots;
}

}  // namespace hierlab
