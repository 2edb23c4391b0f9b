#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracles {

using hierlab::Graph;
using hierlab::NodeId;

namespace {

// Every simple path between s and t, by DFS.
void all_paths(const Graph& g, NodeId at, NodeId t, std::vector<NodeId>& path,
               std::vector<char>& used, std::vector<std::vector<NodeId>>& out) {
  if (at == t) {
    out.push_back(path);
    return;
  }
  for (NodeId w : g.neighbors(at)) {
    if (used[w]) continue;
    used[w] = 1;
    path.push_back(w);
    all_paths(g, w, t, path, used, out);
    path.pop_back();
    used[w] = 0;
  }
}

}  // namespace

std::vector<double> brute_betweenness(const Graph& g) {
  NodeId n = g.num_nodes();
  std::vector<double> bc(n, 0.0);
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t = s + 1; t < n; ++t) {
      std::vector<std::vector<NodeId>> paths;
      std::vector<NodeId> path{s};
      std::vector<char> used(n, 0);
      used[s] = 1;
      all_paths(g, s, t, path, used, paths);
      if (paths.empty()) continue;
      size_t best = std::numeric_limits<size_t>::max();
      for (const auto& p : paths) best = std::min(best, p.size());
      std::vector<const std::vector<NodeId>*> shortest;
      for (const auto& p : paths)
        if (p.size() == best) shortest.push_back(&p);
      for (const auto* p : shortest)
        for (size_t i = 1; i + 1 < p->size(); ++i)
          bc[(*p)[i]] += 1.0 / static_cast<double>(shortest.size());
    }
  }
  return bc;
}

double brute_lp_transport(const std::vector<double>& supply,
                          const std::vector<double>& demand,
                          const std::vector<std::vector<double>>& cost) {
  // Standard-form LP: min c'x s.t. Ax = b, x >= 0, where x enumerates the
  // ns*nd transport variables and A stacks the row/column sum constraints.
  // Solved with a dense two-phase tableau simplex (Bland's rule).
  const int ns = static_cast<int>(supply.size());
  const int nd = static_cast<int>(demand.size());
  const int nvar = ns * nd;
  const int ncon = ns + nd;

  std::vector<double> b(ncon);
  double sa = 0.0, sb = 0.0;
  for (double x : supply) sa += x;
  for (double x : demand) sb += x;
  for (int i = 0; i < ns; ++i) b[i] = supply[i];
  for (int j = 0; j < nd; ++j) b[ns + j] = demand[j] * sa / sb;

  // Tableau over [x | artificials | rhs].
  int width = nvar + ncon + 1;
  std::vector<std::vector<double>> tab(ncon, std::vector<double>(width, 0.0));
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nd; ++j) tab[i][i * nd + j] = 1.0;
  for (int j = 0; j < nd; ++j)
    for (int i = 0; i < ns; ++i) tab[ns + j][i * nd + j] = 1.0;
  for (int r = 0; r < ncon; ++r) {
    tab[r][nvar + r] = 1.0;
    tab[r][width - 1] = b[r];
  }
  std::vector<int> basis(ncon);
  for (int r = 0; r < ncon; ++r) basis[r] = nvar + r;

  auto pivot = [&](int row, int col) {
    double pv = tab[row][col];
    for (double& x : tab[row]) x /= pv;
    for (int r = 0; r < ncon; ++r) {
      if (r == row || tab[r][col] == 0.0) continue;
      double f = tab[r][col];
      for (int c = 0; c < width; ++c) tab[r][c] -= f * tab[row][c];
    }
    basis[row] = col;
  };

  auto run_phase = [&](const std::vector<double>& obj, int allowed_vars) {
    for (long iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int c = 0; c < allowed_vars; ++c) {
        bool is_basic = false;
        for (int r = 0; r < ncon; ++r)
          if (basis[r] == c) is_basic = true;
        if (is_basic) continue;
        double rc = obj[c];
        for (int r = 0; r < ncon; ++r) rc -= obj[basis[r]] * tab[r][c];
        if (rc < -1e-10) {
          enter = c;  // Bland: first improving column
          break;
        }
      }
      if (enter < 0) return;
      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < ncon; ++r) {
        if (tab[r][enter] > 1e-12) {
          double ratio = tab[r][width - 1] / tab[r][enter];
          if (leave < 0 || ratio < best_ratio - 1e-15 ||
              (std::abs(ratio - best_ratio) <= 1e-15 && basis[r] < basis[leave])) {
            leave = r;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("lp oracle: unbounded");
      pivot(leave, enter);
    }
    throw std::runtime_error("lp oracle: iteration cap");
  };

  // Phase 1: drive artificials to zero.
  std::vector<double> obj1(nvar + ncon, 0.0);
  for (int r = 0; r < ncon; ++r) obj1[nvar + r] = 1.0;
  run_phase(obj1, nvar + ncon);
  double infeas = 0.0;
  for (int r = 0; r < ncon; ++r)
    if (basis[r] >= nvar) infeas += tab[r][width - 1];
  if (infeas > 1e-7) throw std::runtime_error("lp oracle: infeasible");

  // Phase 2: the transport objective over the x variables only. Artificials
  // cannot enter (column scan stops at nvar); the one left basic by the
  // redundant row sits at zero and keeps zero cost.
  std::vector<double> obj2(nvar + ncon, 0.0);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nd; ++j) obj2[i * nd + j] = cost[i][j];
  run_phase(obj2, nvar);

  double total = 0.0;
  for (int r = 0; r < ncon; ++r)
    if (basis[r] < nvar)
      total += obj2[basis[r]] * tab[r][width - 1];
  return total;
}

double vanilla_ollivier_ricci(const Graph& g, NodeId u, NodeId v, double alpha) {
  // Own BFS, independent of the library's.
  auto bfs = [&](NodeId s) {
    std::vector<int> dist(g.num_nodes(), -1);
    std::vector<NodeId> queue{s};
    dist[s] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      NodeId a = queue[qi];
      for (NodeId w : g.neighbors(a))
        if (dist[w] < 0) {
          dist[w] = dist[a] + 1;
          queue.push_back(w);
        }
    }
    return dist;
  };

  auto support = [&](NodeId s) {
    std::vector<std::pair<NodeId, double>> sup{{s, alpha}};
    auto nb = g.neighbors(s);
    for (NodeId w : nb)
      sup.emplace_back(w, (1.0 - alpha) / static_cast<double>(nb.size()));
    return sup;
  };
  auto su = support(u), sv = support(v);

  std::vector<double> supply, demand;
  for (auto& [node, m] : su) supply.push_back(m);
  for (auto& [node, m] : sv) demand.push_back(m);
  std::vector<std::vector<double>> cost(su.size(),
                                        std::vector<double>(sv.size()));
  for (size_t i = 0; i < su.size(); ++i) {
    auto dist = bfs(su[i].first);
    for (size_t j = 0; j < sv.size(); ++j) {
      if (dist[sv[j].first] < 0)
        throw std::runtime_error("oracle: disconnected supports");
      cost[i][j] = dist[sv[j].first];
    }
  }
  return 1.0 - brute_lp_transport(supply, demand, cost);
}

std::vector<double> to_dense(const hierlab::SparseFeatures& f) {
  std::vector<double> dense(static_cast<size_t>(f.rows) * f.cols, 0.0);
  for (std::int64_t i = 0; i < f.rows; ++i)
    for (std::int64_t k = f.offsets[i]; k < f.offsets[i + 1]; ++k)
      dense[static_cast<size_t>(i) * f.cols + f.col[k]] = f.val[k];
  return dense;
}

namespace {

std::vector<double> matmul(const std::vector<double>& a, int ar, int ac,
                           const std::vector<double>& b, int bc) {
  std::vector<double> out(static_cast<size_t>(ar) * bc, 0.0);
  for (int i = 0; i < ar; ++i)
    for (int k = 0; k < ac; ++k) {
      double av = a[static_cast<size_t>(i) * ac + k];
      if (av == 0.0) continue;
      for (int j = 0; j < bc; ++j)
        out[static_cast<size_t>(i) * bc + j] += av * b[static_cast<size_t>(k) * bc + j];
    }
  return out;
}

std::vector<double> dense_logits_with_tau(const Graph& g,
                                          const std::vector<double>& x,
                                          const hierlab::ModelParams& p,
                                          const std::vector<double>& tau) {
  int n = g.num_nodes();
  auto agg1 = matmul(tau, n, n, x, p.in_dim);
  auto h = matmul(agg1, n, p.in_dim, p.w1, p.hidden);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p.hidden; ++k) {
      double& val = h[static_cast<size_t>(i) * p.hidden + k];
      val += p.b1[k];
      val = val > 0.0 ? val : 0.0;
    }
  auto agg2 = matmul(tau, n, n, h, p.hidden);
  auto logits = matmul(agg2, n, p.hidden, p.w2, p.classes);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < p.classes; ++c)
      logits[static_cast<size_t>(i) * p.classes + c] += p.b2[c];
  return logits;
}

}  // namespace

std::vector<double> dense_reference_logits(const Graph& g,
                                           const std::vector<double>& x,
                                           const hierlab::ModelParams& params,
                                           const std::vector<double>& tau) {
  return dense_logits_with_tau(g, x, params, tau);
}

std::vector<double> plain_gcn_logits(const Graph& g,
                                     const std::vector<double>& x,
                                     const hierlab::ModelParams& params) {
  int n = g.num_nodes();
  std::vector<double> tau(static_cast<size_t>(n) * n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    double w = 1.0 / (g.degree(i) + 1.0);
    tau[static_cast<size_t>(i) * n + i] = w;
    for (NodeId j : g.neighbors(i)) tau[static_cast<size_t>(i) * n + j] = w;
  }
  return dense_logits_with_tau(g, x, params, tau);
}

Graph random_graph(int n, double edge_prob, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0, 1);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (unit(rng) < edge_prob) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

}  // namespace oracles
