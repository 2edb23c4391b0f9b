#include "hierlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace hierlab {

std::vector<double> local_clustering(const Graph& g) {
  std::vector<double> c(g.num_nodes(), 0.0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto nb = g.neighbors(v);
    int d = static_cast<int>(nb.size());
    if (d < 2) continue;
    std::int64_t links = 0;
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j)
        if (g.has_edge(nb[i], nb[j])) ++links;
    c[v] = 2.0 * static_cast<double>(links) / (static_cast<double>(d) * (d - 1));
  }
  return c;
}

std::map<int, double> clustering_by_degree(const Graph& g) {
  auto c = local_clustering(g);
  std::map<int, double> sum;
  std::map<int, std::int64_t> cnt;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    int k = g.degree(v);
    sum[k] += c[v];
    cnt[k] += 1;
  }
  std::map<int, double> out;
  for (auto& [k, s] : sum) out[k] = s / static_cast<double>(cnt[k]);
  return out;
}

std::vector<double> betweenness(const Graph& g) {
  NodeId n = g.num_nodes();
  std::vector<double> bc(n, 0.0);
  std::vector<int> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<NodeId> order;
  order.reserve(n);

  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    std::deque<NodeId> queue{s};
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      order.push_back(u);
      for (NodeId w : g.neighbors(u)) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[u] + 1) sigma[w] += sigma[u];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (NodeId u : g.neighbors(w)) {
        if (dist[u] == dist[w] - 1)
          delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) bc[w] += delta[w];
    }
  }
  // Each unordered pair was counted from both endpoints.
  for (auto& b : bc) b *= 0.5;
  return bc;
}

namespace {

// Logarithmic bin index, 10 bins per decade. Zero maps to a sentinel bin.
constexpr int kZeroBin = std::numeric_limits<int>::min();

int log_bin(double x) {
  if (x <= 0.0) return kZeroBin;
  return static_cast<int>(std::floor(10.0 * std::log10(x)));
}

double bin_midpoint(int bin) {
  if (bin == kZeroBin) return 0.0;
  return std::pow(10.0, (bin + 0.5) / 10.0);
}

}  // namespace

std::map<double, double> neighbor_correlation(const Graph& g, NeighborQuantity q) {
  if (g.num_edges() == 0)
    throw std::invalid_argument("neighbor_correlation: empty edge set");

  std::map<double, double> out;
  if (q == NeighborQuantity::Connectivity) {
    std::map<int, double> sum;
    std::map<int, std::int64_t> cnt;
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      int k = g.degree(u);
      for (NodeId v : g.neighbors(u)) {
        sum[k] += g.degree(v);
        cnt[k] += 1;
      }
    }
    for (auto& [k, s] : sum)
      out[static_cast<double>(k)] = s / static_cast<double>(cnt[k]);
  } else {
    auto b = betweenness(g);
    std::map<int, double> sum;
    std::map<int, std::int64_t> cnt;
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      int bin = log_bin(b[u]);
      for (NodeId v : g.neighbors(u)) {
        sum[bin] += b[v];
        cnt[bin] += 1;
      }
    }
    for (auto& [bin, s] : sum) out[bin_midpoint(bin)] = s / static_cast<double>(cnt[bin]);
  }
  return out;
}

double edge_homophily(const Graph& g) {
  if (!g.fully_labeled() || !g.has_labels())
    throw std::invalid_argument("edge_homophily: requires fully labeled graph");
  if (g.num_edges() == 0)
    throw std::invalid_argument("edge_homophily: empty edge set");
  std::int64_t same = 0;
  for (const auto& [u, v] : g.edges())
    if (g.label(u) == g.label(v)) ++same;
  return static_cast<double>(same) / static_cast<double>(g.num_edges());
}

std::map<int, std::int64_t> degree_histogram(const Graph& g) {
  std::map<int, std::int64_t> h;
  for (NodeId v = 0; v < g.num_nodes(); ++v) ++h[g.degree(v)];
  return h;
}

}  // namespace hierlab
