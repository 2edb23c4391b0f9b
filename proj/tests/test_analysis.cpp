#include <stdexcept>
#include <random>

#include "doctest.h"
#include "hierlab/analysis.hpp"
#include "hierlab/generate.hpp"
#include "hierlab/stats.hpp"
#include "oracles.hpp"

using namespace hierlab;

namespace {

Graph complete(int n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

}  // namespace

TEST_CASE("clustering by degree on small graphs") {
  auto ck4 = clustering_by_degree(complete(4));
  CHECK(ck4.at(3) == doctest::Approx(1.0));

  Graph p3(3, {{0, 1}, {1, 2}});
  auto ckp = clustering_by_degree(p3);
  CHECK(ckp.at(2) == doctest::Approx(0.0));
  CHECK(ckp.at(1) == doctest::Approx(0.0));
}

TEST_CASE("hnm clustering decays like 1/k") {
  auto hnm = hnm_generate(4, 5);
  CHECK(hnm.graph.num_nodes() == 1024);
  auto ck = clustering_by_degree(hnm.graph);
  std::vector<double> ks, cs;
  for (auto& [k, c] : ck)
    if (k >= 2 && c > 0.0) {
      ks.push_back(k);
      cs.push_back(c);
    }
  double slope = stats::loglog_slope(ks, cs);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("betweenness matches hand values") {
  Graph star5(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto b = betweenness(star5);
  CHECK(b[0] == doctest::Approx(6.0));  // all 6 leaf pairs route via the hub
  CHECK(b[1] == doctest::Approx(0.0));

  auto bk = betweenness(complete(5));
  for (double x : bk) CHECK(x == doctest::Approx(0.0));

  Graph p3(3, {{0, 1}, {1, 2}});
  CHECK(betweenness(p3)[1] == doctest::Approx(1.0));
}

TEST_CASE("betweenness equals brute-force path enumeration") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 3 + static_cast<int>(rng() % 7);  // n <= 9
    auto g = oracles::random_graph(n, 0.4, rng);
    auto fast = betweenness(g);
    auto brute = oracles::brute_betweenness(g);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      CHECK(fast[v] == doctest::Approx(brute[v]).epsilon(1e-9));
  }
}

TEST_CASE("neighbor connectivity correlation") {
  Graph star(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  auto knn = neighbor_correlation(star, NeighborQuantity::Connectivity);
  CHECK(knn.at(1.0) == doctest::Approx(5.0));
  CHECK(knn.at(5.0) == doctest::Approx(1.0));

  auto ring = Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  auto knn_ring = neighbor_correlation(ring, NeighborQuantity::Connectivity);
  CHECK(knn_ring.at(2.0) == doctest::Approx(2.0));  // 2-regular

  CHECK_THROWS_AS(neighbor_correlation(Graph(3, {}), NeighborQuantity::Connectivity),
                  std::invalid_argument);
}

TEST_CASE("hnm neighbor connectivity is disassortative") {
  auto hnm = hnm_generate(4, 5);
  auto knn = neighbor_correlation(hnm.graph, NeighborQuantity::Connectivity);
  std::vector<double> ks, vs;
  for (auto& [k, v] : knn) {
    ks.push_back(k);
    vs.push_back(v);
  }
  CHECK(stats::spearman(ks, vs) < 0.0);
}

TEST_CASE("betweenness correlation uses log bins") {
  auto hnm = hnm_generate(4, 3);
  auto bnn = neighbor_correlation(hnm.graph, NeighborQuantity::Betweenness);
  CHECK(!bnn.empty());
  for (auto& [key, v] : bnn) {
    CHECK(key >= 0.0);
    CHECK(v >= 0.0);
  }
}

TEST_CASE("edge homophily") {
  Graph same(3, {{0, 1}, {1, 2}}, {1, 1, 1}, {}, 2);
  CHECK(edge_homophily(same) == doctest::Approx(1.0));

  Graph bipartite(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, {0, 0, 1, 1}, {}, 2);
  CHECK(edge_homophily(bipartite) == doctest::Approx(0.0));

  Graph partial(2, {{0, 1}}, {0, -1}, {}, 2);
  CHECK_THROWS_AS(edge_homophily(partial), std::invalid_argument);
}

TEST_CASE("homophily is invariant under label permutation") {
  std::mt19937_64 rng(5);
  auto g = oracles::random_graph(12, 0.3, rng);
  std::vector<std::int32_t> labels(12);
  for (auto& y : labels) y = static_cast<std::int32_t>(rng() % 3);
  Graph a(12, g.edges(), labels, {}, 3);
  std::vector<std::int32_t> perm = {2, 0, 1};
  std::vector<std::int32_t> relabeled(12);
  for (int v = 0; v < 12; ++v) relabeled[v] = perm[labels[v]];
  Graph b(12, g.edges(), relabeled, {}, 3);
  if (a.num_edges() > 0)
    CHECK(edge_homophily(a) == doctest::Approx(edge_homophily(b)));
}
