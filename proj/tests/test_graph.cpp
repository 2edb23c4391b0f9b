#include <stdexcept>
#include <random>

#include "doctest.h"
#include "hierlab/graph.hpp"
#include "oracles.hpp"

using namespace hierlab;

namespace {

Graph path3() { return Graph(3, {{0, 1}, {1, 2}}); }

Graph star(int leaves) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph(leaves + 1, std::move(edges));
}

Graph complete(int n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

}  // namespace

TEST_CASE("degree basics") {
  Graph isolated(1, {});
  CHECK(isolated.degree(0) == 0);
  CHECK(star(5).degree(0) == 5);
  CHECK(complete(3).degree(0) == 2);
  CHECK_THROWS_AS(star(5).degree(7), std::out_of_range);
}

TEST_CASE("construction normalizes and validates") {
  // Duplicates (including reversed) collapse; adjacency stays symmetric.
  Graph g(4, {{1, 0}, {0, 1}, {2, 3}, {3, 2}, {1, 2}});
  CHECK(g.num_edges() == 3);
  for (NodeId u = 0; u < 4; ++u)
    for (NodeId v : g.neighbors(u)) CHECK(g.has_edge(v, u));

  CHECK_THROWS_AS(Graph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(2, {{0, 1}}, {0, 3}, {}, 2), std::invalid_argument);
}

TEST_CASE("degree sum equals twice the edge count") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = oracles::random_graph(2 + int(rng() % 20), 0.3, rng);
    std::int64_t total = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) total += g.degree(v);
    CHECK(total == 2 * g.num_edges());
  }
}

TEST_CASE("bfs hop distances") {
  auto g = path3();
  auto d = shortest_path_lengths(g, 0);
  CHECK(d[0] == 0);
  CHECK(d[1] == 1);
  CHECK(d[2] == 2);

  Graph two_parts(4, {{0, 1}, {2, 3}});
  auto d2 = shortest_path_lengths(two_parts, 0);
  CHECK(d2[2] == kUnreachableHops);

  auto capped = shortest_path_lengths(g, 0, 1);
  CHECK(capped[1] == 1);
  CHECK(capped[2] == kUnreachableHops);

  CHECK_THROWS_AS(shortest_path_lengths(g, 9), std::out_of_range);
}

TEST_CASE("split mask validation") {
  SplitMask m;
  m.train = {0, 1};
  m.val = {2};
  m.test = {3, 4};
  CHECK_NOTHROW(m.validate(5));
  CHECK(m.in_train(1));
  CHECK(!m.in_train(2));

  SplitMask overlap;
  overlap.train = {0};
  overlap.val = {0};
  CHECK_THROWS_AS(overlap.validate(3), std::invalid_argument);
}

TEST_CASE("visible labels expose only the train set") {
  Graph g(3, {{0, 1}, {1, 2}}, {0, 1, 0}, {}, 2);
  SplitMask m;
  m.train = {1};
  auto vis = visible_labels(g, m);
  CHECK(vis[0] == -1);
  CHECK(vis[1] == 1);
  CHECK(vis[2] == -1);
}
