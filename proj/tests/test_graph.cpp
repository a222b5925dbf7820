#include <gtest/gtest.h>

#include <climits>

#include "graphfsa/graph.hpp"
#include "test_support.hpp"

using namespace graphfsa;

TEST(Graph, RejectsMalformedEdges) {
  EXPECT_THROW(Graph(3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {{0, 1}, {0, 2}}, std::vector<PortPair>{{0, 0}, {0, 1}}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {{0, 1}}, std::vector<PortPair>{}), std::invalid_argument);
}

TEST(Graph, NeighborsFollowInsertionOrder) {
  Graph g(4, {{2, 0}, {0, 1}, {3, 0}}, std::vector<PortPair>{{0, 2}, {1, 0}, {0, 0}});
  ASSERT_EQ(g.degree(0), 3u);
  const auto nbs = g.neighbors(0);
  EXPECT_EQ(nbs[0].node, 2u);
  EXPECT_EQ(nbs[0].slot, 2);
  EXPECT_EQ(nbs[1].node, 1u);
  EXPECT_EQ(nbs[1].slot, 1);
  EXPECT_EQ(nbs[2].node, 3u);
  EXPECT_EQ(nbs[2].slot, 0);
  EXPECT_EQ(g.neighbors(3)[0].slot, 0);
  EXPECT_EQ(g.slot_span(), 3u);
  EXPECT_EQ(g.max_degree(), 3u);
}

TEST(Graph, UnportedSlotsAreNoSlot) {
  Graph g(2, {{0, 1}});
  EXPECT_FALSE(g.has_ports());
  EXPECT_EQ(g.neighbors(0)[0].slot, kNoSlot);
  EXPECT_EQ(g.slot_span(), 0u);
}

TEST(Graph, NeedsAtLeastOneNode) {
  EXPECT_THROW(Graph(0, {}), std::invalid_argument);
  Graph single(1, {});
  EXPECT_TRUE(is_connected(single));
  EXPECT_EQ(diameter(single), 0);
}

// Floyd-Warshall as an independent distance oracle.
TEST(Graph, BfsMatchesFloydWarshall) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform(12);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.3, n, false);
    std::vector<std::vector<int>> d(n, std::vector<int>(n, INT_MAX / 4));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    bool connected = true;
    int diam = 0;
    for (NodeId s = 0; s < n; ++s) {
      const auto bfs = bfs_distances(g, s);
      for (std::size_t t = 0; t < n; ++t) {
        const int expected = d[s][t] >= INT_MAX / 4 ? -1 : d[s][t];
        ASSERT_EQ(bfs[t], expected);
        if (expected < 0) connected = false;
        diam = std::max(diam, expected);
      }
    }
    ASSERT_EQ(is_connected(g), connected);
    if (connected) ASSERT_EQ(diameter(g), diam);
  }
}

TEST(Graph, DiameterRequiresConnected) {
  EXPECT_THROW(diameter(Graph(3, {{0, 1}})), std::invalid_argument);
}

TEST(Graph, PermutationPreservesStructure) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform(10);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.4, 4, true);
    const auto perm = graphfsa::testing::random_permutation(rng, n);
    const Graph h = g.permuted(perm);
    ASSERT_EQ(h.num_edges(), g.num_edges());
    for (NodeId v = 0; v < n; ++v) {
      ASSERT_EQ(h.degree(perm[v]), g.degree(v));
      const auto dg = bfs_distances(g, v);
      const auto dh = bfs_distances(h, perm[v]);
      for (NodeId u = 0; u < n; ++u) ASSERT_EQ(dh[perm[u]], dg[u]);
      std::multiset<std::pair<NodeId, std::int32_t>> a, b;
      for (const auto& nb : g.neighbors(v)) a.insert({perm[nb.node], nb.slot});
      for (const auto& nb : h.neighbors(perm[v])) b.insert({nb.node, nb.slot});
      ASSERT_EQ(a, b);
    }
  }
}

TEST(Graph, PermutationMustBeBijection) {
  Graph g(3, {});
  const std::vector<NodeId> bad{0, 0, 1};
  EXPECT_THROW(g.permuted(bad), std::invalid_argument);
}
