#include <gtest/gtest.h>

#include "graphfsa/aggregation.hpp"
#include "graphfsa/datasets.hpp"
#include "test_support.hpp"

using namespace graphfsa;

namespace {

Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph(leaves + 1, edges);
}

}  // namespace

TEST(Aggregation, DomainSizes) {
  EXPECT_EQ(domain_size(Counting{1}, 4), 16u);
  EXPECT_EQ(domain_size(Counting{5}, 2), 36u);
  EXPECT_EQ(domain_size(Counting{3}, 4), 256u);
  EXPECT_EQ(domain_size(Positional{2, 0}, 2), 4u);
  EXPECT_EQ(domain_size(Positional{8, 0}, 3), 6561u);
  EXPECT_EQ(domain_size(AvgThreshold{0.5}, 3), 8u);
  EXPECT_THROW(domain_size(Counting{1}, 80), std::overflow_error);
  EXPECT_THROW(domain_size(Counting{1}, 0), std::invalid_argument);
}

TEST(Aggregation, SchemeChecks) {
  EXPECT_FALSE(check_scheme(Counting{0}, 2).empty());
  EXPECT_FALSE(check_scheme(Positional{0, 0}, 2).empty());
  EXPECT_FALSE(check_scheme(Positional{2, 2}, 2).empty());
  EXPECT_FALSE(check_scheme(AvgThreshold{0.0}, 2).empty());
  EXPECT_FALSE(check_scheme(AvgThreshold{1.5}, 2).empty());
  EXPECT_TRUE(check_scheme(AvgThreshold{1.0}, 2).empty());
  EXPECT_THROW(Aggregator(Counting{0}, 2), std::invalid_argument);
}

TEST(Aggregation, CountingCapsAtBound) {
  const Graph g = star(4);
  const StateAssignment states{0, 1, 1, 1, 0};
  EXPECT_EQ(aggregate(Counting{1}, 2, g, 0, states), (AggregationValue{1, 1}));
  EXPECT_EQ(aggregate(Counting{2}, 2, g, 0, states), (AggregationValue{1, 2}));
  EXPECT_EQ(aggregate(Counting{5}, 2, g, 0, states), (AggregationValue{1, 3}));
  EXPECT_EQ(aggregate(Counting{2}, 3, g, 1, states), (AggregationValue{1, 0, 0}));
}

TEST(Aggregation, CountingIgnoresOwnState) {
  const Graph g = star(2);
  EXPECT_EQ(aggregate(Counting{3}, 2, g, 0, StateAssignment{1, 0, 0}), (AggregationValue{2, 0}));
  EXPECT_EQ(aggregate(Counting{3}, 2, g, 0, StateAssignment{0, 0, 0}), (AggregationValue{2, 0}));
}

TEST(Aggregation, PositionalReadsSlotsAndFill) {
  const Graph path = path_graph(3);
  const StateAssignment states{1, 0, 1};
  EXPECT_EQ(aggregate(Positional{2, 0}, 2, path, 1, states), (AggregationValue{1, 1}));
  EXPECT_EQ(aggregate(Positional{2, 0}, 2, path, 0, states), (AggregationValue{0, 0}));
  EXPECT_EQ(aggregate(Positional{2, 1}, 2, path, 0, states), (AggregationValue{1, 0}));
  EXPECT_EQ(aggregate(Positional{2, 1}, 2, path, 2, states), (AggregationValue{0, 1}));
  EXPECT_THROW(aggregate(Positional{2, 0}, 2, star(2), 0, StateAssignment{0, 0, 0}), std::invalid_argument);
  Aggregator agg(Positional{1, 0}, 2);
  EXPECT_THROW(agg.check_graph(path), std::invalid_argument);
  EXPECT_THROW(agg.check_graph(star(2)), std::invalid_argument);
}

TEST(Aggregation, AvgThresholdBits) {
  const Graph g = star(4);
  const StateAssignment states{0, 1, 1, 0, 2};
  // fractions: state0 1/4, state1 2/4, state2 1/4
  EXPECT_EQ(aggregate(AvgThreshold{0.5}, 3, g, 0, states), (AggregationValue{0, 1, 0}));
  EXPECT_EQ(aggregate(AvgThreshold{0.25}, 3, g, 0, states), (AggregationValue{1, 1, 1}));
  EXPECT_EQ(aggregate(AvgThreshold{1.0}, 3, g, 0, states), (AggregationValue{0, 0, 0}));
  EXPECT_EQ(aggregate(AvgThreshold{0.5}, 3, Graph(1, {}), 0, StateAssignment{2}), (AggregationValue{0, 0, 0}));
}

TEST(Aggregation, IndexLayout) {
  // Counting: base b+1, state 0 least significant.
  EXPECT_EQ(to_index(Counting{2}, 3, {1, 2, 0}), 1u + 2u * 3u);
  // Positional: base |M|, slot 0 least significant.
  EXPECT_EQ(to_index(Positional{3, 0}, 2, {1, 0, 1}), 5u);
  // AvgThreshold: bit m weighs 2^m.
  EXPECT_EQ(to_index(AvgThreshold{0.5}, 3, {0, 1, 1}), 6u);
  EXPECT_THROW(to_index(Counting{1}, 2, {2, 0}), std::out_of_range);
  EXPECT_THROW(to_index(Counting{1}, 2, {1}), std::out_of_range);
  EXPECT_THROW(from_index(Counting{1}, 2, 4), std::out_of_range);
}

// Property: from_index and to_index are inverse bijections on [0, |Z|).
TEST(Aggregation, IndexBijection) {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 1 + rng.uniform(4);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    Aggregator agg(scheme, m);
    std::set<AggregationValue> seen;
    for (std::size_t a = 0; a < agg.domain_size(); ++a) {
      const auto value = agg.from_index(a);
      ASSERT_EQ(agg.to_index(value), a);
      ASSERT_TRUE(seen.insert(value).second);
    }
  }
}

// Property: aggregation commutes with node relabeling.
TEST(Aggregation, PermutationEquivariance) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.uniform(3);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const std::size_t n = 1 + rng.uniform(9);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.4, graphfsa::testing::degree_cap(scheme, 5), true);
    const auto states = graphfsa::testing::random_states(rng, n, m);
    const auto perm = graphfsa::testing::random_permutation(rng, n);
    const Graph h = g.permuted(perm);
    StateAssignment moved(n);
    for (NodeId v = 0; v < n; ++v) moved[perm[v]] = states[v];
    Aggregator agg(scheme, m);
    for (NodeId v = 0; v < n; ++v) {
      ASSERT_EQ(agg.aggregate(g, v, states), agg.aggregate(h, perm[v], moved));
      ASSERT_EQ(agg.aggregate_index(g, v, states), agg.to_index(agg.aggregate(g, v, states)));
    }
  }
}

// Oracle: exhaustive enumeration over neighbor states (deg <= 4, |M| <= 3).
TEST(Aggregation, SoftAggregateMatchesEnumeration) {
  Rng rng(21);
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t m = 1 + rng.uniform(3);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const std::size_t n = 1 + rng.uniform(7);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.5, std::min<std::size_t>(4, graphfsa::testing::degree_cap(scheme, 4)), true);
    const auto field = graphfsa::testing::random_field(rng, n, m);
    Aggregator agg(scheme, m);
    for (NodeId v = 0; v < n; ++v) {
      const auto soft = agg.soft_aggregate(g, v, field);
      const auto brute = graphfsa::testing::enumerate_soft_aggregate(agg, g, v, field);
      ASSERT_LE(graphfsa::testing::total_variation(soft, brute), 1e-9) << describe(scheme) << " node " << v;
    }
  }
}

TEST(Aggregation, SoftAggregateOfOneHotIsDelta) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.uniform(4);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const std::size_t n = 1 + rng.uniform(8);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.5, graphfsa::testing::degree_cap(scheme, 6), true);
    const auto states = graphfsa::testing::random_states(rng, n, m);
    const auto field = SoftStateField::one_hot(states, m);
    Aggregator agg(scheme, m);
    for (NodeId v = 0; v < n; ++v) {
      const auto soft = agg.soft_aggregate(g, v, field);
      const auto hard = agg.aggregate_index(g, v, states);
      for (std::size_t a = 0; a < soft.size(); ++a) ASSERT_EQ(soft[a], a == hard ? 1.0 : 0.0);
    }
  }
}

// Oracle: central finite differences of <w, soft_aggregate(field)>.
TEST(Aggregation, SoftAggregateBackwardMatchesFiniteDifferences) {
  Rng rng(9);
  const double eps = 1e-6;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t m = 1 + rng.uniform(3);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const std::size_t n = 2 + rng.uniform(5);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.6, graphfsa::testing::degree_cap(scheme, 4), true);
    auto field = graphfsa::testing::random_field(rng, n, m);
    Aggregator agg(scheme, m);
    const NodeId v = static_cast<NodeId>(rng.uniform(n));
    std::vector<double> w(agg.domain_size());
    for (auto& x : w) x = rng.normal(0.0, 1.0);
    SoftStateField grad(n, m);
    agg.soft_aggregate_backward(g, v, field, w, grad);
    auto objective = [&] {
      const auto q = agg.soft_aggregate(g, v, field);
      double s = 0.0;
      for (std::size_t a = 0; a < q.size(); ++a) s += w[a] * q[a];
      return s;
    };
    for (std::size_t i = 0; i < field.data().size(); ++i) {
      const double keep = field.data()[i];
      field.data()[i] = keep + eps;
      const double up = objective();
      field.data()[i] = keep - eps;
      const double down = objective();
      field.data()[i] = keep;
      ASSERT_NEAR(grad.data()[i], (up - down) / (2 * eps), 1e-6) << describe(scheme);
    }
  }
}

TEST(Aggregation, SoftFieldArgmaxTiesTowardSmallest) {
  SoftStateField f(2, 3);
  f.row(0)[1] = f.row(0)[2] = 0.5;
  f.row(1)[0] = 0.2;
  f.row(1)[2] = 0.8;
  EXPECT_EQ(f.argmax(), (StateAssignment{1, 2}));
  EXPECT_THROW(SoftStateField::one_hot(StateAssignment{3}, 3), std::invalid_argument);
}
