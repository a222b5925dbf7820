#include <gtest/gtest.h>

#include <sstream>

#include "graphfsa/eval.hpp"
#include "test_support.hpp"

using namespace graphfsa;

TEST(Eval, NodeAccuracy) {
  EXPECT_DOUBLE_EQ(node_accuracy({0, 1, 2, 3}, {0, 1, 0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(node_accuracy({1}, {1}), 1.0);
  EXPECT_THROW(node_accuracy({0, 1}, {0}), std::invalid_argument);
}

TEST(Eval, MeanStdIsPopulationStd) {
  const auto [mean, sd] = mean_std({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(mean, 2.5);
  EXPECT_NEAR(sd, std::sqrt(1.25), 1e-12);
  const auto [m1, s1] = mean_std({0.7});
  EXPECT_DOUBLE_EQ(m1, 0.7);
  EXPECT_DOUBLE_EQ(s1, 0.0);
}

TEST(Eval, GroundTruthScoresPerfectly) {
  GrabSpec spec;
  spec.examples_per_size = 10;
  spec.extra_sizes = {10, 20};
  spec.seed = 3;
  const auto data = make_grab_dataset(spec);
  const auto row = evaluate(data.fsa, data.validation);
  EXPECT_DOUBLE_EQ(row.mean_acc, 1.0);
  EXPECT_DOUBLE_EQ(row.std_acc, 0.0);
  EXPECT_EQ(row.n_examples, data.validation.size());
  const auto report = evaluate_splits(data.fsa, data.extrapolation);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].key, 10u);
  EXPECT_EQ(report.rows[1].key, 20u);
  for (const auto& r : report.rows) EXPECT_DOUBLE_EQ(r.mean_acc, 1.0);
}

TEST(Eval, IdentityScoresLikeUnchangedNodes) {
  const auto task = parse_ca_task("ca1d:204");
  const auto fsa = ca_rule_fsa(30);
  const auto data = ca_dataset(task, 1, 8, 1, 20, 5);
  const auto row = evaluate(identity_fsa(2, Positional{2, 0}), data);
  EXPECT_DOUBLE_EQ(row.mean_acc, 1.0);
  EXPECT_LT(evaluate(fsa, data).mean_acc, 1.0);
}

TEST(Eval, SweepUsesRequestedSteps) {
  const auto task = parse_ca_task("wireworld");
  const auto report = iteration_stability_sweep(wireworld_fsa(), task, 6, 6, {1, 3, 9}, 5, 2);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.key_name, "t");
  EXPECT_EQ(report.rows[2].key, 9u);
  for (const auto& r : report.rows) {
    EXPECT_DOUBLE_EQ(r.mean_acc, 1.0);
    EXPECT_EQ(r.n_examples, 5u);
  }
  EXPECT_LT(iteration_stability_sweep(identity_fsa(4, Counting{3}), task, 6, 6, {4}, 5, 2).rows[0].mean_acc, 1.0);
  EXPECT_THROW(iteration_stability_sweep(wireworld_fsa(), task, 6, 6, {}, 5, 2), std::invalid_argument);
}

TEST(Eval, CsvLayout) {
  EvalReport report;
  report.key_name = "size";
  report.rows.push_back({10, 1.0, 0.0, 3});
  std::ostringstream os;
  report.write_csv(os);
  EXPECT_EQ(os.str(), "size,mean_acc,std_acc,n_examples\n10,1.000000,0.000000,3\n");
}

TEST(Refinement, Canonicalize) {
  EXPECT_EQ(canonicalize({7, 3, 7, 9, 3}), (Partition{0, 1, 0, 2, 1}));
  EXPECT_EQ(class_count(Partition{0, 1, 0, 2}), 3u);
  EXPECT_EQ(class_count(Partition{}), 0u);
}

TEST(Refinement, PartitionRefines) {
  EXPECT_TRUE(partition_refines({0, 1, 2}, {0, 0, 1}));
  EXPECT_FALSE(partition_refines({0, 0, 1}, {0, 1, 1}));
  EXPECT_TRUE(partition_refines({0, 0, 1}, {0, 0, 0}));
  EXPECT_THROW(partition_refines({0}, {0, 0}), std::invalid_argument);
}

TEST(Refinement, PortsLetPositionalSplitWhatWlCannot) {
  // Both ends of a single edge look alike to 1-WL but sit on different slots.
  const Graph g(2, {{0, 1}}, std::vector<PortPair>{{0, 1}});
  EXPECT_EQ(class_count(wl_refinement(g, 2)), 1u);
  EXPECT_EQ(class_count(bounded_refinement(g, Positional{2, 0}, 2)), 2u);
}

TEST(Refinement, HubsSeparatedOnlyByWl) {
  const Graph g = two_vs_three_hub_graph();
  const auto wl = wl_refinement(g, 3);
  const auto bounded = bounded_refinement(g, Counting{2}, 3);
  EXPECT_NE(wl[0], wl[1]);
  EXPECT_EQ(bounded[0], bounded[1]);
  EXPECT_TRUE(partition_refines(wl, bounded));
  // A larger bound sees the difference.
  const auto wider = bounded_refinement(g, Counting{3}, 3);
  EXPECT_NE(wider[0], wider[1]);
}

TEST(Refinement, WlOnPathSplitsByDistanceFromEnd) {
  const auto colors = wl_refinement(path_graph(5), 4);
  EXPECT_EQ(colors, canonicalize({0, 1, 2, 1, 0}));
}

// Property: 1-WL refines every bounded refinement with the same rounds.
// Positional schemes read port numbers, which 1-WL does not see.
TEST(Refinement, WlDominatesBoundedOnRandomGraphs) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform(12);
    const auto scheme = graphfsa::testing::random_scheme(rng, 3, trial % 2 ? 2 : 0);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.3, n, false);
    const std::size_t k = rng.uniform(6);
    const auto wl = wl_refinement(g, k);
    const auto bounded = bounded_refinement(g, scheme, k);
    ASSERT_TRUE(partition_refines(wl, bounded)) << describe(scheme) << " k=" << k;
  }
}

// Property: more rounds never merge classes.
TEST(Refinement, RoundsOnlyRefine) {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform(12);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.3, n, false);
    for (std::size_t k = 0; k < 4; ++k) {
      ASSERT_TRUE(partition_refines(wl_refinement(g, k + 1), wl_refinement(g, k)));
      ASSERT_TRUE(partition_refines(bounded_refinement(g, Counting{1}, k + 1), bounded_refinement(g, Counting{1}, k)));
    }
  }
}
