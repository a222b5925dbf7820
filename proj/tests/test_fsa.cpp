#include <gtest/gtest.h>

#include "graphfsa/datasets.hpp"
#include "graphfsa/fsa.hpp"
#include "test_support.hpp"

using namespace graphfsa;

TEST(Fsa, IdentityKeepsEveryState) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng.uniform(4);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const auto fsa = identity_fsa(m, scheme);
    const std::size_t n = 1 + rng.uniform(8);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.5, graphfsa::testing::degree_cap(scheme, 6), true);
    const auto states = graphfsa::testing::random_states(rng, n, m);
    EXPECT_EQ(run(fsa, g, states, 7).states, states);
    EXPECT_TRUE(validate(fsa).empty());
  }
}

TEST(Fsa, ZeroStepsEchoesInput) {
  const auto fsa = ca_rule_fsa(30);
  const StateAssignment in{1, 0, 1, 1};
  const auto result = run(fsa, path_graph(4), in, 0, true);
  EXPECT_EQ(result.states, in);
  ASSERT_TRUE(result.trace.has_value());
  EXPECT_EQ(result.trace->num_steps, 0u);
  EXPECT_TRUE(result.trace->entries.empty());
}

TEST(Fsa, StepRejectsBadInputs) {
  const auto fsa = ca_rule_fsa(30);
  EXPECT_THROW(step(fsa, path_graph(4), StateAssignment{0, 1}), std::invalid_argument);
  EXPECT_THROW(step(fsa, path_graph(2), StateAssignment{0, 2}), std::invalid_argument);
  EXPECT_THROW(step(fsa, Graph(2, {{0, 1}}), StateAssignment{0, 1}), std::invalid_argument);
  auto broken = fsa;
  broken.table.pop_back();
  EXPECT_THROW(step(broken, path_graph(2), StateAssignment{0, 1}), std::invalid_argument);
}

TEST(Fsa, ValidateReportsViolations) {
  auto fsa = identity_fsa(3, Counting{1}, {2}, {0});
  EXPECT_TRUE(validate(fsa).empty());
  fsa.table[9] = 7;
  auto problems = validate(fsa);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_EQ(problems[0], "state out of range at table index 9");
  fsa = identity_fsa(3, Counting{1}, {2}, {0});
  fsa.table[1] = 2;
  problems = validate(fsa);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_NE(problems[0].find("final not absorbing"), std::string::npos);
  fsa = identity_fsa(3, Counting{1}, {5}, {});
  EXPECT_FALSE(validate(fsa).empty());
}

// Property: run(t1 + t2) == run(t2, run(t1)).
TEST(Fsa, CompositionLaw) {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.uniform(4);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    std::vector<StateId> finals;
    if (m > 1 && rng.bernoulli(0.5)) finals.push_back(0);
    const auto fsa = graphfsa::testing::random_table_fsa(rng, m, scheme, finals);
    const std::size_t n = 1 + rng.uniform(10);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.4, graphfsa::testing::degree_cap(scheme, 6), true);
    const auto states = graphfsa::testing::random_states(rng, n, m);
    const std::size_t t1 = rng.uniform(6), t2 = rng.uniform(6);
    const auto direct = run(fsa, g, states, t1 + t2).states;
    const auto split = run(fsa, g, run(fsa, g, states, t1).states, t2).states;
    ASSERT_EQ(direct, split);
  }
}

// Property: relabeling nodes relabels the outcome.
TEST(Fsa, PermutationEquivariance) {
  Rng rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.uniform(3);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const auto fsa = graphfsa::testing::random_table_fsa(rng, m, scheme);
    const std::size_t n = 1 + rng.uniform(10);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.4, graphfsa::testing::degree_cap(scheme, 6), true);
    const auto states = graphfsa::testing::random_states(rng, n, m);
    const auto perm = graphfsa::testing::random_permutation(rng, n);
    StateAssignment moved(n);
    for (NodeId v = 0; v < n; ++v) moved[perm[v]] = states[v];
    const auto a = run(fsa, g, states, 4).states;
    const auto b = run(fsa, g.permuted(perm), moved, 4).states;
    for (NodeId v = 0; v < n; ++v) ASSERT_EQ(b[perm[v]], a[v]);
  }
}

// Property: once final, always final and unchanged.
TEST(Fsa, FinalStatesAbsorb) {
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.uniform(3);
    const auto fsa = graphfsa::testing::random_table_fsa(rng, m, Counting{1}, {0});
    const std::size_t n = 1 + rng.uniform(10);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.4, n, false);
    auto states = graphfsa::testing::random_states(rng, n, m);
    for (int t = 0; t < 6; ++t) {
      const auto next = step(fsa, g, states);
      for (NodeId v = 0; v < n; ++v) {
        if (states[v] == 0) ASSERT_EQ(next[v], 0u);
      }
      states = next;
    }
  }
}

TEST(Fsa, TraceRecordsEveryTransition) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + rng.uniform(3);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const auto fsa = graphfsa::testing::random_table_fsa(rng, m, scheme);
    const std::size_t n = 1 + rng.uniform(8);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.4, graphfsa::testing::degree_cap(scheme, 6), true);
    auto states = graphfsa::testing::random_states(rng, n, m);
    const std::size_t t = rng.uniform(5);
    const auto result = run(fsa, g, states, t, true);
    ASSERT_EQ(result.trace->entries.size(), n * t);
    Aggregator agg(scheme, m);
    for (std::size_t k = 0; k < t; ++k) {
      for (NodeId v = 0; v < n; ++v) {
        const auto& e = result.trace->at(k, v);
        ASSERT_EQ(e.state, states[v]);
        ASSERT_EQ(e.agg_index, agg.aggregate_index(g, v, states));
        ASSERT_EQ(e.next, fsa.next(e.state, e.agg_index));
      }
      states = step(fsa, g, states);
    }
    ASSERT_EQ(states, result.states);
  }
}
