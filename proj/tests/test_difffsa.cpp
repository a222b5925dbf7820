#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "graphfsa/datasets.hpp"
#include "graphfsa/difffsa.hpp"
#include "test_support.hpp"

using namespace graphfsa;

namespace {

SoftTransitionModel random_model(Rng& rng, std::size_t m, const AggregationScheme& scheme,
                                 std::vector<StateId> finals = {}) {
  std::vector<StateId> starting;
  for (StateId s = 0; s < m; ++s) starting.push_back(s);
  SoftTransitionModel model(m, scheme, starting, std::move(finals));
  for (auto& w : model.logits()) w = rng.normal(0.0, 1.0);
  return model;
}

// Oracle for one soft step: sum over every joint assignment of node states.
SoftStateField enumerate_soft_step(const SoftTransitionModel& model, const Graph& g,
                                   const SoftStateField& field) {
  const std::size_t n = g.num_nodes();
  const std::size_t m = model.num_states();
  const auto probs = model.probabilities();
  SoftStateField out(n, m);
  StateAssignment states(n, 0);
  while (true) {
    double p = 1.0;
    for (NodeId v = 0; v < n; ++v) p *= field.row(v)[states[v]];
    for (NodeId v = 0; v < n; ++v) {
      const std::size_t a = model.aggregator().aggregate_index(g, v, states);
      const std::size_t off = model.row_offset(states[v], a);
      for (std::size_t m2 = 0; m2 < m; ++m2) out.row(v)[m2] += p * probs[off + m2];
    }
    std::size_t i = 0;
    while (i < n && ++states[i] == m) states[i++] = 0;
    if (i == n) break;
  }
  return out;
}

Example random_example(Rng& rng, const AggregationScheme& scheme, std::size_t m) {
  const std::size_t n = 2 + rng.uniform(4);
  Graph g = graphfsa::testing::random_graph(rng, n, 0.6, graphfsa::testing::degree_cap(scheme, 4), true);
  const auto inputs = graphfsa::testing::random_states(rng, n, m);
  const auto targets = graphfsa::testing::random_states(rng, n, m);
  return Example{std::move(g), inputs, targets, static_cast<std::uint32_t>(1 + rng.uniform(3))};
}

}  // namespace

TEST(DiffFsa, SoftStepMatchesEnumeration) {
  Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t m = 1 + rng.uniform(3);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const auto model = random_model(rng, m, scheme);
    const std::size_t n = 1 + rng.uniform(4);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.6, graphfsa::testing::degree_cap(scheme, 3), true);
    const auto field = graphfsa::testing::random_field(rng, n, m);
    const auto fast = soft_step(model, g, field);
    const auto slow = enumerate_soft_step(model, g, field);
    for (std::size_t i = 0; i < fast.data().size(); ++i) {
      ASSERT_NEAR(fast.data()[i], slow.data()[i], 1e-10) << describe(scheme);
    }
  }
}

TEST(DiffFsa, DeltaModelReproducesDiscreteRun) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.uniform(4);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const auto fsa = graphfsa::testing::random_table_fsa(rng, m, scheme);
    const auto model = SoftTransitionModel::from_fsa(fsa);
    const std::size_t n = 1 + rng.uniform(10);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.4, graphfsa::testing::degree_cap(scheme, 6), true);
    const auto states = graphfsa::testing::random_states(rng, n, m);
    const std::size_t t = rng.uniform(6);
    const auto soft = rollout(model, g, states, t);
    const auto hard = run(fsa, g, states, t).states;
    ASSERT_EQ(soft.data(), SoftStateField::one_hot(hard, m).data());
  }
}

TEST(DiffFsa, SoftStepPreservesMass) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.uniform(3);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    const auto model = random_model(rng, m, scheme);
    const std::size_t n = 1 + rng.uniform(8);
    const Graph g = graphfsa::testing::random_graph(rng, n, 0.5, graphfsa::testing::degree_cap(scheme, 5), true);
    const auto out = soft_step(model, g, graphfsa::testing::random_field(rng, n, m));
    for (NodeId v = 0; v < n; ++v) {
      double total = 0.0;
      for (double x : out.row(v)) {
        ASSERT_GE(x, 0.0);
        total += x;
      }
      ASSERT_NEAR(total, 1.0, 1e-12);
    }
  }
}

// Oracle: central finite differences on the logits.
TEST(DiffFsa, GradientMatchesFiniteDifferences) {
  Rng rng(11);
  const double eps = 1e-5;
  for (int trial = 0; trial < 45; ++trial) {
    const std::size_t m = 2 + rng.uniform(2);
    const auto scheme = graphfsa::testing::random_scheme(rng, m, trial % 3);
    std::vector<StateId> finals;
    if (rng.bernoulli(0.5)) finals.push_back(0);
    auto model = random_model(rng, m, scheme, finals);
    Dataset batch;
    for (int i = 0; i < 2; ++i) batch.push_back(random_example(rng, scheme, m));
    const double lambda = finals.empty() ? 0.0 : 0.3;
    const auto lg = loss_and_grad(model, batch, lambda);
    auto& w = model.logits();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double keep = w[i];
      w[i] = keep + eps;
      const double up = loss_and_grad(model, batch, lambda).loss;
      w[i] = keep - eps;
      const double down = loss_and_grad(model, batch, lambda).loss;
      w[i] = keep;
      const double fd = (up - down) / (2 * eps);
      ASSERT_LE(std::abs(lg.grad[i] - fd), 1e-4 * std::max(std::abs(fd), std::abs(lg.grad[i])) + 1e-9)
          << describe(scheme) << " logit " << i;
    }
  }
}

TEST(DiffFsa, LossMatchesRolloutLoss) {
  Rng rng(12);
  const auto scheme = Counting{2};
  auto model = random_model(rng, 3, scheme, {0});
  const auto ex = random_example(rng, scheme, 3);
  const Dataset batch{ex};
  const auto field = rollout(model, ex.graph, ex.inputs, ex.steps);
  EXPECT_NEAR(loss_and_grad(model, batch, 0.5).loss, loss(model, field, ex.targets, 0.5), 1e-12);
}

TEST(DiffFsa, PenaltyVanishesForAbsorbingRows) {
  const auto fsa = identity_fsa(4, Counting{1}, {2, 3}, {0, 1});
  const auto model = SoftTransitionModel::from_fsa(fsa);
  EXPECT_EQ(final_leave_mass(model), 0.0);
  SoftTransitionModel flat(4, Counting{1}, {2, 3}, {0, 1});
  // Uniform rows leave with probability 3/4, for 2 final states x 16 indices.
  EXPECT_NEAR(final_leave_mass(flat), 2 * 16 * 0.75, 1e-12);
  EXPECT_NEAR(final_state_penalty(flat, flat.probabilities(), 0.1), 0.1 * 24, 1e-12);
}

TEST(DiffFsa, ExtractBreaksTiesTowardSmallestState) {
  SoftTransitionModel model(3, Counting{1}, {1, 2}, {0});
  auto& w = model.logits();
  // row (m1=1, a=0): states 1 and 2 tie
  const std::size_t off = model.row_offset(1, 0);
  w[off + 1] = w[off + 2] = 2.0;
  const auto fsa = extract(model, true);
  EXPECT_EQ(fsa.next(1, 0), 1u);
  EXPECT_EQ(fsa.next(2, 3), 0u);  // all zero logits
  for (std::size_t a = 0; a < fsa.domain_size(); ++a) EXPECT_EQ(fsa.next(0, a), 0u);
  EXPECT_TRUE(validate(fsa).empty());

  const std::size_t fin = model.row_offset(0, 1);
  w[fin + 2] = 5.0;
  EXPECT_EQ(extract(model, false).next(0, 1), 2u);
  EXPECT_EQ(extract(model, true).next(0, 1), 0u);
}

TEST(DiffFsa, ExtractInvertsFromFsa) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + rng.uniform(3);
    const auto fsa = graphfsa::testing::random_table_fsa(rng, m, graphfsa::testing::random_scheme(rng, m, trial % 3), {0});
    EXPECT_EQ(extract(SoftTransitionModel::from_fsa(fsa)), fsa);
  }
}

TEST(DiffFsa, ConfigChecks) {
  EXPECT_TRUE(check_config(TrainConfig{}).empty());
  TrainConfig bad;
  bad.learning_rate = 0.0;
  bad.epochs = 0;
  bad.batch_size = 0;
  bad.final_state_penalty = -1.0;
  bad.beta1 = 1.0;
  EXPECT_EQ(check_config(bad).size(), 5u);
  bad = TrainConfig{};
  bad.learning_rate = std::nan("");
  EXPECT_EQ(check_config(bad).size(), 1u);

  const Dataset data = ca_dataset(parse_ca_task("ca1d:30"), 1, 4, 1, 4, 0);
  const ModelSetup setup{2, Positional{2, 0}, {0, 1}, {}};
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_THROW(train(data, setup, cfg), std::invalid_argument);
  EXPECT_THROW(train(Dataset{}, setup, TrainConfig{}), std::invalid_argument);
  EXPECT_THROW(train(data, ModelSetup{2, Positional{1, 0}, {0, 1}, {}}, TrainConfig{}), std::invalid_argument);
  EXPECT_THROW(SoftTransitionModel(2, Counting{1}, {2}, {}), std::invalid_argument);
}

TEST(DiffFsa, ModelStateCountMustCoverData) {
  Dataset data = ca_dataset(parse_ca_task("ca1d:30"), 1, 4, 1, 4, 0);
  data[0].targets[0] = 5;
  TrainConfig cfg;
  cfg.epochs = 1;
  EXPECT_THROW(train(data, ModelSetup{2, Positional{2, 0}, {0, 1}, {}}, cfg), std::invalid_argument);
}

TEST(DiffFsa, TrainingIsDeterministic) {
  const Dataset data = ca_dataset(parse_ca_task("ca1d:110"), 1, 4, 1, 64, 3);
  const ModelSetup setup{2, Positional{2, 0}, {0, 1}, {}};
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 9;
  const auto a = train(data, setup, cfg);
  const auto b = train(data, setup, cfg);
  EXPECT_EQ(a.model.logits(), b.model.logits());
  EXPECT_EQ(a.history, b.history);
  cfg.seed = 10;
  EXPECT_NE(train(data, setup, cfg).model.logits(), a.model.logits());
}

TEST(DiffFsa, LearnsRule30) {
  const auto task = parse_ca_task("ca1d:30");
  const Dataset data = ca_dataset(task, 1, 4, 1, 300, 1);
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.seed = 1;
  const auto result = train(data, ModelSetup{2, Positional{2, 0}, {0, 1}, {}}, cfg);
  EXPECT_LT(result.history.back(), result.history.front());
  EXPECT_EQ(extract(result.model).table, ca_rule_fsa(30).table);
}

TEST(DiffFsa, SgdAlsoDescends) {
  const Dataset data = ca_dataset(parse_ca_task("ca1d:90"), 1, 4, 1, 64, 2);
  TrainConfig cfg;
  cfg.optimizer = OptimizerKind::sgd;
  cfg.learning_rate = 1.0;
  cfg.epochs = 30;
  const auto result = train(data, ModelSetup{2, Positional{2, 0}, {0, 1}, {}}, cfg);
  EXPECT_LT(result.history.back(), result.history.front());
}

// Property: a larger final-state penalty never leaves more mass on exits
// from final states (checked on a task that has final states).
TEST(DiffFsa, PenaltyReducesFinalLeaveMass) {
  const auto splits = algorithm_dataset(AlgorithmTask::distance, {4, 5, 6}, 12, 4);
  const Dataset data = flatten(splits);
  const auto states = task_states(AlgorithmTask::distance);
  const ModelSetup setup{states.num_states, Counting{1}, states.starting, states.final_states};
  std::vector<double> mass;
  for (double lambda : {0.0, 0.1, 1.0, 10.0}) {
    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.learning_rate = 0.05;
    cfg.final_state_penalty = lambda;
    cfg.seed = 3;
    mass.push_back(final_leave_mass(train(data, setup, cfg).model));
  }
  for (std::size_t i = 1; i < mass.size(); ++i) EXPECT_LE(mass[i], mass[i - 1] + 1e-9) << i;
  EXPECT_LT(mass.back(), mass.front());
}

// Property of the default settings: on a copy task the 50-epoch moving
// average of the loss never goes up.
TEST(DiffFsa, CopyTaskLossMovingAverageDecreases) {
  const Dataset data = ca_dataset(parse_ca_task("ca1d:204"), 1, 4, 1, 100, 6);
  TrainConfig cfg;
  cfg.seed = 6;
  const auto result = train(data, ModelSetup{2, Positional{2, 0}, {0, 1}, {}}, cfg);
  ASSERT_EQ(result.history.size(), cfg.epochs);
  const std::size_t window = 50;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t end = window; end <= result.history.size(); ++end) {
    double sum = 0.0;
    for (std::size_t i = end - window; i < end; ++i) sum += result.history[i];
    ASSERT_LE(sum / window, previous + 1e-12) << "window ending at epoch " << end;
    previous = sum / window;
  }
  EXPECT_EQ(extract(result.model).table, ca_rule_fsa(204).table);
}
