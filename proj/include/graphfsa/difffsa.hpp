#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphfsa/aggregation.hpp"
#include "graphfsa/datasets.hpp"
#include "graphfsa/fsa.hpp"

namespace graphfsa {

enum class OptimizerKind { sgd, adam };

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 2000;
  std::size_t batch_size = 32;
  /// Extra iterations drawn per batch from [0, Δ]. Only applied to examples
  /// whose targets are all final states, since other targets are not fixed
  /// points of the dynamics.
  std::uint32_t iteration_offset_max = 3;
  double final_state_penalty = 0.1;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double logit_init_scale = 0.1;
};

std::vector<std::string> check_config(const TrainConfig& config);

/// Logits of the relaxed transition tensor T'. Entry
/// `logits[(m1 * |Z| + a) * |M| + m2]` scores the move m1 -> m2 under
/// aggregation index a; T'[m1, a, ·] is its softmax over m2.
class SoftTransitionModel {
 public:
  SoftTransitionModel(std::size_t num_states, AggregationScheme scheme,
                      std::vector<StateId> starting, std::vector<StateId> final_states);

  /// Delta rows: each row puts probability exactly 1 on the table's entry.
  static SoftTransitionModel from_fsa(const GraphFSA& fsa);

  std::size_t num_states() const { return num_states_; }
  std::size_t domain_size() const { return aggregator_.domain_size(); }
  const AggregationScheme& scheme() const { return aggregator_.scheme(); }
  const Aggregator& aggregator() const { return aggregator_; }
  const std::vector<StateId>& starting() const { return starting_; }
  const std::vector<StateId>& final_states() const { return final_states_; }
  bool is_final(StateId s) const;

  std::vector<double>& logits() { return logits_; }
  const std::vector<double>& logits() const { return logits_; }

  std::size_t row_offset(StateId m, std::size_t agg_index) const {
    return (m * domain_size() + agg_index) * num_states_;
  }

  /// Row-wise softmax of the logits, same layout.
  std::vector<double> probabilities() const;

 private:
  std::size_t num_states_;
  Aggregator aggregator_;
  std::vector<StateId> starting_;
  std::vector<StateId> final_states_;
  std::vector<double> logits_;
};

/// Logit used for "impossible" entries of delta rows; exp underflows to 0.
inline constexpr double kDeltaLogitFloor = -1000.0;

SoftStateField soft_step(const SoftTransitionModel& model, const Graph& graph,
                         const SoftStateField& field);
/// Same, with precomputed probabilities().
SoftStateField soft_step(const SoftTransitionModel& model, std::span<const double> probs,
                         const Graph& graph, const SoftStateField& field);

SoftStateField rollout(const SoftTransitionModel& model, const Graph& graph,
                       const StateAssignment& inputs, std::size_t steps);

/// Mean over nodes of |field(v) - onehot(target(v))|^2.
double data_loss(const SoftStateField& field, const StateAssignment& targets);
/// λ times the total probability of leaving a final state.
double final_state_penalty(const SoftTransitionModel& model, std::span<const double> probs, double lambda);
double loss(const SoftTransitionModel& model, const SoftStateField& field,
            const StateAssignment& targets, double lambda);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // same layout as logits
};

/// Mean data loss over `batch` plus the penalty, and its exact gradient
/// with respect to the logits. `steps`, if non-empty, overrides each
/// example's step count.
LossGrad loss_and_grad(const SoftTransitionModel& model, std::span<const Example> batch,
                       double lambda, std::span<const std::uint32_t> steps = {});

std::vector<double> grad(const SoftTransitionModel& model, std::span<const Example> batch, double lambda);

/// State layout of the learner. num_states may exceed what the data uses.
struct ModelSetup {
  std::size_t num_states;
  AggregationScheme scheme;
  std::vector<StateId> starting;
  std::vector<StateId> final_states;
};

struct TrainResult {
  SoftTransitionModel model;
  std::vector<double> history;  // mean batch loss per epoch
};

/// Throws std::invalid_argument for incompatible data and std::runtime_error
/// when the loss becomes non-finite.
TrainResult train(const Dataset& dataset, const ModelSetup& setup, const TrainConfig& config);

/// Argmax discretization, ties toward the smallest state. With
/// `clamp_final`, final rows become self-loops.
GraphFSA extract(const SoftTransitionModel& model, bool clamp_final = true);

/// Total probability of leaving final states, Σ_f Σ_a Σ_{m≠f} T'[f,a,m].
double final_leave_mass(const SoftTransitionModel& model);

}  // namespace graphfsa
