#include "graphfsa/difffsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "graphfsa/rng.hpp"

namespace graphfsa {

namespace {

constexpr double kMassTolerance = 1e-9;

void softmax_rows(std::span<const double> logits, std::size_t width, std::span<double> out) {
  for (std::size_t r = 0; r < logits.size(); r += width) {
    const double peak = *std::max_element(logits.begin() + static_cast<std::ptrdiff_t>(r),
                                          logits.begin() + static_cast<std::ptrdiff_t>(r + width));
    double total = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      out[r + j] = std::exp(logits[r + j] - peak);
      total += out[r + j];
    }
    for (std::size_t j = 0; j < width; ++j) out[r + j] /= total;
  }
}

// Forward state of one example, kept for the backward pass.
struct Tape {
  std::vector<SoftStateField> fields;              // fields[k] before step k
  std::vector<std::vector<std::vector<double>>> q;  // q[k][v] aggregation distribution
};

// One soft step; if `q_out` is given, records each node's aggregation distribution.
SoftStateField soft_step_impl(const SoftTransitionModel& model, std::span<const double> probs,
                              const Graph& graph, const SoftStateField& field,
                              std::vector<std::vector<double>>* q_out) {
  const std::size_t m_count = model.num_states();
  const std::size_t z_count = model.domain_size();
  const Aggregator& agg = model.aggregator();
  SoftStateField next(graph.num_nodes(), m_count);
  if (q_out) q_out->resize(graph.num_nodes());
  for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
    auto q = agg.soft_aggregate(graph, static_cast<NodeId>(v), field);
    const auto cur = field.row(static_cast<NodeId>(v));
    auto out = next.row(static_cast<NodeId>(v));
    for (std::size_t m1 = 0; m1 < m_count; ++m1) {
      if (cur[m1] == 0.0) continue;
      for (std::size_t a = 0; a < z_count; ++a) {
        const double w = cur[m1] * q[a];
        if (w == 0.0) continue;
        const double* row = probs.data() + (m1 * z_count + a) * m_count;
        for (std::size_t m2 = 0; m2 < m_count; ++m2) out[m2] += w * row[m2];
      }
    }
    if (q_out) (*q_out)[v] = std::move(q);
  }
  return next;
}

void check_example(const SoftTransitionModel& model, const Example& ex) {
  model.aggregator().check_graph(ex.graph);
  if (ex.inputs.size() != ex.graph.num_nodes() || ex.targets.size() != ex.graph.num_nodes()) {
    throw std::invalid_argument("example inputs/targets do not match its graph");
  }
  for (std::size_t v = 0; v < ex.inputs.size(); ++v) {
    if (ex.inputs[v] >= model.num_states() || ex.targets[v] >= model.num_states()) {
      throw std::invalid_argument("example state exceeds the model's state count");
    }
  }
}

}  // namespace

std::vector<std::string> check_config(const TrainConfig& c) {
  std::vector<std::string> problems;
  if (!(c.learning_rate > 0.0)) problems.emplace_back("learning_rate must be > 0");
  if (c.epochs < 1) problems.emplace_back("epochs must be >= 1");
  if (c.batch_size < 1) problems.emplace_back("batch_size must be >= 1");
  if (!(c.final_state_penalty >= 0.0)) problems.emplace_back("final_state_penalty must be >= 0");
  if (!(c.logit_init_scale >= 0.0)) problems.emplace_back("logit_init_scale must be >= 0");
  if (c.optimizer == OptimizerKind::adam) {
    if (!(c.beta1 >= 0.0 && c.beta1 < 1.0) || !(c.beta2 >= 0.0 && c.beta2 < 1.0)) {
      problems.emplace_back("adam betas must lie in [0, 1)");
    }
    if (!(c.epsilon > 0.0)) problems.emplace_back("adam epsilon must be > 0");
  }
  return problems;
}

SoftTransitionModel::SoftTransitionModel(std::size_t num_states, AggregationScheme scheme,
                                         std::vector<StateId> starting,
                                         std::vector<StateId> final_states)
    : num_states_(num_states),
      aggregator_(scheme, num_states),
      starting_(std::move(starting)),
      final_states_(std::move(final_states)),
      logits_(num_states * aggregator_.domain_size() * num_states, 0.0) {
  for (StateId s : starting_) {
    if (s >= num_states_) throw std::invalid_argument("starting state out of range");
  }
  for (StateId f : final_states_) {
    if (f >= num_states_) throw std::invalid_argument("final state out of range");
  }
}

SoftTransitionModel SoftTransitionModel::from_fsa(const GraphFSA& fsa) {
  SoftTransitionModel model(fsa.num_states, fsa.scheme, fsa.starting, fsa.final_states);
  if (fsa.table.size() != fsa.num_states * model.domain_size()) {
    throw std::invalid_argument("transition table has wrong size");
  }
  std::fill(model.logits_.begin(), model.logits_.end(), kDeltaLogitFloor);
  for (std::size_t i = 0; i < fsa.table.size(); ++i) {
    model.logits_[i * fsa.num_states + fsa.table[i]] = 0.0;
  }
  return model;
}

bool SoftTransitionModel::is_final(StateId s) const {
  return std::find(final_states_.begin(), final_states_.end(), s) != final_states_.end();
}

std::vector<double> SoftTransitionModel::probabilities() const {
  std::vector<double> probs(logits_.size());
  softmax_rows(logits_, num_states_, probs);
  return probs;
}

SoftStateField soft_step(const SoftTransitionModel& model, const Graph& graph,
                         const SoftStateField& field) {
  const auto probs = model.probabilities();
  return soft_step(model, probs, graph, field);
}

SoftStateField soft_step(const SoftTransitionModel& model, std::span<const double> probs,
                         const Graph& graph, const SoftStateField& field) {
  model.aggregator().check_graph(graph);
  if (field.num_nodes() != graph.num_nodes() || field.num_states() != model.num_states()) {
    throw std::invalid_argument("soft field does not match graph or model");
  }
  auto next = soft_step_impl(model, probs, graph, field, nullptr);
  for (std::size_t v = 0; v < next.num_nodes(); ++v) {
    const auto r = next.row(static_cast<NodeId>(v));
    const double mass = std::accumulate(r.begin(), r.end(), 0.0);
    if (std::abs(mass - 1.0) > kMassTolerance) {
      throw std::logic_error("soft step lost probability mass at node " + std::to_string(v));
    }
  }
  return next;
}

SoftStateField rollout(const SoftTransitionModel& model, const Graph& graph,
                       const StateAssignment& inputs, std::size_t steps) {
  if (inputs.size() != graph.num_nodes()) throw std::invalid_argument("inputs do not match graph");
  model.aggregator().check_graph(graph);
  const auto probs = model.probabilities();
  auto field = SoftStateField::one_hot(inputs, model.num_states());
  for (std::size_t t = 0; t < steps; ++t) field = soft_step_impl(model, probs, graph, field, nullptr);
  return field;
}

double data_loss(const SoftStateField& field, const StateAssignment& targets) {
  if (targets.size() != field.num_nodes()) throw std::invalid_argument("targets do not match field");
  double total = 0.0;
  for (std::size_t v = 0; v < field.num_nodes(); ++v) {
    const auto r = field.row(static_cast<NodeId>(v));
    for (std::size_t m = 0; m < r.size(); ++m) {
      const double diff = r[m] - (m == targets[v] ? 1.0 : 0.0);
      total += diff * diff;
    }
  }
  return total / static_cast<double>(field.num_nodes());
}

double final_state_penalty(const SoftTransitionModel& model, std::span<const double> probs, double lambda) {
  if (lambda == 0.0) return 0.0;
  double leave = 0.0;
  for (StateId f : model.final_states()) {
    for (std::size_t a = 0; a < model.domain_size(); ++a) {
      const std::size_t off = model.row_offset(f, a);
      for (std::size_t m = 0; m < model.num_states(); ++m) {
        if (m != f) leave += probs[off + m];
      }
    }
  }
  return lambda * leave;
}

double loss(const SoftTransitionModel& model, const SoftStateField& field,
            const StateAssignment& targets, double lambda) {
  const auto probs = model.probabilities();
  return data_loss(field, targets) + final_state_penalty(model, probs, lambda);
}

double final_leave_mass(const SoftTransitionModel& model) {
  return final_state_penalty(model, model.probabilities(), 1.0);
}

namespace {

LossGrad loss_and_grad_impl(const SoftTransitionModel& model, std::span<const Example* const> batch,
                            double lambda, std::span<const std::uint32_t> steps) {
  if (batch.empty()) throw std::invalid_argument("loss_and_grad needs a nonempty batch");
  if (!steps.empty() && steps.size() != batch.size()) {
    throw std::invalid_argument("step override count does not match batch");
  }
  const std::size_t m_count = model.num_states();
  const std::size_t z_count = model.domain_size();
  const Aggregator& agg = model.aggregator();
  const auto probs = model.probabilities();
  std::vector<double> grad_probs(probs.size(), 0.0);
  const double batch_scale = 1.0 / static_cast<double>(batch.size());

  LossGrad result;
  std::vector<double> h(m_count * z_count);
  std::vector<double> grad_q(z_count);

  for (std::size_t e = 0; e < batch.size(); ++e) {
    const Example& ex = *batch[e];
    check_example(model, ex);
    const std::size_t t_count = steps.empty() ? ex.steps : steps[e];
    const std::size_t n = ex.graph.num_nodes();

    Tape tape;
    tape.fields.reserve(t_count + 1);
    tape.q.resize(t_count);
    tape.fields.push_back(SoftStateField::one_hot(ex.inputs, m_count));
    for (std::size_t k = 0; k < t_count; ++k) {
      tape.fields.push_back(soft_step_impl(model, probs, ex.graph, tape.fields[k], &tape.q[k]));
    }

    const SoftStateField& out = tape.fields.back();
    result.loss += batch_scale * data_loss(out, ex.targets);

    // d(loss)/d(out) for the mean squared distance to one-hot targets.
    SoftStateField grad_field(n, m_count);
    const double node_scale = 2.0 * batch_scale / static_cast<double>(n);
    for (std::size_t v = 0; v < n; ++v) {
      const auto r = out.row(static_cast<NodeId>(v));
      auto g = grad_field.row(static_cast<NodeId>(v));
      for (std::size_t m = 0; m < m_count; ++m) {
        g[m] = node_scale * (r[m] - (m == ex.targets[v] ? 1.0 : 0.0));
      }
    }

    for (std::size_t k = t_count; k-- > 0;) {
      const SoftStateField& before = tape.fields[k];
      SoftStateField grad_before(n, m_count);
      for (std::size_t v = 0; v < n; ++v) {
        const auto node = static_cast<NodeId>(v);
        const auto g = grad_field.row(node);
        const auto cur = before.row(node);
        const auto& q = tape.q[k][v];
        auto g_cur = grad_before.row(node);

        // h[m1, a] = Σ_m2 T'[m1, a, m2] g[m2]
        for (std::size_t i = 0; i < m_count * z_count; ++i) {
          const double* row = probs.data() + i * m_count;
          double acc = 0.0;
          for (std::size_t m2 = 0; m2 < m_count; ++m2) acc += row[m2] * g[m2];
          h[i] = acc;
        }
        std::fill(grad_q.begin(), grad_q.end(), 0.0);
        for (std::size_t m1 = 0; m1 < m_count; ++m1) {
          double g_m1 = 0.0;
          for (std::size_t a = 0; a < z_count; ++a) {
            const double hv = h[m1 * z_count + a];
            g_m1 += q[a] * hv;
            grad_q[a] += cur[m1] * hv;
            const double w = cur[m1] * q[a];
            if (w == 0.0) continue;
            double* gp = grad_probs.data() + (m1 * z_count + a) * m_count;
            for (std::size_t m2 = 0; m2 < m_count; ++m2) gp[m2] += w * g[m2];
          }
          g_cur[m1] += g_m1;
        }
        agg.soft_aggregate_backward(ex.graph, node, before, grad_q, grad_before);
      }
      grad_field = std::move(grad_before);
    }
  }

  if (lambda != 0.0) {
    result.loss += final_state_penalty(model, probs, lambda);
    for (StateId f : model.final_states()) {
      for (std::size_t a = 0; a < z_count; ++a) {
        const std::size_t off = model.row_offset(f, a);
        for (std::size_t m = 0; m < m_count; ++m) {
          if (m != f) grad_probs[off + m] += lambda;
        }
      }
    }
  }

  // Softmax backward, row by row.
  result.grad.assign(probs.size(), 0.0);
  for (std::size_t r = 0; r < probs.size(); r += m_count) {
    double dot = 0.0;
    for (std::size_t j = 0; j < m_count; ++j) dot += probs[r + j] * grad_probs[r + j];
    for (std::size_t j = 0; j < m_count; ++j) {
      result.grad[r + j] = probs[r + j] * (grad_probs[r + j] - dot);
    }
  }
  return result;
}

}  // namespace

LossGrad loss_and_grad(const SoftTransitionModel& model, std::span<const Example> batch,
                       double lambda, std::span<const std::uint32_t> steps) {
  std::vector<const Example*> ptrs;
  ptrs.reserve(batch.size());
  for (const auto& ex : batch) ptrs.push_back(&ex);
  return loss_and_grad_impl(model, ptrs, lambda, steps);
}

std::vector<double> grad(const SoftTransitionModel& model, std::span<const Example> batch, double lambda) {
  return loss_and_grad(model, batch, lambda).grad;
}

TrainResult train(const Dataset& dataset, const ModelSetup& setup, const TrainConfig& config) {
  if (dataset.empty()) throw std::invalid_argument("training dataset is empty");
  if (const auto problems = check_config(config); !problems.empty()) {
    throw std::invalid_argument("invalid training config: " + problems.front());
  }
  SoftTransitionModel model(setup.num_states, setup.scheme, setup.starting, setup.final_states);
  for (const auto& ex : dataset) check_example(model, ex);

  Rng rng(child_seed(config.seed, 0x7472, 0));
  for (auto& w : model.logits()) w = rng.normal(0.0, config.logit_init_scale);

  // Examples whose targets are fixed points of the dynamics may be run longer.
  std::vector<char> stable(dataset.size(), 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    stable[i] = std::all_of(dataset[i].targets.begin(), dataset[i].targets.end(),
                            [&](StateId s) { return model.is_final(s); });
  }

  std::vector<double> first(model.logits().size(), 0.0);
  std::vector<double> second(model.logits().size(), 0.0);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result{model, {}};
  result.history.reserve(config.epochs);
  std::size_t update = 0;
  std::vector<const Example*> batch;
  std::vector<std::uint32_t> steps;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const auto offset = static_cast<std::uint32_t>(rng.uniform_int(0, config.iteration_offset_max));
      batch.clear();
      steps.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(&dataset[order[i]]);
        steps.push_back(dataset[order[i]].steps + (stable[order[i]] ? offset : 0));
      }
      const auto lg = loss_and_grad_impl(result.model, batch, config.final_state_penalty, steps);
      if (!std::isfinite(lg.loss)) {
        std::ostringstream os;
        os << "non-finite loss at epoch " << epoch << ", batch " << batches;
        throw std::runtime_error(os.str());
      }
      epoch_loss += lg.loss;
      ++batches;
      ++update;

      auto& w = result.model.logits();
      if (config.optimizer == OptimizerKind::sgd) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.learning_rate * lg.grad[i];
      } else {
        const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(update));
        const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(update));
        for (std::size_t i = 0; i < w.size(); ++i) {
          first[i] = config.beta1 * first[i] + (1.0 - config.beta1) * lg.grad[i];
          second[i] = config.beta2 * second[i] + (1.0 - config.beta2) * lg.grad[i] * lg.grad[i];
          w[i] -= config.learning_rate * (first[i] / c1) / (std::sqrt(second[i] / c2) + config.epsilon);
        }
      }
    }
    result.history.push_back(epoch_loss / static_cast<double>(batches));
  }
  return result;
}

GraphFSA extract(const SoftTransitionModel& model, bool clamp_final) {
  GraphFSA fsa;
  fsa.num_states = model.num_states();
  fsa.scheme = model.scheme();
  fsa.starting = model.starting();
  fsa.final_states = model.final_states();
  const std::size_t z_count = model.domain_size();
  const std::size_t m_count = model.num_states();
  fsa.table.resize(m_count * z_count);
  const auto probs = model.probabilities();
  for (std::size_t i = 0; i < fsa.table.size(); ++i) {
    const auto row = probs.begin() + static_cast<std::ptrdiff_t>(i * m_count);
    fsa.table[i] = static_cast<StateId>(std::max_element(row, row + static_cast<std::ptrdiff_t>(m_count)) - row);
  }
  if (clamp_final) {
    for (StateId f : fsa.final_states) {
      std::fill_n(fsa.table.begin() + static_cast<std::ptrdiff_t>(f * z_count), z_count, f);
    }
  }
  return fsa;
}

}  // namespace graphfsa
