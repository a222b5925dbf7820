#include "graphfsa/fsa.hpp"

#include <algorithm>
#include <stdexcept>

namespace graphfsa {

namespace {

void check_inputs(const GraphFSA& fsa, const Aggregator& agg, const Graph& graph,
                  const StateAssignment& assignment) {
  if (fsa.table.size() != fsa.num_states * agg.domain_size()) {
    throw std::invalid_argument("transition table has wrong size");
  }
  if (assignment.size() != graph.num_nodes()) {
    throw std::invalid_argument("assignment length " + std::to_string(assignment.size()) +
                                " does not match " + std::to_string(graph.num_nodes()) + " nodes");
  }
  for (StateId s : assignment) {
    if (s >= fsa.num_states) throw std::invalid_argument("assignment holds out-of-range state");
  }
  agg.check_graph(graph);
}

// Steps `current` into `next` using precomputed aggregator and final mask.
void step_into(const GraphFSA& fsa, const Aggregator& agg, const std::vector<char>& final_mask,
               const Graph& graph, const StateAssignment& current, StateAssignment& next,
               TraceEntry* trace_row) {
  const std::size_t z = agg.domain_size();
  for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
    const StateId s = current[v];
    const std::size_t a = agg.aggregate_index(graph, static_cast<NodeId>(v), current);
    next[v] = final_mask[s] ? s : fsa.table[s * z + a];
    if (trace_row) trace_row[v] = {s, static_cast<std::uint32_t>(a), next[v]};
  }
}

std::vector<char> final_mask_of(const GraphFSA& fsa) {
  std::vector<char> mask(fsa.num_states, 0);
  for (StateId f : fsa.final_states) {
    if (f < fsa.num_states) mask[f] = 1;
  }
  return mask;
}

}  // namespace

bool GraphFSA::is_final(StateId state) const {
  return std::find(final_states.begin(), final_states.end(), state) != final_states.end();
}

bool GraphFSA::is_starting(StateId state) const {
  return std::find(starting.begin(), starting.end(), state) != starting.end();
}

GraphFSA identity_fsa(std::size_t num_states, AggregationScheme scheme,
                      std::vector<StateId> starting, std::vector<StateId> final_states) {
  GraphFSA fsa;
  fsa.num_states = num_states;
  fsa.scheme = scheme;
  if (starting.empty()) {
    for (StateId s = 0; s < num_states; ++s) starting.push_back(s);
  }
  fsa.starting = std::move(starting);
  fsa.final_states = std::move(final_states);
  const std::size_t z = fsa.domain_size();
  fsa.table.resize(num_states * z);
  for (std::size_t m = 0; m < num_states; ++m) {
    std::fill_n(fsa.table.begin() + static_cast<std::ptrdiff_t>(m * z), z, static_cast<StateId>(m));
  }
  return fsa;
}

std::vector<std::string> validate(const GraphFSA& fsa) {
  std::vector<std::string> violations;
  if (fsa.num_states == 0) {
    violations.emplace_back("num_states must be at least 1");
    return violations;
  }
  for (const auto& p : check_scheme(fsa.scheme, fsa.num_states)) violations.push_back("scheme: " + p);
  if (!violations.empty()) return violations;

  std::size_t z = 0;
  try {
    z = fsa.domain_size();
  } catch (const std::exception& e) {
    violations.emplace_back(std::string("domain size: ") + e.what());
    return violations;
  }

  if (fsa.starting.empty()) violations.emplace_back("starting state set is empty");
  for (StateId s : fsa.starting) {
    if (s >= fsa.num_states) violations.push_back("starting state " + std::to_string(s) + " out of range");
  }
  for (StateId f : fsa.final_states) {
    if (f >= fsa.num_states) violations.push_back("final state " + std::to_string(f) + " out of range");
  }
  if (fsa.table.size() != fsa.num_states * z) {
    violations.push_back("table has " + std::to_string(fsa.table.size()) + " entries, expected " +
                         std::to_string(fsa.num_states * z));
    return violations;
  }
  for (std::size_t i = 0; i < fsa.table.size(); ++i) {
    if (fsa.table[i] >= fsa.num_states) {
      violations.push_back("state out of range at table index " + std::to_string(i));
    }
  }
  for (StateId f : fsa.final_states) {
    if (f >= fsa.num_states) continue;
    for (std::size_t a = 0; a < z; ++a) {
      if (fsa.table[f * z + a] != f) {
        violations.push_back("final not absorbing: state " + std::to_string(f) + " at table index " +
                             std::to_string(f * z + a));
      }
    }
  }
  return violations;
}

StateAssignment step(const GraphFSA& fsa, const Graph& graph, const StateAssignment& assignment) {
  const Aggregator agg(fsa.scheme, fsa.num_states);
  check_inputs(fsa, agg, graph, assignment);
  StateAssignment next(assignment.size());
  step_into(fsa, agg, final_mask_of(fsa), graph, assignment, next, nullptr);
  return next;
}

RunResult run(const GraphFSA& fsa, const Graph& graph, const StateAssignment& assignment,
              std::size_t steps, bool record_trace) {
  const Aggregator agg(fsa.scheme, fsa.num_states);
  check_inputs(fsa, agg, graph, assignment);
  const auto mask = final_mask_of(fsa);

  RunResult result{assignment, std::nullopt};
  if (record_trace) {
    result.trace = Trace{graph.num_nodes(), steps, std::vector<TraceEntry>(steps * graph.num_nodes())};
  }
  StateAssignment next(assignment.size());
  for (std::size_t t = 0; t < steps; ++t) {
    TraceEntry* row = record_trace ? result.trace->entries.data() + t * graph.num_nodes() : nullptr;
    step_into(fsa, agg, mask, graph, result.states, next, row);
    result.states.swap(next);
  }
  return result;
}

}  // namespace graphfsa
