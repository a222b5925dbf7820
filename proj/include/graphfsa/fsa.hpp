#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphfsa/aggregation.hpp"
#include "graphfsa/graph.hpp"

namespace graphfsa {

/// A finite state automaton shared by every node of a graph.
///
/// `table[m * |Z| + a]` is the successor of state m under aggregation
/// index a. Final states are absorbing.
struct GraphFSA {
  std::size_t num_states = 1;
  std::vector<StateId> starting;
  std::vector<StateId> final_states;
  AggregationScheme scheme = Counting{1};
  std::vector<StateId> table;

  std::size_t domain_size() const { return graphfsa::domain_size(scheme, num_states); }
  StateId next(StateId state, std::size_t agg_index) const {
    return table[state * domain_size() + agg_index];
  }
  bool is_final(StateId state) const;
  bool is_starting(StateId state) const;

  friend bool operator==(const GraphFSA&, const GraphFSA&) = default;
};

/// An automaton whose every transition keeps the current state.
GraphFSA identity_fsa(std::size_t num_states, AggregationScheme scheme,
                      std::vector<StateId> starting = {}, std::vector<StateId> final_states = {});

/// Human-readable invariant violations; empty when the automaton is well formed.
std::vector<std::string> validate(const GraphFSA& fsa);

struct TraceEntry {
  StateId state;
  std::uint32_t agg_index;
  StateId next;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Every transition taken during a run, step-major.
struct Trace {
  std::size_t num_nodes = 0;
  std::size_t num_steps = 0;
  std::vector<TraceEntry> entries;

  const TraceEntry& at(std::size_t step, NodeId node) const {
    return entries[step * num_nodes + node];
  }
};

struct RunResult {
  StateAssignment states;
  std::optional<Trace> trace;
};

/// One synchronous update of all nodes. Throws std::invalid_argument when
/// the assignment or graph does not fit the automaton.
StateAssignment step(const GraphFSA& fsa, const Graph& graph, const StateAssignment& assignment);

RunResult run(const GraphFSA& fsa, const Graph& graph, const StateAssignment& assignment,
              std::size_t steps, bool record_trace = false);

}  // namespace graphfsa
