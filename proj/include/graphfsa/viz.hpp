#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphfsa/fsa.hpp"

namespace graphfsa {

struct DotOptions {
  /// Display names per state; defaults to the state index.
  std::vector<std::string> state_names;
  /// Partial export only: keep transitions of nodes that started here.
  std::optional<StateId> from_start;
};

/// Every state and every transition of `fsa`. Final states are double
/// circles, starting states receive an entry arrow, states unreachable from
/// the starting set are dashed. Transitions sharing endpoints are merged
/// into one edge with one decoded aggregation vector per label line.
/// Throws std::invalid_argument if validate(fsa) is not empty.
std::string export_complete_dot(const GraphFSA& fsa, const DotOptions& options = {});

/// Only the (state, aggregation, next) triples observed in `traces`.
/// Throws std::invalid_argument if a trace names unknown states, indices,
/// or a transition the table does not contain.
std::string export_partial_dot(const GraphFSA& fsa, const std::vector<Trace>& traces,
                               const DotOptions& options = {});

/// Timesteps of a rows x cols board, one character per cell, blocks
/// separated by a blank line. Throws std::invalid_argument if a state has
/// no palette entry or an assignment has the wrong size.
std::string render_grid_trace(std::size_t rows, std::size_t cols,
                              const std::vector<StateAssignment>& frames,
                              const std::map<StateId, char>& palette);

/// Same, after checking that every edge of `graph` joins neighboring cells
/// of the rows x cols layout (wrap-around allowed).
std::string render_grid_trace(const Graph& graph, std::size_t rows, std::size_t cols,
                              const std::vector<StateAssignment>& frames,
                              const std::map<StateId, char>& palette);

}  // namespace graphfsa
