#include "graphfsa/viz.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace graphfsa {

namespace {

using EdgeLabels = std::map<std::pair<StateId, StateId>, std::set<std::size_t>>;

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string state_label(const DotOptions& options, StateId s) {
  return s < options.state_names.size() ? options.state_names[s] : std::to_string(s);
}

std::string value_label(const Aggregator& agg, std::size_t index) {
  std::string out = "[";
  const auto value = agg.from_index(index);
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(value[i]);
  }
  return out + "]";
}

std::set<StateId> reachable_states(const GraphFSA& fsa) {
  const std::size_t z = fsa.domain_size();
  std::set<StateId> seen(fsa.starting.begin(), fsa.starting.end());
  std::vector<StateId> stack(fsa.starting.begin(), fsa.starting.end());
  while (!stack.empty()) {
    const StateId m = stack.back();
    stack.pop_back();
    for (std::size_t a = 0; a < z; ++a) {
      const StateId next = fsa.table[m * z + a];
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  return seen;
}

std::string render_dot(const GraphFSA& fsa, const std::set<StateId>& states, const EdgeLabels& edges,
                       const std::set<StateId>& dashed, const DotOptions& options) {
  const Aggregator agg(fsa.scheme, fsa.num_states);
  std::ostringstream os;
  os << "digraph graphfsa {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle];\n";
  for (StateId s : states) {
    os << "  q" << s << " [label=" << quote(state_label(options, s));
    if (fsa.is_final(s)) os << ", shape=doublecircle";
    if (dashed.count(s)) os << ", style=dashed";
    os << "];\n";
  }
  for (StateId s : states) {
    if (!fsa.is_starting(s)) continue;
    os << "  start" << s << " [shape=point];\n";
    os << "  start" << s << " -> q" << s << ";\n";
  }
  for (const auto& [ends, indices] : edges) {
    std::string label;
    for (std::size_t a : indices) {
      if (!label.empty()) label += "\\n";
      label += value_label(agg, a);
    }
    os << "  q" << ends.first << " -> q" << ends.second << " [label=\"" << label << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace

std::string export_complete_dot(const GraphFSA& fsa, const DotOptions& options) {
  if (const auto problems = validate(fsa); !problems.empty()) {
    throw std::invalid_argument("cannot export invalid automaton: " + problems.front());
  }
  const std::size_t z = fsa.domain_size();
  std::set<StateId> states;
  EdgeLabels edges;
  for (StateId m = 0; m < fsa.num_states; ++m) {
    states.insert(m);
    // Final states are absorbing; their self-loops are implied by the shape.
    if (fsa.is_final(m)) continue;
    for (std::size_t a = 0; a < z; ++a) edges[{m, fsa.table[m * z + a]}].insert(a);
  }
  const auto reachable = reachable_states(fsa);
  std::set<StateId> dashed;
  for (StateId m : states) {
    if (!reachable.count(m)) dashed.insert(m);
  }
  return render_dot(fsa, states, edges, dashed, options);
}

std::string export_partial_dot(const GraphFSA& fsa, const std::vector<Trace>& traces,
                               const DotOptions& options) {
  if (const auto problems = validate(fsa); !problems.empty()) {
    throw std::invalid_argument("cannot export invalid automaton: " + problems.front());
  }
  const std::size_t z = fsa.domain_size();
  std::set<StateId> states;
  EdgeLabels edges;
  for (const auto& trace : traces) {
    if (trace.entries.size() != trace.num_steps * trace.num_nodes) {
      throw std::invalid_argument("trace size inconsistent with its step and node counts");
    }
    for (std::size_t step = 0; step < trace.num_steps; ++step) {
      for (NodeId v = 0; v < trace.num_nodes; ++v) {
        if (options.from_start && trace.at(0, v).state != *options.from_start) continue;
        const TraceEntry& e = trace.at(step, v);
        if (e.state >= fsa.num_states || e.next >= fsa.num_states || e.agg_index >= z) {
          throw std::invalid_argument("trace references a state or aggregation outside the automaton");
        }
        const StateId expected = fsa.is_final(e.state) ? e.state : fsa.table[e.state * z + e.agg_index];
        if (e.next != expected) {
          throw std::invalid_argument("trace transition not present in the automaton's table");
        }
        states.insert(e.state);
        states.insert(e.next);
        if (!fsa.is_final(e.state)) edges[{e.state, e.next}].insert(e.agg_index);
      }
    }
  }
  return render_dot(fsa, states, edges, {}, options);
}

std::string render_grid_trace(std::size_t rows, std::size_t cols,
                              const std::vector<StateAssignment>& frames,
                              const std::map<StateId, char>& palette) {
  std::string out;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& frame = frames[f];
    if (frame.size() != rows * cols) throw std::invalid_argument("frame does not match grid size");
    if (f) out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const auto it = palette.find(frame[r * cols + c]);
        if (it == palette.end()) {
          throw std::invalid_argument("palette has no character for state " + std::to_string(frame[r * cols + c]));
        }
        out += it->second;
      }
      out += '\n';
    }
  }
  return out;
}

std::string render_grid_trace(const Graph& graph, std::size_t rows, std::size_t cols,
                              const std::vector<StateAssignment>& frames,
                              const std::map<StateId, char>& palette) {
  if (graph.num_nodes() != rows * cols) throw std::invalid_argument("graph is not a rows x cols grid");
  auto close = [](std::size_t x, std::size_t y, std::size_t mod) {
    const std::size_t d = x > y ? x - y : y - x;
    return d <= 1 || d + 1 == mod;
  };
  for (const auto& [u, v] : graph.edges()) {
    if (!close(u / cols, v / cols, rows) || !close(u % cols, v % cols, cols)) {
      throw std::invalid_argument("graph has an edge that is not a grid adjacency");
    }
  }
  return render_grid_trace(rows, cols, frames, palette);
}

}  // namespace graphfsa
