#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "graphfsa/graph.hpp"

namespace graphfsa {

/// Per-state neighbor counts, each capped at `bound`.
struct Counting {
  std::uint32_t bound = 1;
  friend bool operator==(const Counting&, const Counting&) = default;
};

/// One slot per port; unassigned slots read as `fill`.
struct Positional {
  std::uint32_t slots = 2;
  StateId fill = 0;
  friend bool operator==(const Positional&, const Positional&) = default;
};

/// Bit m set iff the fraction of neighbors in state m is at least `tau`.
struct AvgThreshold {
  double tau = 0.5;
  friend bool operator==(const AvgThreshold&, const AvgThreshold&) = default;
};

using AggregationScheme = std::variant<Counting, Positional, AvgThreshold>;

/// Decoded aggregation: counts (Counting), slot states (Positional) or
/// bits (AvgThreshold).
using AggregationValue = std::vector<std::uint32_t>;

/// Row-major per-node distributions over states.
class SoftStateField {
 public:
  SoftStateField() = default;
  SoftStateField(std::size_t num_nodes, std::size_t num_states)
      : num_nodes_(num_nodes), num_states_(num_states), data_(num_nodes * num_states, 0.0) {}

  static SoftStateField one_hot(std::span<const StateId> states, std::size_t num_states);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_states() const { return num_states_; }
  std::span<double> row(NodeId v) { return {data_.data() + v * num_states_, num_states_}; }
  std::span<const double> row(NodeId v) const {
    return {data_.data() + v * num_states_, num_states_};
  }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  /// Per-node argmax, ties toward the smallest state.
  StateAssignment argmax() const;

 private:
  std::size_t num_nodes_ = 0;
  std::size_t num_states_ = 0;
  std::vector<double> data_;
};

std::string describe(const AggregationScheme& scheme);

/// Empty when the scheme's parameters are valid for `num_states`.
std::vector<std::string> check_scheme(const AggregationScheme& scheme, std::size_t num_states);

/// |Z|. Throws std::overflow_error when |M|·|Z| cannot be addressed.
std::size_t domain_size(const AggregationScheme& scheme, std::size_t num_states);

/// Aggregation domain for a fixed scheme and state count. Holds the radix
/// tables used for index arithmetic so hot loops avoid recomputing them.
class Aggregator {
 public:
  Aggregator(AggregationScheme scheme, std::size_t num_states);

  const AggregationScheme& scheme() const { return scheme_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t domain_size() const { return domain_size_; }

  /// Throws std::invalid_argument if the graph cannot feed this scheme
  /// (Positional without ports, or a slot >= d).
  void check_graph(const Graph& graph) const;

  AggregationValue aggregate(const Graph& graph, NodeId node,
                             std::span<const StateId> states) const;
  std::size_t aggregate_index(const Graph& graph, NodeId node,
                              std::span<const StateId> states) const;

  /// Counting: base (b+1), state 0 least significant. Positional: base |M|,
  /// slot 0 least significant. AvgThreshold: bit m has weight 2^m.
  std::size_t to_index(const AggregationValue& value) const;
  AggregationValue from_index(std::size_t index) const;

  /// Exact distribution of the aggregation when each neighbor's state is
  /// drawn independently from its row of `field`. Length domain_size().
  std::vector<double> soft_aggregate(const Graph& graph, NodeId node,
                                     const SoftStateField& field) const;

  /// Accumulates d(loss)/d(field) given d(loss)/d(soft_aggregate(...)).
  void soft_aggregate_backward(const Graph& graph, NodeId node, const SoftStateField& field,
                               std::span<const double> grad_out,
                               SoftStateField& grad_field) const;

 private:
  std::uint32_t avg_cap(std::size_t degree) const;

  AggregationScheme scheme_;
  std::size_t num_states_;
  std::size_t domain_size_;
  std::vector<std::size_t> radix_power_;  // Counting/Positional digit weights
};

// Free-function forms of the Aggregator surface.
AggregationValue aggregate(const AggregationScheme& scheme, std::size_t num_states,
                           const Graph& graph, NodeId node, std::span<const StateId> states);
std::size_t to_index(const AggregationScheme& scheme, std::size_t num_states,
                     const AggregationValue& value);
AggregationValue from_index(const AggregationScheme& scheme, std::size_t num_states,
                            std::size_t index);
std::vector<double> soft_aggregate(const AggregationScheme& scheme, std::size_t num_states,
                                   const Graph& graph, NodeId node,
                                   const SoftStateField& field);

}  // namespace graphfsa
