#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace graphfsa {

using NodeId = std::uint32_t;
using StateId = std::uint32_t;

/// States of every node at one instant, indexed by node id.
using StateAssignment = std::vector<StateId>;

using Edge = std::pair<NodeId, NodeId>;

/// Port labels of one edge: the slot `u` files `v` under, and vice versa.
struct PortPair {
  std::uint32_t slot_u = 0;
  std::uint32_t slot_v = 0;

  friend bool operator==(const PortPair&, const PortPair&) = default;
};

inline constexpr std::int32_t kNoSlot = -1;

/// Undirected simple graph with optional per-endpoint slot labels.
///
/// Immutable after construction. Adjacency is stored in CSR form so that
/// neighbors of a node are a contiguous span, ordered by edge insertion.
class Graph {
 public:
  struct Neighbor {
    NodeId node;
    std::int32_t slot;  // kNoSlot when the graph carries no ports
  };

  /// Throws std::invalid_argument on self-loops, duplicate edges,
  /// out-of-range endpoints, or ports that collide at a node.
  Graph(std::size_t num_nodes, std::vector<Edge> edges,
        std::optional<std::vector<PortPair>> ports = std::nullopt);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_ports() const { return ports_.has_value(); }
  const std::optional<std::vector<PortPair>>& ports() const { return ports_; }

  /// One past the largest slot used at any node; 0 without ports.
  std::uint32_t slot_span() const { return slot_span_; }

  std::span<const Neighbor> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const;

  /// Relabels node i as perm[i]; edges and ports follow their endpoints.
  Graph permuted(std::span<const NodeId> perm) const;

 private:
  std::size_t num_nodes_;
  std::vector<Edge> edges_;
  std::optional<std::vector<PortPair>> ports_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::uint32_t slot_span_ = 0;
};

/// Hop distances from `source`; unreachable nodes get -1.
std::vector<int> bfs_distances(const Graph& graph, NodeId source);

bool is_connected(const Graph& graph);

/// Longest shortest path. Requires a connected graph.
int diameter(const Graph& graph);

}  // namespace graphfsa
