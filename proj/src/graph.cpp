#include "graphfsa/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

namespace graphfsa {

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges,
             std::optional<std::vector<PortPair>> ports)
    : num_nodes_(num_nodes), edges_(std::move(edges)), ports_(std::move(ports)) {
  if (num_nodes_ == 0) {
    throw std::invalid_argument("graph must have at least one node");
  }
  if (ports_ && ports_->size() != edges_.size()) {
    throw std::invalid_argument("ports must label every edge");
  }

  std::set<Edge> seen;
  std::vector<std::size_t> degree(num_nodes_, 0);
  for (const auto& [u, v] : edges_) {
    if (u >= num_nodes_ || v >= num_nodes_) {
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(u) +
                                  "," + std::to_string(v) + ")");
    }
    if (u == v) {
      throw std::invalid_argument("self-loop at node " + std::to_string(u));
    }
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(u) + "," +
                                  std::to_string(v) + ")");
    }
    ++degree[u];
    ++degree[v];
  }

  offsets_.assign(num_nodes_ + 1, 0);
  for (std::size_t v = 0; v < num_nodes_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [u, v] = edges_[e];
    std::int32_t slot_u = kNoSlot;
    std::int32_t slot_v = kNoSlot;
    if (ports_) {
      slot_u = static_cast<std::int32_t>((*ports_)[e].slot_u);
      slot_v = static_cast<std::int32_t>((*ports_)[e].slot_v);
      slot_span_ = std::max({slot_span_, (*ports_)[e].slot_u + 1, (*ports_)[e].slot_v + 1});
    }
    adjacency_[fill[u]++] = {v, slot_u};
    adjacency_[fill[v]++] = {u, slot_v};
  }

  if (ports_) {
    for (std::size_t v = 0; v < num_nodes_; ++v) {
      std::set<std::int32_t> slots;
      for (const auto& nb : neighbors(static_cast<NodeId>(v))) {
        if (!slots.insert(nb.slot).second) {
          throw std::invalid_argument("node " + std::to_string(v) + " uses slot " +
                                      std::to_string(nb.slot) + " twice");
        }
      }
    }
  }
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t v = 0; v < num_nodes_; ++v) best = std::max(best, degree(static_cast<NodeId>(v)));
  return best;
}

Graph Graph::permuted(std::span<const NodeId> perm) const {
  if (perm.size() != num_nodes_) throw std::invalid_argument("permutation size mismatch");
  std::vector<char> hit(num_nodes_, 0);
  for (NodeId p : perm) {
    if (p >= num_nodes_ || hit[p]) throw std::invalid_argument("not a permutation");
    hit[p] = 1;
  }
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& [u, v] : edges_) edges.emplace_back(perm[u], perm[v]);
  return Graph(num_nodes_, std::move(edges), ports_);
}

std::vector<int> bfs_distances(const Graph& graph, NodeId source) {
  std::vector<int> dist(graph.num_nodes(), -1);
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (const auto& nb : graph.neighbors(v)) {
      if (dist[nb.node] < 0) {
        dist[nb.node] = dist[v] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  return dist;
}

bool is_connected(const Graph& graph) {
  const auto dist = bfs_distances(graph, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

int diameter(const Graph& graph) {
  int best = 0;
  for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
    for (int d : bfs_distances(graph, static_cast<NodeId>(v))) {
      if (d < 0) throw std::invalid_argument("diameter of a disconnected graph");
      best = std::max(best, d);
    }
  }
  return best;
}

}  // namespace graphfsa
