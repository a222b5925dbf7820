#include "graphfsa/aggregation.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace graphfsa {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Largest capped-count table the soft path will allocate for one node.
constexpr std::size_t kMaxSoftDomain = std::size_t{1} << 24;

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (result > limit / base) throw std::overflow_error("aggregation domain too large");
    result *= base;
  }
  return result;
}

std::vector<std::size_t> powers(std::size_t base, std::size_t count) {
  std::vector<std::size_t> out(count, 1);
  for (std::size_t i = 1; i < count; ++i) out[i] = out[i - 1] * base;
  return out;
}

// Distribution over count vectors capped at `cap`, encoded in base cap+1
// with state 0 least significant, for independent neighbors with the given
// state distributions. `layers`, if non-null, receives the distribution
// before each neighbor is folded in.
std::vector<double> capped_count_distribution(std::uint32_t cap, std::size_t num_states,
                                              const std::vector<std::span<const double>>& rows,
                                              std::vector<std::vector<double>>* layers) {
  const std::size_t size = checked_pow(cap + 1, num_states, kMaxSoftDomain);
  const auto pw = powers(cap + 1, num_states);
  std::vector<double> dist(size, 0.0);
  dist[0] = 1.0;
  std::vector<double> next(size);
  for (const auto& p : rows) {
    if (layers) layers->push_back(dist);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t z = 0; z < size; ++z) {
      const double mass = dist[z];
      if (mass == 0.0) continue;
      for (std::size_t m = 0; m < num_states; ++m) {
        const std::size_t digit = (z / pw[m]) % (cap + 1);
        next[digit < cap ? z + pw[m] : z] += mass * p[m];
      }
    }
    dist.swap(next);
  }
  return dist;
}

std::size_t threshold_bits(std::size_t z, std::uint32_t cap, std::size_t num_states) {
  std::size_t bits = 0;
  for (std::size_t m = 0; m < num_states; ++m) {
    if (z % (cap + 1) == cap) bits |= std::size_t{1} << m;
    z /= cap + 1;
  }
  return bits;
}

}  // namespace

SoftStateField SoftStateField::one_hot(std::span<const StateId> states, std::size_t num_states) {
  SoftStateField field(states.size(), num_states);
  for (std::size_t v = 0; v < states.size(); ++v) {
    if (states[v] >= num_states) throw std::invalid_argument("state out of range in one_hot");
    field.row(static_cast<NodeId>(v))[states[v]] = 1.0;
  }
  return field;
}

StateAssignment SoftStateField::argmax() const {
  StateAssignment out(num_nodes_);
  for (std::size_t v = 0; v < num_nodes_; ++v) {
    const auto r = row(static_cast<NodeId>(v));
    out[v] = static_cast<StateId>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

std::string describe(const AggregationScheme& scheme) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Counting& c) { os << "counting:b=" << c.bound; },
                 [&](const Positional& p) { os << "positional:d=" << p.slots << ",fill=" << p.fill; },
                 [&](const AvgThreshold& a) { os << "avg_threshold:tau=" << a.tau; },
             },
             scheme);
  return os.str();
}

std::vector<std::string> check_scheme(const AggregationScheme& scheme, std::size_t num_states) {
  std::vector<std::string> problems;
  if (num_states == 0) problems.emplace_back("num_states must be at least 1");
  std::visit(Overloaded{
                 [&](const Counting& c) {
                   if (c.bound < 1) problems.emplace_back("counting bound must be >= 1");
                 },
                 [&](const Positional& p) {
                   if (p.slots < 1) problems.emplace_back("positional slot count must be >= 1");
                   if (p.fill >= num_states) problems.emplace_back("positional fill state out of range");
                 },
                 [&](const AvgThreshold& a) {
                   if (!(a.tau > 0.0 && a.tau <= 1.0)) problems.emplace_back("tau must lie in (0, 1]");
                 },
             },
             scheme);
  return problems;
}

std::size_t domain_size(const AggregationScheme& scheme, std::size_t num_states) {
  if (num_states == 0) throw std::invalid_argument("num_states must be at least 1");
  const std::size_t limit = std::vector<StateId>().max_size() / num_states;
  return std::visit(Overloaded{
                        [&](const Counting& c) { return checked_pow(c.bound + 1, num_states, limit); },
                        [&](const Positional& p) { return checked_pow(num_states, p.slots, limit); },
                        [&](const AvgThreshold&) { return checked_pow(2, num_states, limit); },
                    },
                    scheme);
}

Aggregator::Aggregator(AggregationScheme scheme, std::size_t num_states)
    : scheme_(scheme), num_states_(num_states) {
  if (const auto problems = check_scheme(scheme_, num_states_); !problems.empty()) {
    throw std::invalid_argument("invalid aggregation scheme: " + problems.front());
  }
  domain_size_ = graphfsa::domain_size(scheme_, num_states_);
  std::visit(Overloaded{
                 [&](const Counting& c) { radix_power_ = powers(c.bound + 1, num_states_); },
                 [&](const Positional& p) { radix_power_ = powers(num_states_, p.slots); },
                 [&](const AvgThreshold&) { radix_power_ = powers(2, num_states_); },
             },
             scheme_);
}

void Aggregator::check_graph(const Graph& graph) const {
  if (const auto* p = std::get_if<Positional>(&scheme_)) {
    if (!graph.has_ports()) {
      throw std::invalid_argument("positional aggregation requires port labels");
    }
    if (graph.slot_span() > p->slots) {
      throw std::invalid_argument("graph uses slot " + std::to_string(graph.slot_span() - 1) +
                                  " but scheme has d=" + std::to_string(p->slots));
    }
  }
}

std::uint32_t Aggregator::avg_cap(std::size_t degree) const {
  const double tau = std::get<AvgThreshold>(scheme_).tau;
  for (std::size_t c = 1; c <= degree; ++c) {
    if (static_cast<double>(c) / static_cast<double>(degree) >= tau) {
      return static_cast<std::uint32_t>(c);
    }
  }
  return static_cast<std::uint32_t>(degree);
}

AggregationValue Aggregator::aggregate(const Graph& graph, NodeId node,
                                       std::span<const StateId> states) const {
  const auto nbs = graph.neighbors(node);
  return std::visit(
      Overloaded{
          [&](const Counting& c) {
            AggregationValue value(num_states_, 0);
            for (const auto& nb : nbs) {
              auto& slot = value[states[nb.node]];
              slot = std::min(slot + 1, c.bound);
            }
            return value;
          },
          [&](const Positional& p) {
            AggregationValue value(p.slots, p.fill);
            for (const auto& nb : nbs) {
              if (nb.slot < 0 || static_cast<std::uint32_t>(nb.slot) >= p.slots) {
                throw std::invalid_argument("positional aggregation: missing or invalid port at node " +
                                            std::to_string(node));
              }
              value[static_cast<std::size_t>(nb.slot)] = states[nb.node];
            }
            return value;
          },
          [&](const AvgThreshold& a) {
            AggregationValue value(num_states_, 0);
            if (nbs.empty()) return value;
            std::vector<std::size_t> counts(num_states_, 0);
            for (const auto& nb : nbs) ++counts[states[nb.node]];
            const double deg = static_cast<double>(nbs.size());
            for (std::size_t m = 0; m < num_states_; ++m) {
              value[m] = static_cast<double>(counts[m]) / deg >= a.tau ? 1 : 0;
            }
            return value;
          },
      },
      scheme_);
}

std::size_t Aggregator::aggregate_index(const Graph& graph, NodeId node,
                                        std::span<const StateId> states) const {
  if (const auto* c = std::get_if<Counting>(&scheme_)) {
    // Hot path: avoid materializing the value vector.
    std::size_t index = 0;
    for (const auto& nb : graph.neighbors(node)) {
      const std::size_t w = radix_power_[states[nb.node]];
      if ((index / w) % (c->bound + 1) < c->bound) index += w;
    }
    return index;
  }
  return to_index(aggregate(graph, node, states));
}

std::size_t Aggregator::to_index(const AggregationValue& value) const {
  return std::visit(
      Overloaded{
          [&](const Counting& c) {
            if (value.size() != num_states_) throw std::out_of_range("counting value has wrong length");
            std::size_t index = 0;
            for (std::size_t m = 0; m < num_states_; ++m) {
              if (value[m] > c.bound) throw std::out_of_range("count exceeds bound");
              index += value[m] * radix_power_[m];
            }
            return index;
          },
          [&](const Positional& p) {
            if (value.size() != p.slots) throw std::out_of_range("positional value has wrong length");
            std::size_t index = 0;
            for (std::size_t s = 0; s < p.slots; ++s) {
              if (value[s] >= num_states_) throw std::out_of_range("slot state out of range");
              index += value[s] * radix_power_[s];
            }
            return index;
          },
          [&](const AvgThreshold&) {
            if (value.size() != num_states_) throw std::out_of_range("threshold value has wrong length");
            std::size_t index = 0;
            for (std::size_t m = 0; m < num_states_; ++m) {
              if (value[m] > 1) throw std::out_of_range("threshold bit must be 0 or 1");
              index += value[m] * radix_power_[m];
            }
            return index;
          },
      },
      scheme_);
}

AggregationValue Aggregator::from_index(std::size_t index) const {
  if (index >= domain_size_) throw std::out_of_range("aggregation index out of range");
  const std::size_t base = std::visit(Overloaded{
                                          [](const Counting& c) -> std::size_t { return c.bound + 1; },
                                          [&](const Positional&) { return num_states_; },
                                          [](const AvgThreshold&) -> std::size_t { return 2; },
                                      },
                                      scheme_);
  AggregationValue value(radix_power_.size());
  for (auto& digit : value) {
    digit = static_cast<std::uint32_t>(index % base);
    index /= base;
  }
  return value;
}

std::vector<double> Aggregator::soft_aggregate(const Graph& graph, NodeId node,
                                               const SoftStateField& field) const {
  const auto nbs = graph.neighbors(node);
  std::vector<std::span<const double>> rows;
  rows.reserve(nbs.size());
  for (const auto& nb : nbs) rows.push_back(field.row(nb.node));

  if (const auto* c = std::get_if<Counting>(&scheme_)) {
    return capped_count_distribution(c->bound, num_states_, rows, nullptr);
  }
  if (const auto* p = std::get_if<Positional>(&scheme_)) {
    std::vector<std::span<const double>> slot_rows(p->slots);
    std::vector<double> fill_row(num_states_, 0.0);
    fill_row[p->fill] = 1.0;
    for (auto& r : slot_rows) r = fill_row;
    for (std::size_t i = 0; i < nbs.size(); ++i) {
      if (nbs[i].slot < 0 || static_cast<std::uint32_t>(nbs[i].slot) >= p->slots) {
        throw std::invalid_argument("positional aggregation: missing or invalid port at node " +
                                    std::to_string(node));
      }
      slot_rows[static_cast<std::size_t>(nbs[i].slot)] = rows[i];
    }
    std::vector<double> out(domain_size_);
    for (std::size_t a = 0; a < domain_size_; ++a) {
      double prob = 1.0;
      std::size_t rest = a;
      for (std::size_t s = 0; s < p->slots && prob != 0.0; ++s) {
        prob *= slot_rows[s][rest % num_states_];
        rest /= num_states_;
      }
      out[a] = prob;
    }
    return out;
  }

  std::vector<double> out(domain_size_, 0.0);
  if (nbs.empty()) {
    out[0] = 1.0;
    return out;
  }
  const std::uint32_t cap = avg_cap(nbs.size());
  const auto counts = capped_count_distribution(cap, num_states_, rows, nullptr);
  for (std::size_t z = 0; z < counts.size(); ++z) {
    out[threshold_bits(z, cap, num_states_)] += counts[z];
  }
  return out;
}

void Aggregator::soft_aggregate_backward(const Graph& graph, NodeId node,
                                         const SoftStateField& field,
                                         std::span<const double> grad_out,
                                         SoftStateField& grad_field) const {
  const auto nbs = graph.neighbors(node);
  if (nbs.empty()) return;

  if (const auto* p = std::get_if<Positional>(&scheme_)) {
    std::vector<const double*> slot_rows(p->slots, nullptr);
    std::vector<std::int64_t> slot_node(p->slots, -1);
    std::vector<double> fill_row(num_states_, 0.0);
    fill_row[p->fill] = 1.0;
    for (auto& r : slot_rows) r = fill_row.data();
    for (const auto& nb : nbs) {
      slot_rows[static_cast<std::size_t>(nb.slot)] = field.row(nb.node).data();
      slot_node[static_cast<std::size_t>(nb.slot)] = nb.node;
    }
    std::vector<std::size_t> digits(p->slots);
    for (std::size_t a = 0; a < domain_size_; ++a) {
      if (grad_out[a] == 0.0) continue;
      std::size_t rest = a;
      for (auto& d : digits) {
        d = rest % num_states_;
        rest /= num_states_;
      }
      for (std::size_t s = 0; s < p->slots; ++s) {
        if (slot_node[s] < 0) continue;
        double others = grad_out[a];
        for (std::size_t r = 0; r < p->slots && others != 0.0; ++r) {
          if (r != s) others *= slot_rows[r][digits[r]];
        }
        grad_field.row(static_cast<NodeId>(slot_node[s]))[digits[s]] += others;
      }
    }
    return;
  }

  std::vector<std::span<const double>> rows;
  rows.reserve(nbs.size());
  for (const auto& nb : nbs) rows.push_back(field.row(nb.node));

  const bool counting = std::holds_alternative<Counting>(scheme_);
  const std::uint32_t cap = counting ? std::get<Counting>(scheme_).bound : avg_cap(nbs.size());
  std::vector<std::vector<double>> layers;
  layers.reserve(nbs.size());
  const auto final_dist = capped_count_distribution(cap, num_states_, rows, &layers);
  const std::size_t size = final_dist.size();
  const auto pw = powers(cap + 1, num_states_);

  std::vector<double> grad(size);
  if (counting) {
    std::copy(grad_out.begin(), grad_out.end(), grad.begin());
  } else {
    for (std::size_t z = 0; z < size; ++z) grad[z] = grad_out[threshold_bits(z, cap, num_states_)];
  }

  std::vector<double> grad_prev(size);
  for (std::size_t k = nbs.size(); k-- > 0;) {
    const auto& before = layers[k];
    const auto p = rows[k];
    auto grad_row = grad_field.row(nbs[k].node);
    std::fill(grad_prev.begin(), grad_prev.end(), 0.0);
    for (std::size_t z = 0; z < size; ++z) {
      for (std::size_t m = 0; m < num_states_; ++m) {
        const std::size_t digit = (z / pw[m]) % (cap + 1);
        const double g = grad[digit < cap ? z + pw[m] : z];
        grad_row[m] += before[z] * g;
        grad_prev[z] += p[m] * g;
      }
    }
    grad.swap(grad_prev);
  }
}

AggregationValue aggregate(const AggregationScheme& scheme, std::size_t num_states,
                           const Graph& graph, NodeId node, std::span<const StateId> states) {
  return Aggregator(scheme, num_states).aggregate(graph, node, states);
}

std::size_t to_index(const AggregationScheme& scheme, std::size_t num_states,
                     const AggregationValue& value) {
  return Aggregator(scheme, num_states).to_index(value);
}

AggregationValue from_index(const AggregationScheme& scheme, std::size_t num_states,
                            std::size_t index) {
  return Aggregator(scheme, num_states).from_index(index);
}

std::vector<double> soft_aggregate(const AggregationScheme& scheme, std::size_t num_states,
                                   const Graph& graph, NodeId node, const SoftStateField& field) {
  return Aggregator(scheme, num_states).soft_aggregate(graph, node, field);
}

}  // namespace graphfsa
