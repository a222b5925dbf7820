#include "graphfsa/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "graphfsa/ca_reference.hpp"

namespace graphfsa {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr int kMaxRejections = 1000;

// Seed streams, one per independent random quantity.
enum Stream : std::uint64_t {
  kFsaStream = 1,
  kTrainStream = 2,
  kValidationStream = 3,
  kExtraStream = 4,
  kCaStream = 5,
  kAlgorithmStream = 6,
};

std::uint64_t size_stream(std::uint64_t base, std::size_t size) {
  return mix64(base * 0x100000001b3ULL + size);
}

Graph tree_graph(std::size_t n, Rng& rng) {
  std::vector<NodeId> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = static_cast<NodeId>(i);
  rng.shuffle(label);
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    edges.emplace_back(label[rng.uniform(i)], label[i]);
  }
  return Graph(n, std::move(edges));
}

Graph erdos_renyi_graph(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (rng.bernoulli(p)) edges.emplace_back(u, v);
      }
    }
    Graph g(n, std::move(edges));
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("no connected Erdos-Renyi sample within retry cap");
}

Graph regular_graph(std::size_t n, std::size_t d, Rng& rng) {
  if (d >= n || (n * d) % 2 != 0 || d == 0) {
    throw std::invalid_argument("regular graph needs 0 < d < n and n*d even");
  }
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::vector<NodeId> stubs;
    for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
    rng.shuffle(stubs);
    std::set<Edge> seen;
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      const NodeId u = std::min(stubs[i], stubs[i + 1]);
      const NodeId v = std::max(stubs[i], stubs[i + 1]);
      if (u == v || !seen.insert({u, v}).second) {
        simple = false;
        break;
      }
    }
    if (!simple) continue;
    Graph g(n, std::vector<Edge>(seen.begin(), seen.end()));
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("no simple connected regular sample within retry cap");
}

std::size_t side_for(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
}

StateAssignment uniform_states(std::size_t n, const std::vector<StateId>& choices, Rng& rng) {
  StateAssignment out(n);
  for (auto& s : out) s = choices[rng.uniform(choices.size())];
  return out;
}

std::uint32_t steps_for(const Graph& g, std::uint32_t max_offset, Rng& rng) {
  return static_cast<std::uint32_t>(diameter(g)) +
         static_cast<std::uint32_t>(rng.uniform_int(0, max_offset));
}

}  // namespace

std::string describe(const GraphDistribution& dist) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const PathDist& d) { os << "path(n=" << d.n << ")"; },
                 [&](const CycleDist& d) { os << "cycle(n=" << d.n << ")"; },
                 [&](const TreeDist& d) { os << "tree(n=" << d.n << ")"; },
                 [&](const GridDist& d) {
                   os << "grid(" << d.rows << "x" << d.cols << (d.moore ? ",moore" : ",von_neumann")
                      << (d.toroidal ? ",toroidal" : "") << ")";
                 },
                 [&](const HexGridDist& d) { os << "hex(" << d.rows << "x" << d.cols << ")"; },
                 [&](const ErdosRenyiDist& d) { os << "erdos_renyi(n=" << d.n << ",p=" << d.p << ")"; },
                 [&](const RegularDist& d) { os << "regular(n=" << d.n << ",d=" << d.d << ")"; },
                 [&](const CompleteDist& d) { os << "complete(n=" << d.n << ")"; },
             },
             dist);
  return os.str();
}

GraphDistribution resized(const GraphDistribution& dist, std::size_t n) {
  return std::visit(Overloaded{
                        [&](PathDist d) -> GraphDistribution { return d.n = n, d; },
                        [&](CycleDist d) -> GraphDistribution { return d.n = n, d; },
                        [&](TreeDist d) -> GraphDistribution { return d.n = n, d; },
                        [&](GridDist d) -> GraphDistribution {
                          d.rows = d.cols = side_for(n);
                          return d;
                        },
                        [&](HexGridDist d) -> GraphDistribution {
                          d.rows = d.cols = side_for(n);
                          return d;
                        },
                        [&](ErdosRenyiDist d) -> GraphDistribution { return d.n = n, d; },
                        [&](RegularDist d) -> GraphDistribution { return d.n = n, d; },
                        [&](CompleteDist d) -> GraphDistribution { return d.n = n, d; },
                    },
                    dist);
}

Graph sample_graph(const GraphDistribution& dist, Rng& rng) {
  return std::visit(Overloaded{
                        [&](const PathDist& d) { return path_graph(d.n); },
                        [&](const CycleDist& d) { return cycle_graph(d.n); },
                        [&](const TreeDist& d) {
                          if (d.n < 1) throw std::invalid_argument("tree needs n >= 1");
                          return tree_graph(d.n, rng);
                        },
                        [&](const GridDist& d) { return grid_graph(d.rows, d.cols, d.moore, d.toroidal); },
                        [&](const HexGridDist& d) { return hex_grid_graph(d.rows, d.cols); },
                        [&](const ErdosRenyiDist& d) {
                          if (d.n < 1) throw std::invalid_argument("Erdos-Renyi needs n >= 1");
                          return erdos_renyi_graph(d.n, d.p, rng);
                        },
                        [&](const RegularDist& d) { return regular_graph(d.n, d.d, rng); },
                        [&](const CompleteDist& d) { return complete_graph(d.n); },
                    },
                    dist);
}

Graph path_graph(std::size_t n) {
  if (n < 1) throw std::invalid_argument("path needs n >= 1");
  std::vector<Edge> edges;
  std::vector<PortPair> ports;
  for (NodeId i = 0; i + 1 < n; ++i) {
    edges.emplace_back(i, i + 1);
    ports.push_back({1, 0});
  }
  return Graph(n, std::move(edges), std::move(ports));
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  std::vector<Edge> edges;
  std::vector<PortPair> ports;
  for (NodeId i = 0; i < n; ++i) {
    edges.emplace_back(i, static_cast<NodeId>((i + 1) % n));
    ports.push_back({1, 0});
  }
  return Graph(n, std::move(edges), std::move(ports));
}

Graph grid_graph(std::size_t rows, std::size_t cols, bool moore, bool toroidal) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid needs positive dimensions");
  if (toroidal && (rows < 3 || cols < 3)) {
    throw std::invalid_argument("toroidal grid needs at least 3 rows and columns");
  }
  // Forward directions only; each edge is added once, from its first endpoint.
  struct Dir {
    int dr, dc;
    std::uint32_t slot, opposite;
  };
  const std::vector<Dir> dirs = moore ? std::vector<Dir>{{0, 1, 2, 6}, {1, 1, 3, 7}, {1, 0, 4, 0}, {1, -1, 5, 1}}
                                      : std::vector<Dir>{{0, 1, 1, 3}, {1, 0, 2, 0}};
  std::vector<Edge> edges;
  std::vector<PortPair> ports;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      for (const auto& d : dirs) {
        long rr = static_cast<long>(r) + d.dr;
        long cc = static_cast<long>(c) + d.dc;
        if (toroidal) {
          rr = (rr + static_cast<long>(rows)) % static_cast<long>(rows);
          cc = (cc + static_cast<long>(cols)) % static_cast<long>(cols);
        } else if (rr < 0 || cc < 0 || rr >= static_cast<long>(rows) || cc >= static_cast<long>(cols)) {
          continue;
        }
        edges.emplace_back(static_cast<NodeId>(r * cols + c),
                           static_cast<NodeId>(static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc)));
        ports.push_back({d.slot, d.opposite});
      }
    }
  }
  return Graph(rows * cols, std::move(edges), std::move(ports));
}

Graph hex_grid_graph(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("hex grid needs positive dimensions");
  // Slots: 0 (0,-1), 1 (0,+1), 2 (-1,0), 3 (-1,+1), 4 (+1,-1), 5 (+1,0).
  struct Dir {
    int dr, dc;
    std::uint32_t slot, opposite;
  };
  const Dir dirs[] = {{0, 1, 1, 0}, {1, -1, 4, 3}, {1, 0, 5, 2}};
  std::vector<Edge> edges;
  std::vector<PortPair> ports;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      for (const auto& d : dirs) {
        const long rr = static_cast<long>(r) + d.dr;
        const long cc = static_cast<long>(c) + d.dc;
        if (rr < 0 || cc < 0 || rr >= static_cast<long>(rows) || cc >= static_cast<long>(cols)) continue;
        edges.emplace_back(static_cast<NodeId>(r * cols + c),
                           static_cast<NodeId>(static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc)));
        ports.push_back({d.slot, d.opposite});
      }
    }
  }
  return Graph(rows * cols, std::move(edges), std::move(ports));
}

Graph complete_graph(std::size_t n) {
  if (n < 1) throw std::invalid_argument("complete graph needs n >= 1");
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, std::move(edges));
}

// ---------------------------------------------------------------------------

std::vector<std::string> check_grab_spec(const GrabSpec& spec) {
  std::vector<std::string> problems = check_scheme(spec.scheme, spec.num_states);
  if (spec.num_start < 1) problems.emplace_back("need at least one starting state");
  if (spec.num_final < 1) problems.emplace_back("need at least one final state");
  if (spec.num_start + spec.num_final > spec.num_states) {
    problems.emplace_back("starting and final states must be disjoint and fit in num_states");
  }
  if (spec.train_sizes.empty()) problems.emplace_back("train_sizes is empty");
  return problems;
}

GraphFSA random_fsa(const GrabSpec& spec, Rng& rng) {
  if (const auto problems = check_grab_spec(spec); !problems.empty()) {
    throw std::invalid_argument("invalid GRAB spec: " + problems.front());
  }
  GraphFSA fsa;
  fsa.num_states = spec.num_states;
  fsa.scheme = spec.scheme;
  for (StateId f = 0; f < spec.num_final; ++f) fsa.final_states.push_back(f);
  for (std::size_t s = 0; s < spec.num_start; ++s) {
    fsa.starting.push_back(static_cast<StateId>(spec.num_final + s));
  }
  const std::size_t z = fsa.domain_size();
  fsa.table.resize(spec.num_states * z);
  for (std::size_t m = 0; m < spec.num_states; ++m) {
    const bool absorbing = m < spec.num_final;
    for (std::size_t a = 0; a < z; ++a) {
      fsa.table[m * z + a] = absorbing ? static_cast<StateId>(m)
                                       : static_cast<StateId>(rng.uniform(spec.num_states));
    }
  }
  return fsa;
}

Example grab_example(const GraphFSA& fsa, const GraphDistribution& dist, std::uint32_t max_offset,
                     Rng& rng) {
  Graph graph = sample_graph(dist, rng);
  StateAssignment inputs = uniform_states(graph.num_nodes(), fsa.starting, rng);
  const std::uint32_t steps = steps_for(graph, max_offset, rng);
  StateAssignment targets = run(fsa, graph, inputs, steps).states;
  return Example{std::move(graph), std::move(inputs), std::move(targets), steps};
}

GrabData make_grab_dataset(const GrabSpec& spec) {
  Rng fsa_rng(child_seed(spec.seed, kFsaStream, 0));
  GrabData data{random_fsa(spec, fsa_rng), {}, {}, {}};

  auto generate = [&](std::uint64_t stream, std::size_t size, Dataset& out) {
    const auto dist = resized(spec.distribution, size);
    for (std::size_t i = 0; i < spec.examples_per_size; ++i) {
      Rng rng(child_seed(spec.seed, size_stream(stream, size), i));
      out.push_back(grab_example(data.fsa, dist, spec.max_offset, rng));
    }
  };
  for (std::size_t n : spec.train_sizes) {
    generate(kTrainStream, n, data.train);
    generate(kValidationStream, n, data.validation);
  }
  for (std::size_t n : spec.extra_sizes) {
    SizedDataset split{n, {}};
    generate(kExtraStream, n, split.examples);
    data.extrapolation.push_back(std::move(split));
  }
  return data;
}

// ---------------------------------------------------------------------------

GraphFSA ca_rule_fsa(std::uint32_t rule) {
  if (rule > 255) throw std::invalid_argument("elementary rule must be in [0, 256)");
  GraphFSA fsa;
  fsa.num_states = 2;
  fsa.starting = {0, 1};
  fsa.scheme = Positional{2, 0};
  const Aggregator agg(fsa.scheme, 2);
  fsa.table.resize(2 * agg.domain_size());
  for (std::uint32_t self = 0; self < 2; ++self) {
    for (std::size_t a = 0; a < agg.domain_size(); ++a) {
      const auto value = agg.from_index(a);
      const std::uint32_t left = value[0];
      const std::uint32_t right = value[1];
      fsa.table[self * agg.domain_size() + a] = (rule >> (left * 4 + self * 2 + right)) & 1U;
    }
  }
  return fsa;
}

GraphFSA gol_fsa(LifeVariant /*variant*/) {
  // Both variants use B3/S23; only the neighborhood shape differs.
  GraphFSA fsa;
  fsa.num_states = 2;
  fsa.starting = {0, 1};
  fsa.scheme = Counting{5};
  const Aggregator agg(fsa.scheme, 2);
  fsa.table.resize(2 * agg.domain_size());
  for (std::uint32_t self = 0; self < 2; ++self) {
    for (std::size_t a = 0; a < agg.domain_size(); ++a) {
      const std::uint32_t alive = agg.from_index(a)[1];
      const bool next = self == 1 ? (alive == 2 || alive == 3) : alive == 3;
      fsa.table[self * agg.domain_size() + a] = next ? 1 : 0;
    }
  }
  return fsa;
}

GraphFSA wireworld_fsa() {
  GraphFSA fsa;
  fsa.num_states = 4;
  fsa.starting = {0, 1, 2, 3};
  fsa.scheme = Counting{3};
  const Aggregator agg(fsa.scheme, 4);
  const std::size_t z = agg.domain_size();
  fsa.table.resize(4 * z);
  for (std::size_t a = 0; a < z; ++a) {
    const std::uint32_t heads = agg.from_index(a)[ca::kHead];
    fsa.table[ca::kEmpty * z + a] = ca::kEmpty;
    fsa.table[ca::kHead * z + a] = ca::kTail;
    fsa.table[ca::kTail * z + a] = ca::kConductor;
    fsa.table[ca::kConductor * z + a] = (heads == 1 || heads == 2) ? ca::kHead : ca::kConductor;
  }
  return fsa;
}

std::string CaTask::name() const {
  switch (kind) {
    case CaKind::life:
      return toroidal ? "gol-torus" : "gol";
    case CaKind::hex_life:
      return "gol-hex";
    case CaKind::wireworld:
      return toroidal ? "wireworld-torus" : "wireworld";
    case CaKind::elementary:
      return (toroidal ? "ca1d-cyclic:" : "ca1d:") + std::to_string(rule);
  }
  return "unknown";
}

CaTask parse_ca_task(const std::string& name) {
  if (name == "gol") return {CaKind::life, 0, false};
  if (name == "gol-torus") return {CaKind::life, 0, true};
  if (name == "gol-hex") return {CaKind::hex_life, 0, false};
  if (name == "wireworld") return {CaKind::wireworld, 0, false};
  if (name == "wireworld-torus") return {CaKind::wireworld, 0, true};
  for (const auto& [prefix, cyclic] : {std::pair{std::string("ca1d:"), false}, {std::string("ca1d-cyclic:"), true}}) {
    if (name.rfind(prefix, 0) == 0) {
      const std::string digits = name.substr(prefix.size());
      std::size_t used = 0;
      unsigned long rule = 0;
      try {
        rule = std::stoul(digits, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (digits.empty() || used != digits.size() || rule > 255) {
        throw std::invalid_argument("bad elementary rule in task '" + name + "'");
      }
      return {CaKind::elementary, static_cast<std::uint32_t>(rule), cyclic};
    }
  }
  throw std::invalid_argument("unknown cellular automaton task '" + name + "'");
}

GraphFSA ca_task_fsa(const CaTask& task) {
  switch (task.kind) {
    case CaKind::life:
      return gol_fsa(LifeVariant::square);
    case CaKind::hex_life:
      return gol_fsa(LifeVariant::hex);
    case CaKind::wireworld:
      return wireworld_fsa();
    case CaKind::elementary:
      return ca_rule_fsa(task.rule);
  }
  throw std::logic_error("unreachable");
}

Graph ca_graph(const CaTask& task, std::size_t rows, std::size_t cols) {
  switch (task.kind) {
    case CaKind::life:
    case CaKind::wireworld:
      return grid_graph(rows, cols, true, task.toroidal);
    case CaKind::hex_life:
      return hex_grid_graph(rows, cols);
    case CaKind::elementary:
      return task.toroidal ? cycle_graph(cols) : path_graph(cols);
  }
  throw std::logic_error("unreachable");
}

StateAssignment ca_reference_run(const CaTask& task, std::size_t rows, std::size_t cols,
                                 StateAssignment states, std::size_t steps) {
  for (std::size_t t = 0; t < steps; ++t) {
    switch (task.kind) {
      case CaKind::life:
        states = ca::life_step(states, rows, cols, task.toroidal);
        break;
      case CaKind::hex_life:
        states = ca::hex_life_step(states, rows, cols);
        break;
      case CaKind::wireworld:
        states = ca::wireworld_step(states, rows, cols, task.toroidal);
        break;
      case CaKind::elementary:
        states = ca::elementary_step(states, task.rule, task.toroidal, 0);
        break;
    }
  }
  return states;
}

Dataset ca_dataset(const CaTask& task, std::size_t rows, std::size_t cols, std::uint32_t steps,
                   std::size_t count, std::uint64_t seed) {
  const Graph graph = ca_graph(task, rows, cols);
  const std::size_t num_states = task.kind == CaKind::wireworld ? 4 : 2;
  std::vector<StateId> choices(num_states);
  for (StateId s = 0; s < num_states; ++s) choices[s] = s;
  const std::size_t board_rows = task.kind == CaKind::elementary ? 1 : rows;

  Dataset out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(child_seed(seed, kCaStream, i));
    StateAssignment inputs = uniform_states(graph.num_nodes(), choices, rng);
    StateAssignment targets = ca_reference_run(task, board_rows, cols, inputs, steps);
    out.push_back(Example{graph, std::move(inputs), std::move(targets), steps});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string task_name(AlgorithmTask task) {
  switch (task) {
    case AlgorithmTask::distance:
      return "distance";
    case AlgorithmTask::root_value:
      return "rootvalue";
    case AlgorithmTask::path_finding:
      return "pathfinding";
    case AlgorithmTask::prefix_sum:
      return "prefixsum";
  }
  return "unknown";
}

std::optional<AlgorithmTask> parse_algorithm_task(const std::string& name) {
  for (auto task : {AlgorithmTask::distance, AlgorithmTask::root_value, AlgorithmTask::path_finding,
                    AlgorithmTask::prefix_sum}) {
    if (task_name(task) == name) return task;
  }
  return std::nullopt;
}

TaskStates task_states(AlgorithmTask task) {
  switch (task) {
    case AlgorithmTask::distance:
      return {4, {2, 3}, {0, 1}, {"f0", "f1", "s0", "s1"}};
    case AlgorithmTask::root_value:
      return {6, {2, 3, 4, 5}, {0, 1}, {"f0", "f1", "r0", "r1", "o0", "o1"}};
    case AlgorithmTask::path_finding:
      return {4, {2, 3}, {0, 1}, {"f0", "f1", "s0", "s1"}};
    case AlgorithmTask::prefix_sum:
      return {4, {2, 3}, {0, 1}, {"f0", "f1", "b0", "b1"}};
  }
  throw std::logic_error("unreachable");
}

Example algorithm_example(AlgorithmTask task, std::size_t n, const AlgorithmOptions& options,
                          Rng& rng) {
  if (n < 2) throw std::invalid_argument("algorithm tasks need graphs with at least 2 nodes");
  switch (task) {
    case AlgorithmTask::distance: {
      Graph graph = tree_graph(n, rng);
      const auto root = static_cast<NodeId>(rng.uniform(n));
      StateAssignment inputs(n, 2);
      inputs[root] = 3;
      const auto dist = bfs_distances(graph, root);
      StateAssignment targets(n);
      for (std::size_t v = 0; v < n; ++v) targets[v] = static_cast<StateId>(dist[v] % 2);
      const auto steps = steps_for(graph, options.max_offset, rng) + options.extra_steps;
      return {std::move(graph), std::move(inputs), std::move(targets), steps};
    }
    case AlgorithmTask::root_value: {
      Graph graph = path_graph(n);
      const auto root = static_cast<NodeId>(rng.uniform(n));
      StateAssignment inputs(n);
      for (std::size_t v = 0; v < n; ++v) {
        const auto bit = static_cast<StateId>(rng.uniform(2));
        inputs[v] = (v == root ? 2 : 4) + bit;
      }
      StateAssignment targets(n, inputs[root] - 2);
      const auto steps = steps_for(graph, options.max_offset, rng) + options.extra_steps;
      return {std::move(graph), std::move(inputs), std::move(targets), steps};
    }
    case AlgorithmTask::path_finding: {
      Graph graph = tree_graph(n, rng);
      const auto a = static_cast<NodeId>(rng.uniform(n));
      auto b = static_cast<NodeId>(rng.uniform(n - 1));
      if (b >= a) ++b;
      StateAssignment inputs(n, 2);
      inputs[a] = inputs[b] = 3;
      // Walk parent pointers of a BFS tree rooted at a, starting from b.
      std::vector<NodeId> parent(n, a);
      std::vector<char> seen(n, 0);
      std::vector<NodeId> queue{a};
      seen[a] = 1;
      for (std::size_t i = 0; i < queue.size(); ++i) {
        for (const auto& nb : graph.neighbors(queue[i])) {
          if (!seen[nb.node]) {
            seen[nb.node] = 1;
            parent[nb.node] = queue[i];
            queue.push_back(nb.node);
          }
        }
      }
      StateAssignment targets(n, 0);
      for (NodeId v = b;; v = parent[v]) {
        targets[v] = 1;
        if (v == a) break;
      }
      const auto steps = steps_for(graph, options.max_offset, rng) + options.extra_steps;
      return {std::move(graph), std::move(inputs), std::move(targets), steps};
    }
    case AlgorithmTask::prefix_sum: {
      Graph graph = path_graph(n);
      StateAssignment inputs(n);
      for (auto& s : inputs) s = 2 + static_cast<StateId>(rng.uniform(2));
      StateAssignment targets(n);
      StateId parity = 0;
      for (std::size_t v = n; v-- > 0;) {
        const StateId bit = inputs[v] - 2;
        targets[v] = options.prefix_inclusive ? (parity ^ bit) : parity;
        parity ^= bit;
      }
      const auto steps = steps_for(graph, options.max_offset, rng) + options.extra_steps;
      return {std::move(graph), std::move(inputs), std::move(targets), steps};
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<SizedDataset> algorithm_dataset(AlgorithmTask task, const std::vector<std::size_t>& sizes,
                                            std::size_t count, std::uint64_t seed,
                                            const AlgorithmOptions& options) {
  std::vector<SizedDataset> out;
  for (std::size_t n : sizes) {
    if (n < 2) throw std::invalid_argument("algorithm dataset sizes must be >= 2");
    SizedDataset split{n, {}};
    split.examples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      Rng rng(child_seed(seed, size_stream(kAlgorithmStream + static_cast<std::uint64_t>(task) * 16, n), i));
      split.examples.push_back(algorithm_example(task, n, options, rng));
    }
    out.push_back(std::move(split));
  }
  return out;
}

Dataset flatten(const std::vector<SizedDataset>& splits) {
  Dataset out;
  for (const auto& s : splits) out.insert(out.end(), s.examples.begin(), s.examples.end());
  return out;
}

}  // namespace graphfsa
