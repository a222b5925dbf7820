#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "graphfsa/aggregation.hpp"
#include "graphfsa/fsa.hpp"
#include "graphfsa/graph.hpp"
#include "graphfsa/rng.hpp"

namespace graphfsa {

struct Example {
  Graph graph;
  StateAssignment inputs;
  StateAssignment targets;
  std::uint32_t steps = 0;
};

using Dataset = std::vector<Example>;

/// Dataset split keyed by the graph size it was generated for.
struct SizedDataset {
  std::size_t size = 0;
  Dataset examples;
};

// Graph families. Paths, cycles and grids carry port labels: paths and
// cycles use left=0/right=1; square grids use compass order starting at
// north and going clockwise (N,E,S,W or N,NE,E,SE,S,SW,W,NW); hex grids use
// the neighbor order of ca::hex_life_step.
struct PathDist {
  std::size_t n = 10;
};
struct CycleDist {
  std::size_t n = 10;
};
struct TreeDist {
  std::size_t n = 10;
};
struct GridDist {
  std::size_t rows = 4;
  std::size_t cols = 4;
  bool moore = true;
  bool toroidal = false;
};
struct HexGridDist {
  std::size_t rows = 4;
  std::size_t cols = 4;
};
struct ErdosRenyiDist {
  std::size_t n = 10;
  double p = 0.3;
};
struct RegularDist {
  std::size_t n = 10;
  std::size_t d = 3;
};
struct CompleteDist {
  std::size_t n = 10;
};

using GraphDistribution = std::variant<PathDist, CycleDist, TreeDist, GridDist, HexGridDist,
                                       ErdosRenyiDist, RegularDist, CompleteDist>;

std::string describe(const GraphDistribution& dist);

/// Same family scaled to roughly `n` nodes (grids become ceil(sqrt n) square).
GraphDistribution resized(const GraphDistribution& dist, std::size_t n);

/// Connected sample. Throws std::invalid_argument on bad parameters and
/// std::runtime_error when rejection sampling exhausts its retries.
Graph sample_graph(const GraphDistribution& dist, Rng& rng);

Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph grid_graph(std::size_t rows, std::size_t cols, bool moore, bool toroidal);
Graph hex_grid_graph(std::size_t rows, std::size_t cols);
Graph complete_graph(std::size_t n);

// ---------------------------------------------------------------------------
// GRAB: random ground-truth automata.

struct GrabSpec {
  std::size_t num_states = 4;
  std::size_t num_start = 2;
  std::size_t num_final = 2;
  AggregationScheme scheme = Counting{1};
  GraphDistribution distribution = TreeDist{};
  std::vector<std::size_t> train_sizes{4, 5, 6, 7, 8, 9, 10};
  std::vector<std::size_t> extra_sizes{10, 20, 50, 100};
  std::size_t examples_per_size = 100;
  std::uint32_t max_offset = 3;
  std::uint64_t seed = 0;
};

std::vector<std::string> check_grab_spec(const GrabSpec& spec);

/// Final states are 0..F-1, starting states F..F+S-1, the rest hidden.
/// Non-final rows draw every entry uniformly from all states.
GraphFSA random_fsa(const GrabSpec& spec, Rng& rng);

struct GrabData {
  GraphFSA fsa;
  Dataset train;
  Dataset validation;
  std::vector<SizedDataset> extrapolation;
};

GrabData make_grab_dataset(const GrabSpec& spec);

/// One example: inputs uniform over the starting states, steps =
/// diameter + U[0, max_offset], targets from running `fsa`.
Example grab_example(const GraphFSA& fsa, const GraphDistribution& dist, std::uint32_t max_offset,
                     Rng& rng);

// ---------------------------------------------------------------------------
// Cellular automata.

/// Elementary rule: |M|=2, positional d=2 (left, right), fill 0.
GraphFSA ca_rule_fsa(std::uint32_t rule);

enum class LifeVariant { square, hex };
/// Game of Life: dead=0, alive=1, counting b=5.
GraphFSA gol_fsa(LifeVariant variant);
/// WireWorld: empty=0, head=1, tail=2, conductor=3, counting b=3.
GraphFSA wireworld_fsa();

enum class CaKind { life, hex_life, wireworld, elementary };

struct CaTask {
  CaKind kind = CaKind::life;
  std::uint32_t rule = 30;  // elementary only
  bool toroidal = false;    // life, wireworld, elementary (cyclic path)

  std::string name() const;
};

/// Parses gol, gol-torus, gol-hex, wireworld, wireworld-torus, ca1d:<rule>
/// and ca1d-cyclic:<rule>.
CaTask parse_ca_task(const std::string& name);

GraphFSA ca_task_fsa(const CaTask& task);

/// Board graph for a task; elementary tasks use `cols` as the path length.
Graph ca_graph(const CaTask& task, std::size_t rows, std::size_t cols);

/// Targets from the direct-rule simulator applied `steps` times.
StateAssignment ca_reference_run(const CaTask& task, std::size_t rows, std::size_t cols,
                                 StateAssignment states, std::size_t steps);

Dataset ca_dataset(const CaTask& task, std::size_t rows, std::size_t cols, std::uint32_t steps,
                   std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Graph algorithm tasks.

enum class AlgorithmTask { distance, root_value, path_finding, prefix_sum };

std::string task_name(AlgorithmTask task);
std::optional<AlgorithmTask> parse_algorithm_task(const std::string& name);

struct TaskStates {
  std::size_t num_states;
  std::vector<StateId> starting;
  std::vector<StateId> final_states;
  std::vector<std::string> names;
};

/// Final states come first: f0 = 0, f1 = 1.
///   distance:     s0 = 2 (non-root), s1 = 3 (root)
///   root_value:   root-0 = 2, root-1 = 3, other-0 = 4, other-1 = 5
///   path_finding: s0 = 2 (unmarked), s1 = 3 (marked)
///   prefix_sum:   b0 = 2, b1 = 3 (node bit)
TaskStates task_states(AlgorithmTask task);

struct AlgorithmOptions {
  bool prefix_inclusive = true;
  std::uint32_t max_offset = 3;
  /// Added to every example's step count on top of diameter + offset.
  std::uint32_t extra_steps = 0;
};

Example algorithm_example(AlgorithmTask task, std::size_t n, const AlgorithmOptions& options,
                          Rng& rng);

std::vector<SizedDataset> algorithm_dataset(AlgorithmTask task, const std::vector<std::size_t>& sizes,
                                            std::size_t count, std::uint64_t seed,
                                            const AlgorithmOptions& options = {});

/// Concatenates the examples of every split, in order.
Dataset flatten(const std::vector<SizedDataset>& splits);

}  // namespace graphfsa
