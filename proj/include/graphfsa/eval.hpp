#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "graphfsa/datasets.hpp"
#include "graphfsa/fsa.hpp"

namespace graphfsa {

/// Fraction of nodes whose predicted state equals the target.
double node_accuracy(const StateAssignment& pred, const StateAssignment& target);

struct EvalRow {
  std::size_t key = 0;  // graph size or step count
  double mean_acc = 0.0;
  double std_acc = 0.0;  // population std over examples (or seeds)
  std::size_t n_examples = 0;
};

struct EvalReport {
  std::string key_name = "size_or_t";
  std::vector<EvalRow> rows;

  void write_csv(std::ostream& os) const;
  void write_table(std::ostream& os) const;
};

/// Runs `fsa` for `steps_override` (or each example's own steps) and
/// summarizes per-example node accuracy.
EvalRow evaluate(const GraphFSA& fsa, const Dataset& dataset,
                 std::optional<std::size_t> steps_override = std::nullopt);

EvalReport evaluate_splits(const GraphFSA& fsa, const std::vector<SizedDataset>& splits);

/// For each t, scores `fsa` after t steps against direct-rule ground truth
/// on `count` fresh random boards.
EvalReport iteration_stability_sweep(const GraphFSA& fsa, const CaTask& task, std::size_t rows,
                                     std::size_t cols, const std::vector<std::size_t>& step_list,
                                     std::size_t count, std::uint64_t seed);

/// Mean and population standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Color refinement.

/// Class id per node, canonical: ids are assigned in first-occurrence order.
using Partition = std::vector<std::uint32_t>;

Partition canonicalize(const std::vector<std::uint32_t>& labels);

/// Classic 1-WL: new color = (old color, sorted multiset of neighbor colors).
Partition wl_refinement(const Graph& graph, std::size_t rounds);

/// As 1-WL, but neighbors are seen only through the scheme's aggregation
/// of their colors (colors re-indexed each round and treated as states).
Partition bounded_refinement(const Graph& graph, const AggregationScheme& scheme, std::size_t rounds);

/// True iff finer(u) == finer(v) implies coarser(u) == coarser(v).
bool partition_refines(const Partition& finer, const Partition& coarser);

std::size_t class_count(const Partition& partition);

/// Two hubs joined by an edge, carrying 2 and 3 leaves respectively.
/// Node 0 is the 2-leaf hub and node 1 the 3-leaf hub.
Graph two_vs_three_hub_graph();

}  // namespace graphfsa
