#include "graphfsa/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "graphfsa/rng.hpp"

namespace graphfsa {

double node_accuracy(const StateAssignment& pred, const StateAssignment& target) {
  if (pred.size() != target.size()) throw std::invalid_argument("prediction/target length mismatch");
  if (pred.empty()) return 1.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == target[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

void EvalReport::write_csv(std::ostream& os) const {
  os << key_name << ",mean_acc,std_acc,n_examples\n";
  for (const auto& r : rows) {
    os << r.key << ',' << std::setprecision(6) << std::fixed << r.mean_acc << ',' << r.std_acc << ','
       << r.n_examples << '\n';
  }
  os.unsetf(std::ios::fixed);
}

void EvalReport::write_table(std::ostream& os) const {
  os << std::left << std::setw(10) << key_name << std::setw(20) << "accuracy" << "examples\n";
  for (const auto& r : rows) {
    std::ostringstream acc;
    acc << std::fixed << std::setprecision(2) << r.mean_acc << " +- " << r.std_acc;
    os << std::left << std::setw(10) << r.key << std::setw(20) << acc.str() << r.n_examples << '\n';
  }
}

EvalRow evaluate(const GraphFSA& fsa, const Dataset& dataset, std::optional<std::size_t> steps_override) {
  std::vector<double> accs;
  accs.reserve(dataset.size());
  for (const auto& ex : dataset) {
    const auto out = run(fsa, ex.graph, ex.inputs, steps_override.value_or(ex.steps)).states;
    accs.push_back(node_accuracy(out, ex.targets));
  }
  const auto [mean, sd] = mean_std(accs);
  return {steps_override.value_or(0), mean, sd, dataset.size()};
}

EvalReport evaluate_splits(const GraphFSA& fsa, const std::vector<SizedDataset>& splits) {
  EvalReport report;
  report.key_name = "size";
  for (const auto& split : splits) {
    auto row = evaluate(fsa, split.examples);
    row.key = split.size;
    report.rows.push_back(row);
  }
  return report;
}

EvalReport iteration_stability_sweep(const GraphFSA& fsa, const CaTask& task, std::size_t rows,
                                     std::size_t cols, const std::vector<std::size_t>& step_list,
                                     std::size_t count, std::uint64_t seed) {
  if (step_list.empty()) throw std::invalid_argument("step list is empty");
  EvalReport report;
  report.key_name = "t";
  for (std::size_t t : step_list) {
    const auto data = ca_dataset(task, rows, cols, static_cast<std::uint32_t>(t), count,
                                 child_seed(seed, 0x5157, t));
    auto row = evaluate(fsa, data);
    row.key = t;
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------

Partition canonicalize(const std::vector<std::uint32_t>& labels) {
  std::map<std::uint32_t, std::uint32_t> ids;
  Partition out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = ids.try_emplace(labels[i], static_cast<std::uint32_t>(ids.size())).first->second;
  }
  return out;
}

namespace {

// Relabels nodes by exact signature, first occurrence first.
Partition relabel(const std::vector<std::vector<std::uint32_t>>& signatures) {
  std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
  Partition out(signatures.size());
  for (std::size_t v = 0; v < signatures.size(); ++v) {
    out[v] = ids.try_emplace(signatures[v], static_cast<std::uint32_t>(ids.size())).first->second;
  }
  return out;
}

}  // namespace

Partition wl_refinement(const Graph& graph, std::size_t rounds) {
  Partition colors(graph.num_nodes(), 0);
  for (std::size_t r = 0; r < rounds; ++r) {
    std::vector<std::vector<std::uint32_t>> sig(graph.num_nodes());
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
      auto& s = sig[v];
      s.push_back(colors[v]);
      for (const auto& nb : graph.neighbors(static_cast<NodeId>(v))) s.push_back(colors[nb.node]);
      std::sort(s.begin() + 1, s.end());
    }
    colors = relabel(sig);
  }
  return colors;
}

Partition bounded_refinement(const Graph& graph, const AggregationScheme& scheme, std::size_t rounds) {
  Partition colors(graph.num_nodes(), 0);
  for (std::size_t r = 0; r < rounds; ++r) {
    const auto num_colors = static_cast<std::uint32_t>(class_count(colors));
    std::vector<std::vector<std::uint32_t>> sig(graph.num_nodes());
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
      const auto nbs = graph.neighbors(static_cast<NodeId>(v));
      auto& s = sig[v];
      s.push_back(colors[v]);
      if (const auto* c = std::get_if<Counting>(&scheme)) {
        s.resize(1 + num_colors, 0);
        for (const auto& nb : nbs) {
          auto& count = s[1 + colors[nb.node]];
          count = std::min(count + 1, c->bound);
        }
      } else if (const auto* p = std::get_if<Positional>(&scheme)) {
        // num_colors stands in for the fill symbol so it cannot collide.
        s.resize(1 + p->slots, num_colors);
        for (const auto& nb : nbs) {
          if (nb.slot < 0 || static_cast<std::uint32_t>(nb.slot) >= p->slots) {
            throw std::invalid_argument("positional refinement needs ports below d");
          }
          s[1 + static_cast<std::size_t>(nb.slot)] = colors[nb.node];
        }
      } else {
        const double tau = std::get<AvgThreshold>(scheme).tau;
        std::vector<std::size_t> counts(num_colors, 0);
        for (const auto& nb : nbs) ++counts[colors[nb.node]];
        for (std::size_t m = 0; m < num_colors; ++m) {
          const bool hit = !nbs.empty() &&
                           static_cast<double>(counts[m]) / static_cast<double>(nbs.size()) >= tau;
          s.push_back(hit ? 1 : 0);
        }
      }
    }
    colors = relabel(sig);
  }
  return colors;
}

bool partition_refines(const Partition& finer, const Partition& coarser) {
  if (finer.size() != coarser.size()) throw std::invalid_argument("partition length mismatch");
  std::map<std::uint32_t, std::uint32_t> image;
  for (std::size_t v = 0; v < finer.size(); ++v) {
    const auto [it, inserted] = image.try_emplace(finer[v], coarser[v]);
    if (!inserted && it->second != coarser[v]) return false;
  }
  return true;
}

std::size_t class_count(const Partition& partition) {
  if (partition.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(partition.begin(), partition.end())) + 1;
}

Graph two_vs_three_hub_graph() {
  // 0: hub with leaves 2, 3; 1: hub with leaves 4, 5, 6.
  return Graph(7, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}, {1, 6}});
}

}  // namespace graphfsa
