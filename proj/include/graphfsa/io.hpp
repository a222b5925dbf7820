#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphfsa/aggregation.hpp"
#include "graphfsa/datasets.hpp"
#include "graphfsa/difffsa.hpp"
#include "graphfsa/fsa.hpp"
#include "graphfsa/graph.hpp"

namespace graphfsa {

using Json = nlohmann::json;

/// Malformed input. `line` is 1-based for line-oriented files, 0 otherwise.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Json to_json(const AggregationScheme& scheme);
AggregationScheme scheme_from_json(const Json& j);

/// `counting:b=1`, `positional:d=2,fill=0`, `avg_threshold:tau=0.5`.
AggregationScheme parse_scheme_flag(const std::string& text);
std::string format_scheme_flag(const AggregationScheme& scheme);

Json to_json(const Graph& graph);
Graph graph_from_json(const Json& j);

/// {"version":1,"num_states","starting","final","scheme","table"}.
Json to_json(const GraphFSA& fsa);
/// Rejects documents whose automaton fails validate().
GraphFSA fsa_from_json(const Json& j);

Json to_json(const Example& example);
Example example_from_json(const Json& j);

void write_ndjson(std::ostream& os, const Dataset& dataset);
Dataset read_ndjson(std::istream& is);

Json to_json(const GraphDistribution& dist);
GraphDistribution distribution_from_json(const Json& j);
Json to_json(const GrabSpec& spec);

Json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const Json& j);

/// {"num_nodes","num_steps","entries":[[state,agg_index,next],...]}.
Json to_json(const Trace& trace);
Trace trace_from_json(const Json& j);
std::vector<Trace> read_trace_file(const std::filesystem::path& path);

struct Checkpoint {
  SoftTransitionModel model;
  TrainConfig config;
  std::vector<double> history;
};

Json checkpoint_to_json(const SoftTransitionModel& model, const TrainConfig& config,
                        const std::vector<double>& history);
Checkpoint checkpoint_from_json(const Json& j);

// Missing or unreadable files throw IoError; bad content throws FormatError.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
Json read_json_file(const std::filesystem::path& path);
Dataset read_dataset_file(const std::filesystem::path& path);
std::string dataset_to_ndjson(const Dataset& dataset);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string digest_hex(const std::string& bytes);

}  // namespace graphfsa
