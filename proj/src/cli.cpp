#include "graphfsa/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "graphfsa/eval.hpp"
#include "graphfsa/io.hpp"
#include "graphfsa/viz.hpp"

namespace graphfsa {

namespace fs = std::filesystem;

namespace {

// Domain-level rejection of otherwise well-formed input (exit code 1).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flag combination (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " list entry '" + item + "'");
    }
  }
  return out;
}

std::size_t worker_cap() {
  const char* env = std::getenv("GRAPHFSA_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw UsageError("GRAPHFSA_WORKERS must be a positive integer");
  return static_cast<std::size_t>(v);
}

// Files a command produces, held in memory until the command has succeeded
// so that failures leave nothing behind.
class OutputSet {
 public:
  void add(const fs::path& path, std::string text) { files_.emplace_back(path, std::move(text)); }

  void commit(const fs::path& manifest_path, Json manifest) {
    Json outputs = Json::array();
    for (const auto& [path, text] : files_) {
      outputs.push_back({{"path", path.string()}, {"digest", digest_hex(text)}});
    }
    manifest["outputs"] = outputs;
    for (const auto& [path, text] : files_) write_text_file(path, text);
    if (!manifest_path.empty()) write_text_file(manifest_path, manifest.dump(2) + "\n");
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args)
      : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["argv"] = args;
    doc_["tool_version"] = kToolVersion;
    doc_["inputs"] = Json::array();
  }

  void input(const fs::path& path, const std::string& bytes) {
    doc_["inputs"].push_back({{"path", path.string()}, {"digest", digest_hex(bytes)}});
  }
  Json& config() { return doc_["config"]; }
  void seed(std::uint64_t s) { doc_["seeds"] = {{"root", s}}; }

  Json finish() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    doc_["duration_seconds"] = std::chrono::duration<double>(elapsed).count();
    return doc_;
  }

 private:
  Json doc_;
  std::chrono::steady_clock::time_point start_;
};

// Reads a file and records its digest.
std::string read_input(Manifest& manifest, const fs::path& path) {
  std::string text = read_text_file(path);
  manifest.input(path, text);
  return text;
}

Json parse_json_text(const fs::path& path, const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Dataset parse_dataset_text(const fs::path& path, const std::string& text) {
  std::istringstream in(text);
  try {
    return read_ndjson(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

GraphFSA load_fsa(Manifest& manifest, const fs::path& path) {
  const auto text = read_input(manifest, path);
  try {
    return fsa_from_json(parse_json_text(path, text));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

GraphDistribution parse_distribution_flag(const std::string& text) {
  const auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  if (kind == "er") kind = "erdos_renyi";
  Json j{{"kind", kind}};
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("distribution option '" + item + "' lacks '='");
      const auto key = item.substr(0, eq);
      const auto value = item.substr(eq + 1);
      if (key == "moore" || key == "toroidal") {
        j[key] = value == "1" || value == "true";
      } else {
        try {
          j[key] = key == "p" ? Json(std::stod(value)) : Json(std::stoul(value));
        } catch (const std::exception&) {
          throw UsageError("bad value for distribution option '" + key + "'");
        }
      }
    }
  }
  return distribution_from_json(j);
}

std::vector<std::size_t> size_range(std::size_t max_n) {
  std::vector<std::size_t> out;
  for (std::size_t n = std::min<std::size_t>(4, max_n); n <= max_n; ++n) out.push_back(n);
  return out;
}

std::map<StateId, char> palette_for(const std::string& text, std::size_t num_states) {
  std::string chars = text;
  if (chars.empty()) chars = num_states == 2 ? ".#" : "0123456789";
  if (chars.size() < num_states) throw UsageError("palette has fewer characters than states");
  std::map<StateId, char> out;
  for (StateId s = 0; s < num_states; ++s) out[s] = chars[s];
  return out;
}

// ---------------------------------------------------------------------------

struct GenerateOptions {
  std::string task;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t states = 4, start = 2, final_count = 2;
  std::string dist = "tree";
  std::string scheme = "counting:b=1";
  std::size_t train_n = 10;
  std::string extra_n = "10,20,50,100";
  std::size_t count = 100;
  std::uint32_t max_offset = 3;
  std::size_t grid = 0, rows = 10, cols = 10, len = 4;
  std::uint32_t steps = 1;
  bool prefix_exclusive = false;
  std::uint32_t extra_steps = 0;
};

int cmd_generate(const GenerateOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  Manifest manifest("generate", args);
  manifest.seed(o.seed);
  OutputSet files;
  const fs::path dir(o.out_dir);
  const auto extra = parse_list<std::size_t>(o.extra_n, "--extra-n");
  auto& config = manifest.config();
  config["task"] = o.task;

  if (o.task == "grab") {
    GrabSpec spec;
    spec.num_states = o.states;
    spec.num_start = o.start;
    spec.num_final = o.final_count;
    spec.scheme = parse_scheme_flag(o.scheme);
    spec.distribution = parse_distribution_flag(o.dist);
    spec.train_sizes = size_range(o.train_n);
    spec.extra_sizes = extra;
    spec.examples_per_size = o.count;
    spec.max_offset = o.max_offset;
    spec.seed = o.seed;
    if (const auto problems = check_grab_spec(spec); !problems.empty()) throw DomainError(problems.front());
    config["spec"] = to_json(spec);
    const auto data = make_grab_dataset(spec);
    files.add(dir / "fsa.json", to_json(data.fsa).dump(2) + "\n");
    files.add(dir / "train.ndjson", dataset_to_ndjson(data.train));
    files.add(dir / "val.ndjson", dataset_to_ndjson(data.validation));
    for (const auto& split : data.extrapolation) {
      files.add(dir / ("extra_n" + std::to_string(split.size) + ".ndjson"), dataset_to_ndjson(split.examples));
    }
  } else if (const auto algo = parse_algorithm_task(o.task)) {
    AlgorithmOptions opts;
    opts.prefix_inclusive = !o.prefix_exclusive;
    opts.max_offset = o.max_offset;
    opts.extra_steps = o.extra_steps;
    config["train_sizes"] = size_range(o.train_n);
    config["extra_sizes"] = extra;
    config["count"] = o.count;
    config["max_offset"] = o.max_offset;
    config["prefix_inclusive"] = opts.prefix_inclusive;
    config["extra_steps"] = opts.extra_steps;
    const auto train = algorithm_dataset(*algo, size_range(o.train_n), o.count, child_seed(o.seed, 1, 0), opts);
    const auto val = algorithm_dataset(*algo, size_range(o.train_n), o.count, child_seed(o.seed, 2, 0), opts);
    files.add(dir / "train.ndjson", dataset_to_ndjson(flatten(train)));
    files.add(dir / "val.ndjson", dataset_to_ndjson(flatten(val)));
    const auto splits = algorithm_dataset(*algo, extra, o.count, child_seed(o.seed, 3, 0), opts);
    for (const auto& split : splits) {
      files.add(dir / ("extra_n" + std::to_string(split.size) + ".ndjson"), dataset_to_ndjson(split.examples));
    }
  } else {
    CaTask task;
    try {
      task = parse_ca_task(o.task);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("unknown task: ") + e.what());
    }
    std::size_t rows = o.grid ? o.grid : o.rows;
    std::size_t cols = o.grid ? o.grid : o.cols;
    if (task.kind == CaKind::elementary) {
      rows = 1;
      cols = o.len;
    }
    config["rows"] = rows;
    config["cols"] = cols;
    config["steps"] = o.steps;
    config["count"] = o.count;
    files.add(dir / "fsa.json", to_json(ca_task_fsa(task)).dump(2) + "\n");
    files.add(dir / "data.ndjson", dataset_to_ndjson(ca_dataset(task, rows, cols, o.steps, o.count, o.seed)));
  }
  files.commit(dir / "manifest.json", manifest.finish());
  out << "wrote " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainOptions {
  std::string data;
  std::string task;
  std::string out_dir = ".";
  std::size_t states = 0;
  std::string scheme = "counting:b=1";
  std::string starting, final_states;
  bool no_clamp = false;
  TrainConfig config;
  std::string optimizer = "adam";
};

int cmd_train(TrainOptions o, const std::vector<std::string>& args, std::ostream& out) {
  Manifest manifest("train", args);
  const fs::path data_path(o.data);
  const auto dataset = parse_dataset_text(data_path, read_input(manifest, data_path));
  if (dataset.empty()) throw DomainError("dataset is empty");

  o.config.optimizer = o.optimizer == "sgd" ? OptimizerKind::sgd : OptimizerKind::adam;
  if (o.optimizer != "sgd" && o.optimizer != "adam") throw UsageError("optimizer must be adam or sgd");
  if (const auto problems = check_config(o.config); !problems.empty()) throw DomainError(problems.front());

  ModelSetup setup{o.states, parse_scheme_flag(o.scheme), {}, {}};
  if (!o.task.empty()) {
    const auto task = parse_algorithm_task(o.task);
    if (!task) throw UsageError("unknown algorithm task '" + o.task + "'");
    const auto ts = task_states(*task);
    setup.starting = ts.starting;
    setup.final_states = ts.final_states;
    if (!setup.num_states) setup.num_states = ts.num_states;
  }
  if (!o.starting.empty()) setup.starting = parse_list<StateId>(o.starting, "--starting");
  if (!o.final_states.empty()) setup.final_states = parse_list<StateId>(o.final_states, "--final");
  if (setup.starting.empty()) {
    std::set<StateId> seen;
    for (const auto& ex : dataset) seen.insert(ex.inputs.begin(), ex.inputs.end());
    setup.starting.assign(seen.begin(), seen.end());
  }
  if (!setup.num_states) throw UsageError("--states is required");

  auto& config = manifest.config();
  config["train"] = to_json(o.config);
  config["num_states"] = setup.num_states;
  config["scheme"] = to_json(setup.scheme);
  config["starting"] = setup.starting;
  config["final"] = setup.final_states;
  config["clamp_final"] = !o.no_clamp;
  manifest.seed(o.config.seed);

  const auto result = train(dataset, setup, o.config);
  const auto fsa = extract(result.model, !o.no_clamp);

  OutputSet files;
  const fs::path dir(o.out_dir);
  files.add(dir / "checkpoint.json", checkpoint_to_json(result.model, o.config, result.history).dump() + "\n");
  files.add(dir / "fsa.json", to_json(fsa).dump(2) + "\n");
  std::ostringstream csv;
  csv << "epoch,loss\n";
  csv.precision(10);
  for (std::size_t e = 0; e < result.history.size(); ++e) csv << e << ',' << result.history[e] << '\n';
  files.add(dir / "loss.csv", csv.str());
  files.commit(dir / "manifest.json", manifest.finish());

  const auto acc = evaluate(fsa, dataset);
  out << "final loss " << (result.history.empty() ? 0.0 : result.history.back()) << ", train accuracy "
      << acc.mean_acc << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string fsa;
  std::vector<std::string> data;
  std::string task;
  std::string steps;
  std::size_t grid = 0, rows = 10, cols = 10, len = 10;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::string out_csv;
};

int cmd_eval(const EvalOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  Manifest manifest("eval", args);
  manifest.seed(o.seed);
  const auto fsa = load_fsa(manifest, o.fsa);
  const auto steps = parse_list<std::size_t>(o.steps, "--steps");
  EvalReport report;

  if (!o.task.empty()) {
    if (!o.data.empty()) throw UsageError("--task and --data are exclusive");
    if (steps.empty()) throw UsageError("--task needs --steps");
    CaTask task;
    try {
      task = parse_ca_task(o.task);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("unknown task: ") + e.what());
    }
    std::size_t rows = o.grid ? o.grid : o.rows;
    std::size_t cols = o.grid ? o.grid : o.cols;
    if (task.kind == CaKind::elementary) {
      rows = 1;
      cols = o.len;
    }
    manifest.config() = {{"task", o.task}, {"rows", rows}, {"cols", cols}, {"steps", steps}, {"count", o.count}};
    report = iteration_stability_sweep(fsa, task, rows, cols, steps, o.count, o.seed);
  } else {
    if (o.data.empty()) throw UsageError("eval needs --data or --task");
    if (!steps.empty() && o.data.size() != 1) throw UsageError("--steps with --data takes a single file");
    std::vector<Dataset> sets;
    for (const auto& path : o.data) sets.push_back(parse_dataset_text(path, read_input(manifest, path)));
    manifest.config() = {{"data", o.data}, {"steps", steps}};
    if (steps.empty()) {
      report.key_name = "size";
      for (const auto& set : sets) {
        auto row = evaluate(fsa, set);
        row.key = set.empty() ? 0 : set.front().graph.num_nodes();
        report.rows.push_back(row);
      }
    } else {
      report.key_name = "t";
      for (std::size_t t : steps) {
        auto row = evaluate(fsa, sets.front(), t);
        row.key = t;
        report.rows.push_back(row);
      }
    }
  }

  std::ostringstream csv;
  report.write_csv(csv);
  if (o.out_csv.empty()) {
    out << csv.str();
  } else {
    OutputSet files;
    files.add(o.out_csv, csv.str());
    files.commit(fs::path(o.out_csv).replace_extension(".manifest.json"), manifest.finish());
    report.write_table(out);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string fsa;
  std::string graph;
  std::string data;
  std::string input;
  std::size_t steps = 1;
  bool steps_given = false;
  bool render = false;
  std::size_t grid = 0, rows = 0, cols = 0;
  std::string palette;
  std::string trace;
  std::string out;
};

int cmd_simulate(const SimulateOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  Manifest manifest("simulate", args);
  const auto fsa = load_fsa(manifest, o.fsa);
  if (o.graph.empty() == o.data.empty()) throw UsageError("simulate needs exactly one of --graph and --data");

  struct Job {
    Graph graph;
    StateAssignment inputs;
    std::size_t steps;
  };
  std::vector<Job> jobs;
  if (!o.graph.empty()) {
    const auto doc = parse_json_text(o.graph, read_input(manifest, o.graph));
    Graph graph = [&] {
      try {
        return graph_from_json(doc.contains("graph") ? doc.at("graph") : doc);
      } catch (const FormatError& e) {
        throw FormatError(o.graph + ": " + e.what());
      }
    }();
    StateAssignment inputs;
    if (!o.input.empty()) {
      inputs = parse_list<StateId>(o.input, "--input");
    } else if (doc.contains("inputs")) {
      try {
        inputs = doc.at("inputs").get<StateAssignment>();
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(o.graph + ": inputs: " + e.what());
      }
    } else {
      throw UsageError("no inputs: pass --input or put \"inputs\" in the graph file");
    }
    jobs.push_back({std::move(graph), std::move(inputs), o.steps});
  } else {
    for (auto& ex : parse_dataset_text(o.data, read_input(manifest, o.data))) {
      const std::size_t t = o.steps_given ? o.steps : ex.steps;
      jobs.push_back({std::move(ex.graph), std::move(ex.inputs), t});
    }
  }

  const std::size_t rows = o.grid ? o.grid : o.rows;
  const std::size_t cols = o.grid ? o.grid : o.cols;
  if (o.render && (!rows || !cols)) throw UsageError("--render needs --grid or --rows/--cols");
  const auto palette = o.render ? palette_for(o.palette, fsa.num_states) : std::map<StateId, char>{};

  std::ostringstream states_out, traces_out, rendered;
  for (const auto& job : jobs) {
    const bool need_trace = o.render || !o.trace.empty();
    const auto result = run(fsa, job.graph, job.inputs, job.steps, need_trace);
    states_out << Json{{"states", result.states}}.dump() << '\n';
    if (!o.trace.empty()) traces_out << to_json(*result.trace).dump() << '\n';
    if (o.render) {
      std::vector<StateAssignment> frames{job.inputs};
      for (std::size_t t = 0; t < result.trace->num_steps; ++t) {
        StateAssignment frame(job.graph.num_nodes());
        for (NodeId v = 0; v < frame.size(); ++v) frame[v] = result.trace->at(t, v).next;
        frames.push_back(std::move(frame));
      }
      if (rendered.tellp() > 0) rendered << '\n';
      rendered << render_grid_trace(job.graph, rows, cols, frames, palette);
    }
  }

  OutputSet files;
  if (!o.trace.empty()) files.add(o.trace, traces_out.str());
  if (!o.out.empty()) files.add(o.out, states_out.str());
  files.commit({}, {});
  if (o.render) {
    out << rendered.str();
  } else if (o.out.empty()) {
    out << states_out.str();
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ExportOptions {
  std::string fsa;
  std::string mode = "complete";
  std::vector<std::string> traces;
  std::string names;
  long from_start = -1;
  std::string out;
};

int cmd_export_dot(const ExportOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  Manifest manifest("export-dot", args);
  const auto fsa = load_fsa(manifest, o.fsa);
  DotOptions opts;
  if (!o.names.empty()) {
    std::stringstream ss(o.names);
    std::string name;
    while (std::getline(ss, name, ',')) opts.state_names.push_back(name);
  }
  if (o.from_start >= 0) opts.from_start = static_cast<StateId>(o.from_start);

  std::string dot;
  if (o.mode == "complete") {
    if (!o.traces.empty()) throw UsageError("--trace only applies to --mode partial");
    dot = export_complete_dot(fsa, opts);
  } else if (o.mode == "partial") {
    std::vector<Trace> traces;
    for (const auto& path : o.traces) {
      read_input(manifest, path);
      for (auto& t : read_trace_file(path)) traces.push_back(std::move(t));
    }
    try {
      dot = export_partial_dot(fsa, traces, opts);
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("trace does not match automaton: ") + e.what());
    }
  } else {
    throw UsageError("--mode must be complete or partial");
  }
  if (o.out.empty()) {
    out << dot;
  } else {
    OutputSet files;
    files.add(o.out, dot);
    files.commit({}, {});
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct WlOptions {
  std::string graph;
  std::string scheme = "counting:b=2";
  long rounds = -1;
};

std::string partition_text(const Partition& p) {
  std::string s;
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (v) s += ' ';
    s += std::to_string(p[v]);
  }
  return s;
}

int cmd_wl_demo(const WlOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  Manifest manifest("wl-demo", args);
  const Graph graph = [&] {
    if (o.graph.empty()) return two_vs_three_hub_graph();
    const auto doc = parse_json_text(o.graph, read_input(manifest, o.graph));
    try {
      return graph_from_json(doc.contains("graph") ? doc.at("graph") : doc);
    } catch (const FormatError& e) {
      throw FormatError(o.graph + ": " + e.what());
    }
  }();
  const auto scheme = parse_scheme_flag(o.scheme);
  const std::size_t rounds = o.rounds >= 0 ? static_cast<std::size_t>(o.rounds) : graph.num_nodes();
  const auto wl = wl_refinement(graph, rounds);
  const auto bounded = bounded_refinement(graph, scheme, rounds);
  out << "graph: " << graph.num_nodes() << " nodes, " << graph.num_edges() << " edges\n";
  out << "rounds: " << rounds << "\n";
  out << "wl (" << class_count(wl) << " classes): " << partition_text(wl) << "\n";
  out << describe(scheme) << " (" << class_count(bounded) << " classes): " << partition_text(bounded) << "\n";
  const bool dominates = partition_refines(wl, bounded);
  out << "wl refines bounded: " << (dominates ? "yes" : "no") << "\n";
  out << "wl strictly finer: " << (dominates && class_count(wl) > class_count(bounded) ? "yes" : "no") << "\n";
  return dominates ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph finite state automata: generate, train, evaluate, visualize"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("graphfsa ") + kToolVersion);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Write a dataset (and ground-truth automaton)");
  g->add_option("--task", gen.task, "grab, gol, gol-torus, gol-hex, wireworld, wireworld-torus, ca1d:<rule>, "
                                    "ca1d-cyclic:<rule>, distance, rootvalue, pathfinding, prefixsum")
      ->required();
  g->add_option("--out", gen.out_dir, "Output directory");
  g->add_option("--seed", gen.seed);
  g->add_option("--states", gen.states);
  g->add_option("--start", gen.start);
  g->add_option("--final", gen.final_count);
  g->add_option("--dist", gen.dist, "tree, path, cycle, grid, hex, er:p=0.3, regular:d=3, complete");
  g->add_option("--scheme", gen.scheme);
  g->add_option("--train-n", gen.train_n, "Largest training graph size");
  g->add_option("--extra-n", gen.extra_n, "Comma-separated extrapolation sizes");
  g->add_option("--count", gen.count, "Examples per size (or in total for CA tasks)");
  g->add_option("--max-offset", gen.max_offset);
  g->add_option("--grid", gen.grid, "Square board side");
  g->add_option("--rows", gen.rows);
  g->add_option("--cols", gen.cols);
  g->add_option("--len", gen.len, "Path length for ca1d tasks");
  g->add_option("--steps", gen.steps);
  g->add_flag("--prefix-exclusive", gen.prefix_exclusive);
  g->add_option("--extra-steps", gen.extra_steps, "Algorithm tasks: steps added beyond diameter + offset");

  TrainOptions tr;
  auto* t = app.add_subcommand("train", "Fit a differentiable automaton and extract it");
  t->add_option("--data", tr.data)->required();
  t->add_option("--task", tr.task, "Algorithm task; sets state layout");
  t->add_option("--out", tr.out_dir);
  t->add_option("--states", tr.states);
  t->add_option("--scheme", tr.scheme);
  t->add_option("--starting", tr.starting, "Comma-separated starting states");
  t->add_option("--final", tr.final_states, "Comma-separated final states");
  t->add_flag("--no-clamp", tr.no_clamp, "Keep learned rows of final states");
  t->add_option("--lr", tr.config.learning_rate);
  t->add_option("--epochs", tr.config.epochs);
  t->add_option("--batch", tr.config.batch_size);
  t->add_option("--offset-max", tr.config.iteration_offset_max);
  t->add_option("--penalty", tr.config.final_state_penalty);
  t->add_option("--optimizer", tr.optimizer);
  t->add_option("--seed", tr.config.seed);

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Score an automaton");
  e->add_option("--fsa", ev.fsa)->required();
  e->add_option("--data", ev.data)->delimiter(',');
  e->add_option("--task", ev.task, "CA task for a fresh-board sweep");
  e->add_option("--steps", ev.steps, "Comma-separated step counts");
  e->add_option("--grid", ev.grid);
  e->add_option("--rows", ev.rows);
  e->add_option("--cols", ev.cols);
  e->add_option("--len", ev.len);
  e->add_option("--count", ev.count);
  e->add_option("--seed", ev.seed);
  e->add_option("--out", ev.out_csv, "CSV path; stdout when absent");

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Run an automaton");
  s->add_option("--fsa", sim.fsa)->required();
  s->add_option("--graph", sim.graph);
  s->add_option("--data", sim.data);
  s->add_option("--input", sim.input, "Comma-separated initial states");
  auto* steps_opt = s->add_option("--steps", sim.steps);
  s->add_flag("--render", sim.render);
  s->add_option("--grid", sim.grid);
  s->add_option("--rows", sim.rows);
  s->add_option("--cols", sim.cols);
  s->add_option("--palette", sim.palette, "One character per state");
  s->add_option("--trace", sim.trace, "Write transition traces (NDJSON)");
  s->add_option("--out", sim.out, "Write final states (NDJSON)");

  ExportOptions ex;
  auto* x = app.add_subcommand("export-dot", "Draw an automaton as DOT");
  x->add_option("--fsa", ex.fsa)->required();
  x->add_option("--mode", ex.mode);
  x->add_option("--trace", ex.traces)->delimiter(',');
  x->add_option("--names", ex.names, "Comma-separated state names");
  x->add_option("--from-start", ex.from_start);
  x->add_option("--out", ex.out);

  WlOptions wl;
  auto* w = app.add_subcommand("wl-demo", "Compare 1-WL with bounded refinement");
  w->add_option("--graph", wl.graph, "Graph JSON; the 2-vs-3 hub graph when absent");
  w->add_option("--scheme", wl.scheme);
  w->add_option("--rounds", wl.rounds);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    worker_cap();
    if (g->parsed()) return cmd_generate(gen, args, out);
    if (t->parsed()) return cmd_train(tr, args, out);
    if (e->parsed()) return cmd_eval(ev, args, out);
    if (s->parsed()) {
      sim.steps_given = steps_opt->count() > 0;
      return cmd_simulate(sim, args, out);
    }
    if (x->parsed()) return cmd_export_dot(ex, args, out);
    if (w->parsed()) return cmd_wl_demo(wl, args, out);
  } catch (const IoError& ex_) {
    err << "graphfsa: " << ex_.what() << "\n";
    return 2;
  } catch (const FormatError& ex_) {
    err << "graphfsa: " << ex_.what() << "\n";
    return 2;
  } catch (const UsageError& ex_) {
    err << "graphfsa: " << ex_.what() << "\n";
    return 2;
  } catch (const std::exception& ex_) {
    err << "graphfsa: " << ex_.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace graphfsa
