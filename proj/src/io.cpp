#include "graphfsa/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace graphfsa {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Runs `f`, turning JSON access errors and domain rejections into FormatError.
template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FormatError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(what + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(what + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(what + ": " + e.what());
  }
}

std::vector<StateId> states_from(const Json& j) { return j.get<std::vector<StateId>>(); }

}  // namespace

Json to_json(const AggregationScheme& scheme) {
  return std::visit(Overloaded{
                        [](const Counting& c) { return Json{{"kind", "counting"}, {"b", c.bound}}; },
                        [](const Positional& p) {
                          return Json{{"kind", "positional"}, {"d", p.slots}, {"fill", p.fill}};
                        },
                        [](const AvgThreshold& a) { return Json{{"kind", "avg_threshold"}, {"tau", a.tau}}; },
                    },
                    scheme);
}

AggregationScheme scheme_from_json(const Json& j) {
  return guarded("scheme", [&]() -> AggregationScheme {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "counting") return Counting{j.at("b").get<std::uint32_t>()};
    if (kind == "positional") return Positional{j.at("d").get<std::uint32_t>(), j.value("fill", StateId{0})};
    if (kind == "avg_threshold") return AvgThreshold{j.value("tau", 0.5)};
    throw FormatError("unknown scheme kind '" + kind + "'");
  });
}

AggregationScheme parse_scheme_flag(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  Json j{{"kind", kind}};
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw FormatError("scheme option '" + item + "' lacks '='");
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      try {
        std::size_t used = 0;
        if (key == "tau") {
          j[key] = std::stod(value, &used);
        } else {
          const long parsed = std::stol(value, &used);
          if (parsed < 0) throw std::invalid_argument("negative");
          j[key] = parsed;
        }
        if (used != value.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw FormatError("bad value for scheme option '" + key + "': '" + value + "'");
      }
    }
  }
  if (kind == "counting" && !j.contains("b")) j["b"] = 1;
  if (kind == "positional" && !j.contains("d")) throw FormatError("positional scheme needs d=");
  return scheme_from_json(j);
}

std::string format_scheme_flag(const AggregationScheme& scheme) { return describe(scheme); }

Json to_json(const Graph& graph) {
  Json edges = Json::array();
  for (const auto& [u, v] : graph.edges()) edges.push_back({u, v});
  Json j{{"num_nodes", graph.num_nodes()}, {"edges", edges}};
  if (graph.has_ports()) {
    Json ports = Json::array();
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
      const auto [u, v] = graph.edges()[e];
      const auto p = (*graph.ports())[e];
      ports.push_back({u, v, p.slot_u, p.slot_v});
    }
    j["ports"] = ports;
  }
  return j;
}

Graph graph_from_json(const Json& j) {
  return guarded("graph", [&] {
    const auto n = j.at("num_nodes").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (e.size() != 2) throw FormatError("graph: each edge must be [u,v]");
      edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
    }
    std::optional<std::vector<PortPair>> ports;
    if (j.contains("ports") && !j["ports"].is_null()) {
      std::map<Edge, PortPair> by_edge;
      for (const auto& p : j["ports"]) {
        if (p.size() != 4) throw FormatError("graph: each port entry must be [u,v,slot_u,slot_v]");
        const auto u = p[0].get<NodeId>();
        const auto v = p[1].get<NodeId>();
        const auto su = p[2].get<std::uint32_t>();
        const auto sv = p[3].get<std::uint32_t>();
        by_edge[{u, v}] = {su, sv};
        by_edge[{v, u}] = {sv, su};
      }
      ports.emplace();
      for (const auto& e : edges) {
        const auto it = by_edge.find(e);
        if (it == by_edge.end()) {
          throw FormatError("graph: edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                            ") has no port entry");
        }
        ports->push_back(it->second);
      }
    }
    return Graph(n, std::move(edges), std::move(ports));
  });
}

Json to_json(const GraphFSA& fsa) {
  return Json{{"version", 1},
              {"num_states", fsa.num_states},
              {"starting", fsa.starting},
              {"final", fsa.final_states},
              {"scheme", to_json(fsa.scheme)},
              {"table", fsa.table}};
}

GraphFSA fsa_from_json(const Json& j) {
  return guarded("fsa", [&] {
    if (j.at("version").get<int>() != 1) throw FormatError("fsa: unsupported version");
    GraphFSA fsa;
    fsa.num_states = j.at("num_states").get<std::size_t>();
    fsa.starting = states_from(j.at("starting"));
    fsa.final_states = states_from(j.at("final"));
    fsa.scheme = scheme_from_json(j.at("scheme"));
    fsa.table = j.at("table").get<std::vector<StateId>>();
    if (const auto problems = validate(fsa); !problems.empty()) {
      throw FormatError("fsa: " + problems.front());
    }
    return fsa;
  });
}

Json to_json(const Example& example) {
  return Json{{"graph", to_json(example.graph)},
              {"inputs", example.inputs},
              {"targets", example.targets},
              {"steps", example.steps}};
}

Example example_from_json(const Json& j) {
  return guarded("example", [&] {
    Example ex{graph_from_json(j.at("graph")), j.at("inputs").get<StateAssignment>(),
               j.at("targets").get<StateAssignment>(), j.at("steps").get<std::uint32_t>()};
    if (ex.inputs.size() != ex.graph.num_nodes() || ex.targets.size() != ex.graph.num_nodes()) {
      throw FormatError("example: inputs/targets length does not match num_nodes");
    }
    return ex;
  });
}

void write_ndjson(std::ostream& os, const Dataset& dataset) {
  for (const auto& ex : dataset) os << to_json(ex).dump() << '\n';
}

Dataset read_ndjson(std::istream& is) {
  Dataset out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(example_from_json(Json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(e.what(), number);
    } catch (const FormatError& e) {
      throw FormatError(e.what(), number);
    }
  }
  return out;
}

std::string dataset_to_ndjson(const Dataset& dataset) {
  std::ostringstream os;
  write_ndjson(os, dataset);
  return os.str();
}

Json to_json(const GraphDistribution& dist) {
  return std::visit(Overloaded{
                        [](const PathDist& d) { return Json{{"kind", "path"}, {"n", d.n}}; },
                        [](const CycleDist& d) { return Json{{"kind", "cycle"}, {"n", d.n}}; },
                        [](const TreeDist& d) { return Json{{"kind", "tree"}, {"n", d.n}}; },
                        [](const GridDist& d) {
                          return Json{{"kind", "grid"}, {"rows", d.rows}, {"cols", d.cols},
                                      {"moore", d.moore}, {"toroidal", d.toroidal}};
                        },
                        [](const HexGridDist& d) { return Json{{"kind", "hex"}, {"rows", d.rows}, {"cols", d.cols}}; },
                        [](const ErdosRenyiDist& d) { return Json{{"kind", "erdos_renyi"}, {"n", d.n}, {"p", d.p}}; },
                        [](const RegularDist& d) { return Json{{"kind", "regular"}, {"n", d.n}, {"d", d.d}}; },
                        [](const CompleteDist& d) { return Json{{"kind", "complete"}, {"n", d.n}}; },
                    },
                    dist);
}

GraphDistribution distribution_from_json(const Json& j) {
  return guarded("distribution", [&]() -> GraphDistribution {
    const auto kind = j.at("kind").get<std::string>();
    const auto n = j.value("n", std::size_t{10});
    if (kind == "path") return PathDist{n};
    if (kind == "cycle") return CycleDist{n};
    if (kind == "tree") return TreeDist{n};
    if (kind == "grid") {
      return GridDist{j.value("rows", std::size_t{4}), j.value("cols", std::size_t{4}), j.value("moore", true),
                      j.value("toroidal", false)};
    }
    if (kind == "hex") return HexGridDist{j.value("rows", std::size_t{4}), j.value("cols", std::size_t{4})};
    if (kind == "erdos_renyi") return ErdosRenyiDist{n, j.value("p", 0.3)};
    if (kind == "regular") return RegularDist{n, j.value("d", std::size_t{3})};
    if (kind == "complete") return CompleteDist{n};
    throw FormatError("unknown distribution kind '" + kind + "'");
  });
}

Json to_json(const GrabSpec& spec) {
  return Json{{"num_states", spec.num_states},
              {"num_start", spec.num_start},
              {"num_final", spec.num_final},
              {"scheme", to_json(spec.scheme)},
              {"distribution", to_json(spec.distribution)},
              {"train_sizes", spec.train_sizes},
              {"extra_sizes", spec.extra_sizes},
              {"examples_per_size", spec.examples_per_size},
              {"max_offset", spec.max_offset},
              {"seed", spec.seed}};
}

Json to_json(const Trace& trace) {
  Json entries = Json::array();
  for (const auto& e : trace.entries) entries.push_back({e.state, e.agg_index, e.next});
  return Json{{"num_nodes", trace.num_nodes}, {"num_steps", trace.num_steps}, {"entries", entries}};
}

Trace trace_from_json(const Json& j) {
  return guarded("trace", [&] {
    Trace t;
    t.num_nodes = j.at("num_nodes").get<std::size_t>();
    t.num_steps = j.at("num_steps").get<std::size_t>();
    for (const auto& e : j.at("entries")) {
      if (e.size() != 3) throw FormatError("trace: each entry must be [state,agg_index,next]");
      t.entries.push_back({e[0].get<StateId>(), e[1].get<std::uint32_t>(), e[2].get<StateId>()});
    }
    if (t.entries.size() != t.num_nodes * t.num_steps) {
      throw FormatError("trace: entry count does not match num_nodes * num_steps");
    }
    return t;
  });
}

std::vector<Trace> read_trace_file(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<Trace> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(trace_from_json(Json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ": " + e.what(), number);
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ": " + e.what(), number);
    }
  }
  return out;
}

Json to_json(const TrainConfig& c) {
  return Json{{"learning_rate", c.learning_rate},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"iteration_offset_max", c.iteration_offset_max},
              {"final_state_penalty", c.final_state_penalty},
              {"seed", c.seed},
              {"optimizer", c.optimizer == OptimizerKind::adam ? "adam" : "sgd"},
              {"beta1", c.beta1},
              {"beta2", c.beta2},
              {"epsilon", c.epsilon},
              {"logit_init_scale", c.logit_init_scale}};
}

TrainConfig train_config_from_json(const Json& j) {
  return guarded("config", [&] {
    TrainConfig c;
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.iteration_offset_max = j.value("iteration_offset_max", c.iteration_offset_max);
    c.final_state_penalty = j.value("final_state_penalty", c.final_state_penalty);
    c.seed = j.value("seed", c.seed);
    const auto opt = j.value("optimizer", std::string("adam"));
    if (opt != "adam" && opt != "sgd") throw FormatError("config: unknown optimizer '" + opt + "'");
    c.optimizer = opt == "adam" ? OptimizerKind::adam : OptimizerKind::sgd;
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.logit_init_scale = j.value("logit_init_scale", c.logit_init_scale);
    return c;
  });
}

Json checkpoint_to_json(const SoftTransitionModel& model, const TrainConfig& config,
                        const std::vector<double>& history) {
  return Json{{"version", 1},
              {"config", to_json(config)},
              {"scheme", to_json(model.scheme())},
              {"num_states", model.num_states()},
              {"starting", model.starting()},
              {"final", model.final_states()},
              {"logits", model.logits()},
              {"history", history}};
}

Checkpoint checkpoint_from_json(const Json& j) {
  return guarded("checkpoint", [&] {
    if (j.at("version").get<int>() != 1) throw FormatError("checkpoint: unsupported version");
    SoftTransitionModel model(j.at("num_states").get<std::size_t>(), scheme_from_json(j.at("scheme")),
                              states_from(j.at("starting")), states_from(j.at("final")));
    auto logits = j.at("logits").get<std::vector<double>>();
    if (logits.size() != model.logits().size()) throw FormatError("checkpoint: logits have wrong length");
    model.logits() = std::move(logits);
    return Checkpoint{std::move(model), train_config_from_json(j.at("config")),
                      j.value("history", std::vector<double>{})};
  });
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Json read_json_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Dataset read_dataset_file(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  try {
    return read_ndjson(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace graphfsa
