#include "fluxqpt/config.hpp"

#include <cmath>
#include <set>
#include <string>

#include <json.hpp>

#include "fluxqpt/error.hpp"

namespace fluxqpt {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "topology",    "n",          "edges",        "coupling_scale", "epsilon",
      "t_final",     "delta_max",  "j_max",        "delta_floor",    "j_floor",
      "ramp",        "grid_points", "chi_f",       "witness",        "macro",
      "dynamics_verify", "delta_s", "smoothing",   "dt",             "gap_tol",
      "fidelity_threshold", "shots", "seed",       "threads",        "out"};
  return keys;
}

[[noreturn]] void reject(const std::string& key, const std::string& what) {
  throw Error(ErrorCategory::config, key + ": " + what);
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) reject(key, "expected a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer()) reject(key, "expected an integer");
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  const auto v = j.get<std::int64_t>();
  if (v < 0) reject(key, "must be non-negative");
  return static_cast<std::size_t>(v);
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) reject(key, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) reject(key, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& key) {
  if (!j.is_array()) reject(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_number(v, key));
  return out;
}

std::vector<Edge> get_edges(const json& j) {
  if (!j.is_array()) reject("edges", "expected an array of [i, j] pairs");
  std::vector<Edge> edges;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) reject("edges", "each entry must be an [i, j] pair");
    edges.push_back({get_count(pair[0], "edges"), get_count(pair[1], "edges")});
  }
  return edges;
}

void positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v)) reject(key, "must be positive and finite");
}

}  // namespace

SpinNetwork ExperimentConfig::network() const {
  switch (topology) {
    case Topology::triangle:
      return SpinNetwork::triangle();
    case Topology::nn_nnn_chain:
      return SpinNetwork::nn_nnn_chain(n);
    case Topology::custom:
      break;
  }
  return SpinNetwork::custom(n, edges);
}

SweepModel ExperimentConfig::model() const {
  SweepModel model;
  model.network = network();
  model.schedule = schedule;
  model.coupling_scale = coupling_scale;
  model.epsilon = epsilon;
  return model;
}

void ExperimentConfig::validate() const {
  if (n < 1 || n > kMaxConfiguredSites) {
    reject("n", "must lie in [1, " + std::to_string(kMaxConfiguredSites) + "], got " +
                    std::to_string(n));
  }
  if (topology == Topology::triangle && n != 3) reject("n", "the triangle has exactly 3 sites");
  if (topology == Topology::nn_nnn_chain && n < 2) reject("n", "the chain needs at least 2 sites");
  if (topology != Topology::custom && !edges.empty()) {
    reject("edges", "only allowed with topology \"custom\"");
  }
  const auto net = network();
  if (!coupling_scale.empty() && coupling_scale.size() != net.edges().size()) {
    reject("coupling_scale", "needs one entry per edge (" + std::to_string(net.edges().size()) +
                                 "), got " + std::to_string(coupling_scale.size()));
  }
  for (const double c : coupling_scale) {
    if (!std::isfinite(c)) reject("coupling_scale", "entries must be finite");
  }
  if (!epsilon.empty() && epsilon.size() != n) {
    reject("epsilon", "needs one entry per site (" + std::to_string(n) + "), got " +
                          std::to_string(epsilon.size()));
  }
  for (const double e : epsilon) {
    if (!std::isfinite(e)) reject("epsilon", "entries must be finite");
  }
  schedule.validate();
  if (grid_points < 2) reject("grid_points", "need at least 2");
  positive(delta_s, "delta_s");
  if (!(delta_s < 0.5)) reject("delta_s", "must be below 0.5");
  positive(smoothing, "smoothing");
  positive(dt, "dt");
  if (dt > schedule.t_final) reject("dt", "must not exceed t_final");
  positive(gap_tol, "gap_tol");
  if (!(fidelity_threshold > 0.0 && fidelity_threshold <= 1.0)) {
    reject("fidelity_threshold", "must lie in (0, 1]");
  }
  if (threads < 1) reject("threads", "must be at least 1");
  if (out.empty()) reject("out", "must be a non-empty path");
}

std::string ExperimentConfig::to_json() const {
  json j = json::object();
  j["topology"] = std::string(to_string(topology));
  j["n"] = n;
  json edge_list = json::array();
  for (const auto& e : edges) edge_list.push_back({e.i, e.j});
  j["edges"] = edge_list;
  j["coupling_scale"] = coupling_scale;
  j["epsilon"] = epsilon;
  j["t_final"] = schedule.t_final;
  j["delta_max"] = schedule.delta_max;
  j["j_max"] = schedule.j_max;
  j["delta_floor"] = schedule.delta_floor;
  j["j_floor"] = schedule.j_floor;
  j["ramp"] = std::string(to_string(schedule.shape));
  j["grid_points"] = grid_points;
  j["chi_f"] = chi_f;
  j["witness"] = witness;
  j["macro"] = macro;
  j["dynamics_verify"] = dynamics_verify;
  j["delta_s"] = delta_s;
  j["smoothing"] = smoothing;
  j["dt"] = dt;
  j["gap_tol"] = gap_tol;
  j["fidelity_threshold"] = fidelity_threshold;
  j["shots"] = shots;
  j["seed"] = seed;
  j["threads"] = threads;
  j["out"] = out;
  return j.dump(2);
}

ExperimentConfig default_config(Topology topology, std::size_t n) {
  ExperimentConfig config;
  config.topology = topology;
  if (topology == Topology::triangle) {
    config.n = 3;
  } else if (n != 0) {
    config.n = n;
  } else {
    config.n = 12;
  }
  return config;
}

ExperimentConfig validate_config(std::string_view raw) {
  json root;
  try {
    root = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCategory::config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCategory::config, "config must be a JSON object");
  for (const auto& [key, value] : root.items()) {
    if (!known_keys().contains(key)) reject(key, "unknown key");
  }

  Topology topology = Topology::triangle;
  if (root.contains("topology")) {
    const auto text = get_string(root["topology"], "topology");
    try {
      topology = parse_topology(text);
    } catch (const Error&) {
      reject("topology", "unknown topology \"" + text + "\"");
    }
  }
  std::size_t n = 0;
  if (root.contains("n")) {
    n = get_count(root["n"], "n");
    if (n == 0) reject("n", "must lie in [1, " + std::to_string(kMaxConfiguredSites) + "], got 0");
  }
  if (topology == Topology::custom && n == 0) reject("n", "required for topology \"custom\"");
  auto config = default_config(topology, n);
  if (topology == Topology::triangle && n != 0) config.n = n;

  for (const auto& [key, value] : root.items()) {
    if (key == "topology" || key == "n") continue;
    if (key == "edges") config.edges = get_edges(value);
    else if (key == "coupling_scale") config.coupling_scale = get_numbers(value, key);
    else if (key == "epsilon") config.epsilon = get_numbers(value, key);
    else if (key == "t_final") config.schedule.t_final = get_number(value, key);
    else if (key == "delta_max") config.schedule.delta_max = get_number(value, key);
    else if (key == "j_max") config.schedule.j_max = get_number(value, key);
    else if (key == "delta_floor") config.schedule.delta_floor = get_number(value, key);
    else if (key == "j_floor") config.schedule.j_floor = get_number(value, key);
    else if (key == "ramp") {
      const auto text = get_string(value, key);
      try {
        config.schedule.shape = parse_ramp_shape(text);
      } catch (const Error&) {
        reject("ramp", "unknown ramp shape \"" + text + "\"");
      }
    }
    else if (key == "grid_points") config.grid_points = get_count(value, key);
    else if (key == "chi_f") config.chi_f = get_bool(value, key);
    else if (key == "witness") config.witness = get_bool(value, key);
    else if (key == "macro") config.macro = get_bool(value, key);
    else if (key == "dynamics_verify") config.dynamics_verify = get_bool(value, key);
    else if (key == "delta_s") config.delta_s = get_number(value, key);
    else if (key == "smoothing") config.smoothing = get_number(value, key);
    else if (key == "dt") config.dt = get_number(value, key);
    else if (key == "gap_tol") config.gap_tol = get_number(value, key);
    else if (key == "fidelity_threshold") config.fidelity_threshold = get_number(value, key);
    else if (key == "shots") config.shots = get_count(value, key);
    else if (key == "seed") {
      if (!value.is_number_unsigned()) reject("seed", "expected a non-negative integer");
      config.seed = value.get<std::uint64_t>();
    }
    else if (key == "threads") config.threads = get_count(value, key);
    else if (key == "out") config.out = get_string(value, key);
  }

  try {
    config.validate();
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::config) throw;
    throw Error(ErrorCategory::config, e.what());
  }
  return config;
}

}  // namespace fluxqpt
