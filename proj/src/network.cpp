#include "primex/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "primex/errors.hpp"

namespace primex {

namespace {

std::pair<int, int> normalize_edge(int a, int b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

NetworkGraph::NetworkGraph(int node_count, std::vector<int> sensor_ids,
                           std::vector<std::pair<int, int>> edges)
    : node_count_(node_count),
      sensor_ids_(std::move(sensor_ids)),
      edges_(std::move(edges)) {
  if (node_count_ <= 0) {
    throw ConfigError("topology needs at least one node");
  }
  std::sort(sensor_ids_.begin(), sensor_ids_.end());
  if (std::adjacent_find(sensor_ids_.begin(), sensor_ids_.end()) != sensor_ids_.end()) {
    throw ConfigError("duplicate sensor id in topology");
  }
  for (int id : sensor_ids_) {
    if (id < 0 || id >= node_count_) {
      throw ConfigError("sensor id " + std::to_string(id) + " outside node range");
    }
  }

  for (auto& [a, b] : edges_) {
    if (a < 0 || a >= node_count_ || b < 0 || b >= node_count_) {
      throw ConfigError("edge endpoint outside node range");
    }
    if (a == b) {
      throw ConfigError("self-loop on node " + std::to_string(a));
    }
    std::tie(a, b) = normalize_edge(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw ConfigError("duplicate edge in topology");
  }

  adjacency_.assign(static_cast<std::size_t>(node_count_), {});
  for (const auto& [a, b] : edges_) {
    adjacency_[static_cast<std::size_t>(a)].push_back(b);
    adjacency_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end());
  }
}

const std::vector<int>& NetworkGraph::in_neighbors(int node) const {
  if (node < 0 || node >= node_count_) {
    throw BoundError("node id " + std::to_string(node) + " outside graph");
  }
  return adjacency_[static_cast<std::size_t>(node)];
}

bool NetworkGraph::is_sensor(int node) const { return sensor_rank(node) >= 0; }

int NetworkGraph::sensor_rank(int node) const {
  auto it = std::lower_bound(sensor_ids_.begin(), sensor_ids_.end(), node);
  if (it == sensor_ids_.end() || *it != node) {
    return -1;
  }
  return static_cast<int>(it - sensor_ids_.begin());
}

TopologyDiagnostics NetworkGraph::validate() const {
  TopologyDiagnostics out;
  out.node_count = node_count_;
  out.edge_count = static_cast<int>(edges_.size());
  out.sensor_count = static_cast<int>(sensor_ids_.size());
  out.average_degree = node_count_ > 0
                           ? 2.0 * static_cast<double>(edges_.size()) / node_count_
                           : 0.0;

  int min_deg = node_count_ > 0 ? static_cast<int>(adjacency_[0].size()) : 0;
  int max_deg = min_deg;
  for (const auto& list : adjacency_) {
    min_deg = std::min(min_deg, static_cast<int>(list.size()));
    max_deg = std::max(max_deg, static_cast<int>(list.size()));
  }
  out.min_degree = min_deg;
  out.max_degree = max_deg;

  std::vector<char> seen(static_cast<std::size_t>(node_count_), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int v : adjacency_[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  out.connected = reached == node_count_;
  return out;
}

NetworkGraph generate_topology(std::uint64_t seed, int node_count, int sensor_count,
                               double target_average_degree) {
  if (node_count < 2) {
    throw ConfigError("topology generation needs at least two nodes");
  }
  if (sensor_count < 1 || sensor_count > node_count) {
    throw ConfigError("sensor count must be between 1 and the node count");
  }
  const long long max_edges =
      static_cast<long long>(node_count) * (node_count - 1) / 2;
  const long long target_edges =
      std::llround(target_average_degree * node_count / 2.0);
  if (target_edges < node_count - 1 || target_edges > max_edges) {
    throw ConfigError("average degree " + std::to_string(target_average_degree) +
                      " cannot yield a connected simple graph on " +
                      std::to_string(node_count) + " nodes");
  }

  std::mt19937_64 rng(seed);

  std::vector<int> order(static_cast<std::size_t>(node_count));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::set<std::pair<int, int>> edge_set;
  for (int i = 1; i < node_count; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    edge_set.insert(normalize_edge(order[static_cast<std::size_t>(i)],
                                   order[static_cast<std::size_t>(pick(rng))]));
  }
  std::uniform_int_distribution<int> any_node(0, node_count - 1);
  while (static_cast<long long>(edge_set.size()) < target_edges) {
    int a = any_node(rng);
    int b = any_node(rng);
    if (a == b) {
      continue;
    }
    edge_set.insert(normalize_edge(a, b));
  }

  std::vector<int> ids(static_cast<std::size_t>(node_count));
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<int> sensors(ids.begin(), ids.begin() + sensor_count);

  return NetworkGraph(node_count, std::move(sensors),
                      {edge_set.begin(), edge_set.end()});
}

nlohmann::json topology_to_json(const NetworkGraph& graph) {
  nlohmann::json doc;
  doc["nodes"] = graph.node_count();
  doc["sensors"] = graph.sensor_ids();
  auto edges = nlohmann::json::array();
  for (const auto& [a, b] : graph.edges()) {
    edges.push_back({a, b});
  }
  doc["edges"] = std::move(edges);
  return doc;
}

NetworkGraph topology_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("topology document must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "nodes" && key != "sensors" && key != "edges") {
      throw ConfigError("unknown topology key: " + key);
    }
  }
  if (!doc.contains("nodes") || !doc.contains("sensors") || !doc.contains("edges")) {
    throw ConfigError("topology document needs nodes, sensors, and edges");
  }
  if (!doc["nodes"].is_number_integer()) {
    throw ConfigError("topology nodes must be an integer");
  }
  const int node_count = doc["nodes"].get<int>();

  std::vector<int> sensors;
  for (const auto& entry : doc["sensors"]) {
    if (!entry.is_number_integer()) {
      throw ConfigError("sensor ids must be integers");
    }
    sensors.push_back(entry.get<int>());
  }

  std::vector<std::pair<int, int>> edges;
  for (const auto& entry : doc["edges"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
        !entry[1].is_number_integer()) {
      throw ConfigError("each edge must be a [from, to] integer pair");
    }
    edges.emplace_back(entry[0].get<int>(), entry[1].get<int>());
  }
  return NetworkGraph(node_count, std::move(sensors), std::move(edges));
}

NetworkGraph load_topology(const std::string& path) {
  std::ifstream input(path);
  if (!input) {
    throw ConfigError("cannot open topology file: " + path);
  }
  nlohmann::json doc;
  try {
    input >> doc;
  } catch (const nlohmann::json::parse_error& err) {
    throw ConfigError("topology file " + path + " is not valid JSON: " + err.what());
  }
  return topology_from_json(doc);
}

}  // namespace primex
