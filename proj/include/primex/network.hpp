#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace primex {

struct TopologyDiagnostics {
  bool connected = false;
  int node_count = 0;
  int edge_count = 0;
  int sensor_count = 0;
  double average_degree = 0.0;
  int min_degree = 0;
  int max_degree = 0;
};

/// Undirected communication graph over nodes 0..node_count-1 with a designated
/// sensor subset. Edges are stored normalized (low id first) and deduplicated;
/// the constructor rejects self-loops, duplicate edges (either orientation),
/// out-of-range ids, and repeated sensor ids.
class NetworkGraph {
 public:
  NetworkGraph(int node_count, std::vector<int> sensor_ids,
               std::vector<std::pair<int, int>> edges);

  int node_count() const { return node_count_; }
  const std::vector<int>& sensor_ids() const { return sensor_ids_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Sorted ids of the nodes whose transmissions reach `node`. Throws
  /// BoundError for an id outside the graph.
  const std::vector<int>& in_neighbors(int node) const;

  int degree(int node) const { return static_cast<int>(in_neighbors(node).size()); }

  bool is_sensor(int node) const;
  /// Rank of `node` within the sorted sensor list, or -1 for pure
  /// communication nodes.
  int sensor_rank(int node) const;

  TopologyDiagnostics validate() const;

 private:
  int node_count_;
  std::vector<int> sensor_ids_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Random connected topology with an exact edge count of
/// round(target_average_degree * node_count / 2): a uniformly attached
/// spanning tree over a shuffled node order, then rejection-sampled extra
/// edges. Sensor ids are a uniform subset. Throws ConfigError when the edge
/// budget cannot host a connected simple graph.
NetworkGraph generate_topology(std::uint64_t seed, int node_count, int sensor_count,
                               double target_average_degree);

/// Serialization matching the on-disk schema:
/// {"nodes": N, "sensors": [...], "edges": [[from, to], ...]}.
nlohmann::json topology_to_json(const NetworkGraph& graph);
NetworkGraph topology_from_json(const nlohmann::json& doc);
NetworkGraph load_topology(const std::string& path);

}  // namespace primex
