#include "primex/protocols.hpp"

#include <algorithm>
#include <utility>

#include "primex/errors.hpp"

namespace primex {

AlgorithmSpec AlgorithmSpec::parse(const std::string& name) {
  if (name == "cf") return {Algorithm::kCentralized, false};
  if (name == "ci-uw") return {Algorithm::kCiUniform, false};
  if (name == "ci-ow") return {Algorithm::kCiOptimized, false};
  if (name == "primex-c") return {Algorithm::kPrimexConsensus, false};
  if (name == "primex-c-et") return {Algorithm::kPrimexConsensus, true};
  if (name == "primex-g") return {Algorithm::kPrimexGossip, false};
  if (name == "primex-g-et") return {Algorithm::kPrimexGossip, true};
  throw ConfigError("unknown algorithm: " + name);
}

std::string AlgorithmSpec::name() const {
  switch (kind) {
    case Algorithm::kCentralized:
      return "cf";
    case Algorithm::kCiUniform:
      return "ci-uw";
    case Algorithm::kCiOptimized:
      return "ci-ow";
    case Algorithm::kPrimexConsensus:
      return event_triggered ? "primex-c-et" : "primex-c";
    case Algorithm::kPrimexGossip:
      return event_triggered ? "primex-g-et" : "primex-g";
  }
  throw ConfigError("unnamed algorithm kind");
}

NodeState local_step(const NodeState& state, const TimeAllocation& allocation,
                     const std::optional<Eigen::VectorXd>& measurement,
                     const MotionModel& motion, const SensorModel& sensor,
                     bool do_predict) {
  const bool is_sensor = state.role == NodeRole::kSensor;
  if (is_sensor && !measurement.has_value()) {
    throw ProtocolError("sensor node reached a time step without a measurement");
  }
  if (!is_sensor && measurement.has_value()) {
    throw ProtocolError("communication node was handed a measurement");
  }
  if (is_sensor &&
      (state.sensor_rank < 0 ||
       static_cast<std::size_t>(state.sensor_rank) >= allocation.position_by_rank.size())) {
    throw ProtocolError("sensor node has no valid rank in the index layout");
  }

  NodeState next = state;
  if (do_predict) {
    next.belief = predict(next.belief, motion);
  }
  next.ic.drop_front(allocation.dropped);
  next.ic.append_zeros(allocation.appended);
  next.reference_ic.drop_front(allocation.dropped);
  next.reference_ic.append_zeros(allocation.appended);
  if (is_sensor) {
    next.belief = update(next.belief, *measurement, sensor);
    next.ic.set_bit(allocation.position_by_rank[static_cast<std::size_t>(state.sensor_rank)]);
  }
  return next;
}

std::pair<bool, NodeState> event_gate(const NodeState& state, int round,
                                      bool gate_first_round) {
  if (round < 1) {
    throw ProtocolError("communication rounds are numbered from 1");
  }
  bool transmit;
  if (round == 1 && !gate_first_round) {
    transmit = true;
  } else {
    transmit = has_new_bits(state.ic, state.reference_ic);
  }
  if (!transmit) {
    return {false, state};
  }
  NodeState next = state;
  next.reference_ic = state.ic;
  return {true, next};
}

namespace {

struct GatedRound {
  std::vector<char> transmits;
  std::vector<NodeState> states;
  std::vector<int> transmitter_ids;
};

GatedRound gate_round(const std::vector<NodeState>& states, int round,
                      const ProtocolConfig& config) {
  GatedRound out;
  out.transmits.assign(states.size(), 1);
  out.states = states;
  if (config.event_triggered) {
    for (std::size_t i = 0; i < states.size(); ++i) {
      auto [transmit, gated] = event_gate(states[i], round, config.gate_first_round);
      out.transmits[i] = transmit ? 1 : 0;
      out.states[i] = std::move(gated);
    }
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (out.transmits[i]) {
      out.transmitter_ids.push_back(static_cast<int>(i));
    }
  }
  return out;
}

void require_full_cohort(const std::vector<NodeState>& states, const NetworkGraph& graph) {
  if (static_cast<int>(states.size()) != graph.node_count()) {
    throw ProtocolError("state vector does not cover every node in the graph");
  }
}

}  // namespace

std::pair<std::vector<NodeState>, RoundLog> consensus_round(const std::vector<NodeState>& states,
                                                            const NetworkGraph& graph, int round,
                                                            const ProtocolConfig& config) {
  require_full_cohort(states, graph);
  GatedRound gated = gate_round(states, round, config);
  RoundLog log;
  log.round = round;
  log.transmitters = gated.transmitter_ids;

  std::vector<NodeState> next = std::move(gated.states);
  for (int i = 0; i < graph.node_count(); ++i) {
    auto& self = next[static_cast<std::size_t>(i)];
    CodedBelief current{self.belief, self.ic};
    for (int j : graph.in_neighbors(i)) {
      if (!gated.transmits[static_cast<std::size_t>(j)]) {
        continue;
      }
      const NodeState& sender = states[static_cast<std::size_t>(j)];
      if (!has_new_bits(sender.ic, current.ic)) {
        continue;
      }
      current = primex_pairwise_fuse(current, {sender.belief, sender.ic}, config.fusion);
      ++log.fusion_count;
    }
    self.belief = std::move(current.belief);
    self.ic = std::move(current.ic);
  }
  return {std::move(next), std::move(log)};
}

std::pair<std::vector<NodeState>, RoundLog> gossip_round(const std::vector<NodeState>& states,
                                                         const NetworkGraph& graph, int round,
                                                         const ProtocolConfig& config) {
  require_full_cohort(states, graph);
  GatedRound gated = gate_round(states, round, config);
  RoundLog log;
  log.round = round;
  log.transmitters = gated.transmitter_ids;

  std::vector<NodeState> next = std::move(gated.states);
  for (int i = 0; i < graph.node_count(); ++i) {
    const NodeState& self = states[static_cast<std::size_t>(i)];
    int best_neighbor = -1;
    std::size_t best_score = 0;
    for (int j : graph.in_neighbors(i)) {
      if (!gated.transmits[static_cast<std::size_t>(j)]) {
        continue;
      }
      const std::size_t score =
          ic_score(ic_increment(states[static_cast<std::size_t>(j)].ic, self.ic));
      if (score > best_score) {
        best_score = score;
        best_neighbor = j;
      }
    }
    if (best_neighbor < 0) {
      continue;
    }
    auto& target = next[static_cast<std::size_t>(i)];
    const NodeState& sender = states[static_cast<std::size_t>(best_neighbor)];
    CodedBelief fused = primex_pairwise_fuse({target.belief, target.ic},
                                             {sender.belief, sender.ic}, config.fusion);
    target.belief = std::move(fused.belief);
    target.ic = std::move(fused.ic);
    ++log.fusion_count;
  }
  return {std::move(next), std::move(log)};
}

namespace {

std::pair<std::vector<NodeState>, RoundLog> covariance_intersection_round(
    const std::vector<NodeState>& states, const NetworkGraph& graph, int round,
    bool optimized_weights) {
  require_full_cohort(states, graph);
  RoundLog log;
  log.round = round;
  for (int i = 0; i < graph.node_count(); ++i) {
    log.transmitters.push_back(i);
  }

  std::vector<NodeState> next = states;
  for (int i = 0; i < graph.node_count(); ++i) {
    const auto& neighbors = graph.in_neighbors(i);
    if (neighbors.empty()) {
      continue;
    }
    auto& self = next[static_cast<std::size_t>(i)];
    if (optimized_weights) {
      GaussianBelief current = self.belief;
      for (int j : neighbors) {
        current = ci_pairwise_optimal(current, states[static_cast<std::size_t>(j)].belief);
        ++log.fusion_count;
      }
      self.belief = std::move(current);
    } else {
      std::vector<GaussianBelief> received;
      received.reserve(neighbors.size());
      for (int j : neighbors) {
        received.push_back(states[static_cast<std::size_t>(j)].belief);
      }
      self.belief = ci_uniform_fuse(self.belief, received);
      log.fusion_count += static_cast<int>(neighbors.size());
    }
  }
  return {std::move(next), std::move(log)};
}

}  // namespace

std::pair<std::vector<NodeState>, std::vector<RoundLog>> run_time_step(
    const std::vector<NodeState>& states, const NetworkGraph& graph, AlgorithmSpec algorithm,
    int k, const std::vector<Eigen::VectorXd>& measurements_by_rank,
    PrimeIndexAllocator& allocator, const MotionModel& motion, const SensorModel& sensor,
    const ProtocolConfig& config) {
  require_full_cohort(states, graph);
  if (measurements_by_rank.size() != graph.sensor_ids().size()) {
    throw ProtocolError("measurement count does not match the sensor count");
  }
  const TimeAllocation allocation = allocator.advance(k);
  const bool do_predict = k > 1;

  if (algorithm.kind == Algorithm::kCentralized) {
    std::vector<SensorReading> readings;
    readings.reserve(measurements_by_rank.size());
    for (const auto& z : measurements_by_rank) {
      readings.push_back({z, sensor});
    }
    const GaussianBelief global =
        centralized_step(states.front().belief, readings, motion, do_predict);
    std::vector<NodeState> next = states;
    for (auto& node : next) {
      node.belief = global;
      node.ic.drop_front(allocation.dropped);
      node.ic.append_zeros(allocation.appended);
      node.reference_ic.drop_front(allocation.dropped);
      node.reference_ic.append_zeros(allocation.appended);
    }
    return {std::move(next), {}};
  }

  ProtocolConfig effective = config;
  effective.event_triggered = algorithm.event_triggered;
  if (effective.rounds < 0) {
    throw ProtocolError("the communication round count cannot be negative");
  }

  std::vector<NodeState> current = states;
  for (int i = 0; i < graph.node_count(); ++i) {
    const NodeState& node = current[static_cast<std::size_t>(i)];
    const bool graph_sensor = graph.is_sensor(i);
    if (graph_sensor != (node.role == NodeRole::kSensor)) {
      throw ProtocolError("node role disagrees with the topology sensor set");
    }
    std::optional<Eigen::VectorXd> z;
    if (graph_sensor) {
      z = measurements_by_rank[static_cast<std::size_t>(graph.sensor_rank(i))];
    }
    current[static_cast<std::size_t>(i)] =
        local_step(node, allocation, z, motion, sensor, do_predict);
  }

  std::vector<RoundLog> logs;
  logs.reserve(static_cast<std::size_t>(effective.rounds));
  for (int l = 1; l <= effective.rounds; ++l) {
    std::pair<std::vector<NodeState>, RoundLog> result;
    switch (algorithm.kind) {
      case Algorithm::kPrimexConsensus:
        result = consensus_round(current, graph, l, effective);
        break;
      case Algorithm::kPrimexGossip:
        result = gossip_round(current, graph, l, effective);
        break;
      case Algorithm::kCiUniform:
        result = covariance_intersection_round(current, graph, l, false);
        break;
      case Algorithm::kCiOptimized:
        result = covariance_intersection_round(current, graph, l, true);
        break;
      case Algorithm::kCentralized:
        throw ProtocolError("centralized filtering does not run communication rounds");
    }
    current = std::move(result.first);
    result.second.time = k;
    logs.push_back(std::move(result.second));
  }
  return {std::move(current), std::move(logs)};
}

}  // namespace primex
