#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "primex/belief.hpp"
#include "primex/fusion.hpp"
#include "primex/ic_codes.hpp"
#include "primex/network.hpp"

namespace primex {

enum class NodeRole { kSensor, kCommunication };

/// Per-node tracking state: the latest local density, its pedigree code, and
/// the reference code snapshotted at the node's last transmission.
struct NodeState {
  GaussianBelief belief;
  InformationCode ic;
  InformationCode reference_ic;
  NodeRole role = NodeRole::kCommunication;
  int sensor_rank = -1;
};

/// What happened in one communication round, for transmission accounting.
struct RoundLog {
  int time = 0;
  int round = 0;
  std::vector<int> transmitters;
  int fusion_count = 0;
};

enum class Algorithm {
  kCentralized,
  kCiUniform,
  kCiOptimized,
  kPrimexConsensus,
  kPrimexGossip,
};

/// Algorithm plus its communication policy, parsed from names such as
/// "cf", "ci-uw", "ci-ow", "primex-c", "primex-c-et", "primex-g", "primex-g-et".
struct AlgorithmSpec {
  Algorithm kind = Algorithm::kCentralized;
  bool event_triggered = false;

  static AlgorithmSpec parse(const std::string& name);
  std::string name() const;
  bool distributed() const { return kind != Algorithm::kCentralized; }
};

struct ProtocolConfig {
  int rounds = 1;
  bool event_triggered = false;
  /// Gate round 1 against the persisted reference instead of always
  /// transmitting. Off by default.
  bool gate_first_round = false;
  FusionOptions fusion;
};

/// Local filtering at the start of a time step: optional prediction, the code
/// layout update from `allocation`, and for sensor nodes the measurement
/// update plus the new pedigree bit. Throws ProtocolError when the presence of
/// a measurement disagrees with the node's role.
NodeState local_step(const NodeState& state, const TimeAllocation& allocation,
                     const std::optional<Eigen::VectorXd>& measurement,
                     const MotionModel& motion, const SensorModel& sensor,
                     bool do_predict = true);

/// Transmission decision for round `l`. Round 1 always transmits unless
/// `gate_first_round`; later rounds transmit only when the code gained bits
/// since the node's last transmission. On transmit the reference code is
/// refreshed.
std::pair<bool, NodeState> event_gate(const NodeState& state, int round,
                                      bool gate_first_round = false);

/// One synchronous consensus round of pairwise memoryless fusion: transmitters
/// are gated, a snapshot of their round-start states is taken, and every node
/// folds over its transmitting in-neighbors in ascending id order.
std::pair<std::vector<NodeState>, RoundLog> consensus_round(const std::vector<NodeState>& states,
                                                            const NetworkGraph& graph, int round,
                                                            const ProtocolConfig& config);

/// One greedy gossip round: each node fuses with the single transmitting
/// in-neighbor offering the largest code increment (ties to the lowest id);
/// a zero best score means no fusion for that node.
std::pair<std::vector<NodeState>, RoundLog> gossip_round(const std::vector<NodeState>& states,
                                                         const NetworkGraph& graph, int round,
                                                         const ProtocolConfig& config);

/// Full time step for one algorithm: local filtering at every node, then the
/// configured number of communication rounds. The centralized filter bypasses
/// rounds and maintains a single global belief mirrored to every node; CI
/// variants run always-on consensus-style rounds with their own fusion rules.
std::pair<std::vector<NodeState>, std::vector<RoundLog>> run_time_step(
    const std::vector<NodeState>& states, const NetworkGraph& graph, AlgorithmSpec algorithm,
    int k, const std::vector<Eigen::VectorXd>& measurements_by_rank,
    PrimeIndexAllocator& allocator, const MotionModel& motion, const SensorModel& sensor,
    const ProtocolConfig& config);

}  // namespace primex
