#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "primex/belief.hpp"
#include "primex/network.hpp"

namespace primex {

/// Communication graph source: either generated per run from the size
/// parameters or loaded once from a file shared by every run.
struct NetworkSettings {
  std::optional<std::string> topology_file;
  int nodes = 40;
  int sensors = 9;
  double average_degree = 6.85;
};

struct ScenarioConfig {
  int steps = 50;
  double sample_time = 1.0;
  double process_noise_intensity = 25.0;
  double measurement_variance = 100.0;
  Eigen::VectorXd prior_mean = (Eigen::VectorXd(4) << 0.0, 0.0, 100.0, 100.0).finished();
  double prior_covariance_scale = 25.0;
  NetworkSettings network;
  int rounds = 7;
  std::vector<std::string> algorithms = {"cf", "ci-uw", "ci-ow", "primex-c-et",
                                         "primex-g-et"};
  int mc_runs = 100;
  std::uint64_t master_seed = 2025;
  /// Sliding-window length for the pedigree codes; empty keeps every index.
  std::optional<int> window_length;
  bool gate_first_round = false;
  bool exact_product_when_disjoint = false;

  /// Throws ConfigError on out-of-range fields or unknown algorithm names.
  void check() const;
};

MotionModel motion_model(const ScenarioConfig& config);
SensorModel sensor_model(const ScenarioConfig& config);
GaussianBelief prior_belief(const ScenarioConfig& config);

/// Strict parse: unknown keys anywhere in the document are a ConfigError.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig load_scenario(const std::string& path);

/// Stream purposes split off the master seed, one independent stream per
/// (run, purpose) pair.
enum class SeedPurpose : std::uint64_t {
  kTruth = 1,
  kMeasurements = 2,
  kTopology = 3,
};

/// Documented splitting scheme: two rounds of splitmix64 finalization over the
/// master seed, the run index, and the purpose tag. Runs and purposes yield
/// statistically independent, reproducible streams on every platform.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run, SeedPurpose purpose);

/// Graph for one Monte Carlo run: loaded from the configured file when one is
/// given, otherwise generated from the run's topology stream.
NetworkGraph scenario_topology(const ScenarioConfig& config, int run);

}  // namespace primex
