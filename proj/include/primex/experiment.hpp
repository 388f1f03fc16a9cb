#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "primex/metrics.hpp"
#include "primex/network.hpp"
#include "primex/protocols.hpp"
#include "primex/scenario.hpp"

namespace primex {

/// Ground truth for one Monte Carlo run: x(1) is the prior mean, later states
/// follow the motion model with process noise. Entry k-1 holds time step k.
std::vector<Eigen::VectorXd> sample_truth(const ScenarioConfig& config, std::uint64_t seed);

/// Per-step, per-sensor-rank position measurements of a truth trajectory.
std::vector<std::vector<Eigen::VectorXd>> sample_measurements(
    const std::vector<Eigen::VectorXd>& truth, const SensorModel& sensor, int sensor_count,
    std::uint64_t seed);

struct TrajectoryData {
  std::vector<Eigen::VectorXd> truth;
  std::vector<std::vector<Eigen::VectorXd>> measurements;
};

struct RunOutcome {
  std::vector<double> rmse_by_step;
  long long transmissions = 0;
  double wall_seconds = 0.0;
};

/// One algorithm over one full trajectory on one graph. Wall time covers
/// filtering and communication only, not metric evaluation.
RunOutcome simulate_run(const NetworkGraph& graph, const TrajectoryData& trajectory,
                        AlgorithmSpec algorithm, int rounds, const ScenarioConfig& config);

/// Full Monte Carlo sweep: every configured algorithm crossed with every
/// rounds value in `rounds_values` (defaults to the config's single value),
/// mc_runs paired runs each, executed on a worker pool and aggregated in a
/// fixed order. The centralized filter is simulated once per run and reused
/// across rounds values.
MetricsReport run_experiment(const ScenarioConfig& config,
                             std::vector<int> rounds_values = {});

/// Writes rmse_over_time.csv, rmse_vs_rounds.csv, runtime_vs_rounds.csv,
/// transmission_rate.csv, and manifest.json into `out_dir`, creating it if
/// needed. All numeric CSV content is deterministic in the master seed except
/// the runtime file.
void write_report(const MetricsReport& report, const ScenarioConfig& config,
                  const std::vector<int>& rounds_values, const std::string& out_dir);

}  // namespace primex
