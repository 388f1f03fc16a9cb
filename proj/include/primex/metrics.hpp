#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "primex/protocols.hpp"

namespace primex {

/// Network-averaged position error at one time step:
/// sqrt(mean over nodes of squared position-error norm), positions extracted
/// by the observation matrix.
double rmse_at(const std::vector<Eigen::VectorXd>& estimates, const Eigen::VectorXd& truth,
               const Eigen::MatrixXd& H);

/// Fraction of (node, round, step) slots that carried a transmission.
double transmission_rate(const std::vector<RoundLog>& logs, int node_count, int rounds,
                         int steps);

/// Aggregated outcome for one (algorithm, rounds) pair over all Monte Carlo
/// runs.
struct AggregateMetrics {
  std::string algorithm;
  int rounds = 0;
  /// Per-step RMSE, each entry the mean over runs of the per-run network RMSE.
  std::vector<double> rmse_by_step;
  double average_rmse = 0.0;
  double average_step_runtime_s = 0.0;
  double transmission_rate = 0.0;
};

struct MetricsReport {
  std::vector<AggregateMetrics> entries;

  /// Throws ConfigError when the (algorithm, rounds) pair is absent.
  const AggregateMetrics& find(const std::string& algorithm, int rounds) const;
};

}  // namespace primex
