#include "primex/metrics.hpp"

#include <cmath>

#include "primex/errors.hpp"

namespace primex {

double rmse_at(const std::vector<Eigen::VectorXd>& estimates, const Eigen::VectorXd& truth,
               const Eigen::MatrixXd& H) {
  if (estimates.empty()) {
    throw DimensionError("network position error needs at least one estimate");
  }
  const Eigen::VectorXd observed_truth = H * truth;
  double sum_sq = 0.0;
  for (const auto& estimate : estimates) {
    sum_sq += (H * estimate - observed_truth).squaredNorm();
  }
  return std::sqrt(sum_sq / static_cast<double>(estimates.size()));
}

double transmission_rate(const std::vector<RoundLog>& logs, int node_count, int rounds,
                         int steps) {
  if (node_count <= 0 || rounds <= 0 || steps <= 0) {
    return 0.0;
  }
  long long transmissions = 0;
  for (const auto& log : logs) {
    transmissions += static_cast<long long>(log.transmitters.size());
  }
  return static_cast<double>(transmissions) /
         (static_cast<double>(node_count) * rounds * steps);
}

const AggregateMetrics& MetricsReport::find(const std::string& algorithm, int rounds) const {
  for (const auto& entry : entries) {
    if (entry.algorithm == algorithm && entry.rounds == rounds) {
      return entry;
    }
  }
  throw ConfigError("no metrics recorded for " + algorithm + " with " +
                    std::to_string(rounds) + " rounds");
}

}  // namespace primex
