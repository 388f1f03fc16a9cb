#include "primex/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <utility>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include "primex/errors.hpp"

namespace primex {

namespace {

Eigen::VectorXd draw_gaussian(const Eigen::MatrixXd& covariance_sqrt, std::mt19937_64& rng,
                              std::normal_distribution<double>& normal) {
  Eigen::VectorXd unit(covariance_sqrt.cols());
  for (Eigen::Index i = 0; i < unit.size(); ++i) {
    unit(i) = normal(rng);
  }
  return covariance_sqrt * unit;
}

Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& covariance) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw ModelError("noise covariance is not positive-definite");
  }
  return llt.matrixL();
}

}  // namespace

std::vector<Eigen::VectorXd> sample_truth(const ScenarioConfig& config, std::uint64_t seed) {
  const MotionModel motion = motion_model(config);
  std::vector<Eigen::VectorXd> truth;
  truth.reserve(static_cast<std::size_t>(config.steps));
  truth.push_back(config.prior_mean);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool noisy = config.process_noise_intensity > 0.0;
  const Eigen::MatrixXd noise_sqrt =
      noisy ? lower_cholesky(motion.Q) : Eigen::MatrixXd::Zero(4, 4);
  for (int k = 2; k <= config.steps; ++k) {
    Eigen::VectorXd next = motion.F * truth.back();
    if (noisy) {
      next += draw_gaussian(noise_sqrt, rng, normal);
    }
    truth.push_back(std::move(next));
  }
  return truth;
}

std::vector<std::vector<Eigen::VectorXd>> sample_measurements(
    const std::vector<Eigen::VectorXd>& truth, const SensorModel& sensor, int sensor_count,
    std::uint64_t seed) {
  if (sensor_count < 0) {
    throw ConfigError("sensor count must be nonnegative");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool noisy = sensor.R.norm() > 0.0;
  const Eigen::MatrixXd noise_sqrt =
      noisy ? lower_cholesky(sensor.R) : Eigen::MatrixXd::Zero(sensor.R.rows(), sensor.R.cols());

  std::vector<std::vector<Eigen::VectorXd>> out;
  out.reserve(truth.size());
  for (const auto& x : truth) {
    std::vector<Eigen::VectorXd> per_sensor;
    per_sensor.reserve(static_cast<std::size_t>(sensor_count));
    for (int s = 0; s < sensor_count; ++s) {
      Eigen::VectorXd z = sensor.H * x;
      if (noisy) {
        z += draw_gaussian(noise_sqrt, rng, normal);
      }
      per_sensor.push_back(std::move(z));
    }
    out.push_back(std::move(per_sensor));
  }
  return out;
}

RunOutcome simulate_run(const NetworkGraph& graph, const TrajectoryData& trajectory,
                        AlgorithmSpec algorithm, int rounds, const ScenarioConfig& config) {
  if (trajectory.truth.size() != static_cast<std::size_t>(config.steps) ||
      trajectory.measurements.size() != trajectory.truth.size()) {
    throw ConfigError("trajectory does not cover the configured number of steps");
  }
  const MotionModel motion = motion_model(config);
  const SensorModel sensor = sensor_model(config);
  const GaussianBelief prior = prior_belief(config);
  const int sensor_count = static_cast<int>(graph.sensor_ids().size());

  PrimeIndexAllocator allocator(sensor_count, config.window_length);
  InformationCode prior_code = InformationCode::zeros(1);
  prior_code.set_bit(PrimeIndexAllocator::kPriorIndex);

  std::vector<NodeState> states(static_cast<std::size_t>(graph.node_count()));
  for (int i = 0; i < graph.node_count(); ++i) {
    auto& node = states[static_cast<std::size_t>(i)];
    node.belief = prior;
    node.ic = prior_code;
    node.reference_ic = InformationCode::zeros(1);
    node.role = graph.is_sensor(i) ? NodeRole::kSensor : NodeRole::kCommunication;
    node.sensor_rank = graph.sensor_rank(i);
  }

  ProtocolConfig protocol;
  protocol.rounds = rounds;
  protocol.event_triggered = algorithm.event_triggered;
  protocol.gate_first_round = config.gate_first_round;
  protocol.fusion.exact_product_when_disjoint = config.exact_product_when_disjoint;

  RunOutcome outcome;
  outcome.rmse_by_step.reserve(static_cast<std::size_t>(config.steps));
  std::vector<Eigen::VectorXd> means(states.size());
  using Clock = std::chrono::steady_clock;

  for (int k = 1; k <= config.steps; ++k) {
    const auto& z_by_rank = trajectory.measurements[static_cast<std::size_t>(k - 1)];
    const auto step_start = Clock::now();
    auto [next, logs] = run_time_step(states, graph, algorithm, k, z_by_rank, allocator,
                                      motion, sensor, protocol);
    outcome.wall_seconds += std::chrono::duration<double>(Clock::now() - step_start).count();
    states = std::move(next);
    for (const auto& log : logs) {
      outcome.transmissions += static_cast<long long>(log.transmitters.size());
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
      means[i] = states[i].belief.mean();
    }
    outcome.rmse_by_step.push_back(
        rmse_at(means, trajectory.truth[static_cast<std::size_t>(k - 1)], sensor.H));
  }
  return outcome;
}

namespace {

struct RunResults {
  /// Outcomes keyed by (algorithm list position, rounds value position); the
  /// centralized filter stores one outcome in every rounds slot.
  std::vector<std::vector<RunOutcome>> by_algorithm_and_rounds;
};

RunResults execute_run(const ScenarioConfig& config, const std::vector<int>& rounds_values,
                       const NetworkGraph* shared_graph, int run) {
  const NetworkGraph graph =
      shared_graph != nullptr ? *shared_graph : scenario_topology(config, run);
  TrajectoryData trajectory;
  trajectory.truth = sample_truth(
      config, derive_seed(config.master_seed, static_cast<std::uint64_t>(run),
                          SeedPurpose::kTruth));
  trajectory.measurements = sample_measurements(
      trajectory.truth, sensor_model(config), static_cast<int>(graph.sensor_ids().size()),
      derive_seed(config.master_seed, static_cast<std::uint64_t>(run),
                  SeedPurpose::kMeasurements));

  RunResults results;
  results.by_algorithm_and_rounds.resize(config.algorithms.size());
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    const AlgorithmSpec spec = AlgorithmSpec::parse(config.algorithms[a]);
    auto& slots = results.by_algorithm_and_rounds[a];
    slots.resize(rounds_values.size());
    if (spec.kind == Algorithm::kCentralized) {
      RunOutcome outcome =
          simulate_run(graph, trajectory, spec, rounds_values.front(), config);
      for (auto& slot : slots) {
        slot = outcome;
      }
      continue;
    }
    for (std::size_t l = 0; l < rounds_values.size(); ++l) {
      slots[l] = simulate_run(graph, trajectory, spec, rounds_values[l], config);
    }
  }
  return results;
}

}  // namespace

MetricsReport run_experiment(const ScenarioConfig& config, std::vector<int> rounds_values) {
  config.check();
  if (rounds_values.empty()) {
    rounds_values.push_back(config.rounds);
  }
  for (int rounds : rounds_values) {
    if (rounds < 0) {
      throw ConfigError("rounds values must be nonnegative");
    }
  }

  std::optional<NetworkGraph> shared_graph;
  if (config.network.topology_file.has_value()) {
    shared_graph = load_topology(*config.network.topology_file);
  }

  std::vector<RunResults> all_runs(static_cast<std::size_t>(config.mc_runs));
  std::atomic<int> next_run{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const unsigned worker_count = std::max(
      1u, std::min(std::thread::hardware_concurrency(),
                   static_cast<unsigned>(config.mc_runs)));
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  for (unsigned w = 0; w < worker_count; ++w) {
    workers.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const int run = next_run.fetch_add(1);
        if (run >= config.mc_runs) {
          return;
        }
        try {
          all_runs[static_cast<std::size_t>(run)] = execute_run(
              config, rounds_values, shared_graph ? &*shared_graph : nullptr, run);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
          }
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& worker : workers) {
    worker.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  const int node_count = shared_graph
                             ? shared_graph->node_count()
                             : config.network.nodes;
  MetricsReport report;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (std::size_t l = 0; l < rounds_values.size(); ++l) {
      AggregateMetrics entry;
      entry.algorithm = config.algorithms[a];
      entry.rounds = rounds_values[l];
      entry.rmse_by_step.assign(static_cast<std::size_t>(config.steps), 0.0);
      double rate_sum = 0.0;
      double runtime_sum = 0.0;
      for (const auto& run : all_runs) {
        const RunOutcome& outcome = run.by_algorithm_and_rounds[a][l];
        for (std::size_t k = 0; k < entry.rmse_by_step.size(); ++k) {
          entry.rmse_by_step[k] += outcome.rmse_by_step[k];
        }
        const long long slots = static_cast<long long>(node_count) *
                                entry.rounds * config.steps;
        rate_sum += slots > 0 ? static_cast<double>(outcome.transmissions) /
                                    static_cast<double>(slots)
                              : 0.0;
        runtime_sum += outcome.wall_seconds / config.steps;
      }
      const double runs = static_cast<double>(config.mc_runs);
      for (auto& value : entry.rmse_by_step) {
        value /= runs;
      }
      double rmse_sum = 0.0;
      for (double value : entry.rmse_by_step) {
        rmse_sum += value;
      }
      entry.average_rmse = rmse_sum / static_cast<double>(config.steps);
      entry.transmission_rate = rate_sum / runs;
      entry.average_step_runtime_s = runtime_sum / runs;
      report.entries.push_back(std::move(entry));
    }
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const AggregateMetrics& a, const AggregateMetrics& b) {
              if (a.algorithm != b.algorithm) {
                return a.algorithm < b.algorithm;
              }
              return a.rounds < b.rounds;
            });
  return report;
}

namespace {

std::string format_value(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot write output file: " + path.string());
  }
  return out;
}

}  // namespace

void write_report(const MetricsReport& report, const ScenarioConfig& config,
                  const std::vector<int>& rounds_values, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + dir.string() + ": " +
                      ec.message());
  }

  {
    auto out = open_output(dir / "rmse_over_time.csv");
    out << "algorithm,rounds,step,rmse\n";
    for (const auto& entry : report.entries) {
      for (std::size_t k = 0; k < entry.rmse_by_step.size(); ++k) {
        out << entry.algorithm << ',' << entry.rounds << ',' << (k + 1) << ','
            << format_value(entry.rmse_by_step[k]) << '\n';
      }
    }
  }
  {
    auto out = open_output(dir / "rmse_vs_rounds.csv");
    out << "algorithm,rounds,avg_rmse\n";
    for (const auto& entry : report.entries) {
      out << entry.algorithm << ',' << entry.rounds << ','
          << format_value(entry.average_rmse) << '\n';
    }
  }
  {
    auto out = open_output(dir / "runtime_vs_rounds.csv");
    out << "algorithm,rounds,avg_step_runtime_s\n";
    for (const auto& entry : report.entries) {
      out << entry.algorithm << ',' << entry.rounds << ','
          << format_value(entry.average_step_runtime_s) << '\n';
    }
  }
  {
    auto out = open_output(dir / "transmission_rate.csv");
    out << "algorithm,rounds,rate\n";
    for (const auto& entry : report.entries) {
      out << entry.algorithm << ',' << entry.rounds << ','
          << format_value(entry.transmission_rate) << '\n';
    }
  }

  nlohmann::json manifest;
  manifest["config"] = scenario_to_json(config);
  manifest["rounds_values"] = rounds_values;
  manifest["outputs"] = {"rmse_over_time.csv", "rmse_vs_rounds.csv",
                         "runtime_vs_rounds.csv", "transmission_rate.csv"};
  nlohmann::json seeds;
  seeds["master"] = config.master_seed;
  auto runs = nlohmann::json::array();
  for (int run = 0; run < config.mc_runs; ++run) {
    nlohmann::json entry;
    entry["run"] = run;
    entry["truth"] = derive_seed(config.master_seed, static_cast<std::uint64_t>(run),
                                 SeedPurpose::kTruth);
    entry["measurements"] = derive_seed(
        config.master_seed, static_cast<std::uint64_t>(run), SeedPurpose::kMeasurements);
    if (!config.network.topology_file.has_value()) {
      entry["topology"] = derive_seed(config.master_seed, static_cast<std::uint64_t>(run),
                                      SeedPurpose::kTopology);
    }
    runs.push_back(std::move(entry));
  }
  seeds["runs"] = std::move(runs);
  manifest["seeds"] = std::move(seeds);

  auto out = open_output(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
}

}  // namespace primex
