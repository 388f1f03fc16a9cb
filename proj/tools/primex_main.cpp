#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "primex/errors.hpp"
#include "primex/experiment.hpp"
#include "primex/fusion.hpp"
#include "primex/ic_codes.hpp"
#include "primex/metrics.hpp"
#include "primex/network.hpp"
#include "primex/protocols.hpp"
#include "primex/scenario.hpp"

#include "../tests/oracles/oracles.hpp"

namespace {

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      if (!current.empty()) {
        names.push_back(current);
        current.clear();
      }
      continue;
    }
    current.push_back(c);
  }
  if (!current.empty()) {
    names.push_back(current);
  }
  return names;
}

std::vector<int> parse_rounds(const std::string& text) {
  const auto range_pos = text.find("..");
  try {
    if (range_pos == std::string::npos) {
      return {std::stoi(text)};
    }
    const int lo = std::stoi(text.substr(0, range_pos));
    const int hi = std::stoi(text.substr(range_pos + 2));
    if (lo > hi) {
      throw primex::ConfigError("rounds range must be low..high");
    }
    std::vector<int> values;
    for (int l = lo; l <= hi; ++l) {
      values.push_back(l);
    }
    return values;
  } catch (const std::invalid_argument&) {
    throw primex::ConfigError("cannot parse rounds value: " + text);
  } catch (const std::out_of_range&) {
    throw primex::ConfigError("rounds value out of range: " + text);
  }
}

int run_command(const std::string& config_path, const std::string& algorithms,
                const std::string& rounds_text, int mc_override, std::int64_t seed_override,
                const std::string& out_dir) {
  primex::ScenarioConfig config = primex::load_scenario(config_path);
  if (!algorithms.empty()) {
    config.algorithms = split_names(algorithms);
  }
  if (mc_override > 0) {
    config.mc_runs = mc_override;
  }
  if (seed_override >= 0) {
    config.master_seed = static_cast<std::uint64_t>(seed_override);
  }
  std::vector<int> rounds_values;
  if (!rounds_text.empty()) {
    rounds_values = parse_rounds(rounds_text);
  } else {
    rounds_values = {config.rounds};
  }
  config.check();

  const primex::MetricsReport report = primex::run_experiment(config, rounds_values);
  primex::write_report(report, config, rounds_values, out_dir);

  std::printf("%-14s %7s %12s %12s %16s\n", "algorithm", "rounds", "avg_rmse", "tx_rate",
              "step_runtime_s");
  for (const auto& entry : report.entries) {
    std::printf("%-14s %7d %12.4f %12.4f %16.6f\n", entry.algorithm.c_str(), entry.rounds,
                entry.average_rmse, entry.transmission_rate, entry.average_step_runtime_s);
  }
  std::printf("outputs written to %s\n", out_dir.c_str());
  return 0;
}

int validate_topology_command(const std::string& path) {
  const primex::NetworkGraph graph = primex::load_topology(path);
  const primex::TopologyDiagnostics diag = graph.validate();
  std::printf("nodes:          %d\n", diag.node_count);
  std::printf("edges:          %d\n", diag.edge_count);
  std::printf("sensors:        %d\n", diag.sensor_count);
  std::printf("average degree: %.4f\n", diag.average_degree);
  std::printf("degree range:   [%d, %d]\n", diag.min_degree, diag.max_degree);
  std::printf("connected:      %s\n", diag.connected ? "yes" : "no");
  return diag.connected ? 0 : 1;
}

primex::InformationCode random_code(std::mt19937_64& rng, std::size_t length) {
  std::bernoulli_distribution bit(0.5);
  std::vector<std::uint8_t> bits(length);
  for (auto& b : bits) {
    b = bit(rng) ? 1 : 0;
  }
  return primex::InformationCode(std::move(bits));
}

void oracle_weights() {
  std::puts("least-squares fusion weights, solver vs. exhaustive grid:");
  struct Case {
    const char* label;
    std::vector<std::uint8_t> phi_i;
    std::vector<std::uint8_t> phi_j;
  };
  const std::vector<Case> cases = {
      {"disjoint singletons", {1, 0}, {0, 1}},
      {"received subset of local", {1, 1, 1, 0}, {1, 1, 0, 0}},
      {"partial overlap", {1, 1, 0, 0, 1}, {0, 1, 1, 1, 0}},
      {"one empty", {0, 0, 0, 0}, {1, 0, 1, 1}},
  };
  for (const auto& c : cases) {
    const primex::InformationCode phi_i{c.phi_i};
    const primex::InformationCode phi_j{c.phi_j};
    const auto solved = primex::solve_primex_weights(phi_i, phi_j);
    const double grid = primex::oracles::grid_search_weight(phi_i, phi_j);
    std::printf("  %-26s solver w_i=%.6f  grid w_i=%.6f  objective=%.3e\n", c.label,
                solved.w_i, grid,
                primex::oracles::weight_objective(phi_i, phi_j, solved.w_i));
  }
}

void oracle_codes() {
  std::puts("alternating multi-code fusion vs. element-wise maximum:");
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<primex::InformationCode> codes;
    const std::size_t length = 8;
    const int count = 2 + trial % 3;
    for (int n = 0; n < count; ++n) {
      codes.push_back(random_code(rng, length));
    }
    const auto fused = primex::ic_multi_fuse_alternating(codes);
    const auto reference = primex::oracles::bitwise_max_reference(codes);
    std::printf("  %d codes of length %zu: %s\n", count, length,
                fused == reference ? "match" : "MISMATCH");
  }
}

void oracle_pooling() {
  std::puts("scalar geometric pooling vs. numeric quadrature:");
  const auto a = primex::GaussianBelief::from_moments(
      Eigen::VectorXd::Constant(1, 1.0), Eigen::MatrixXd::Constant(1, 1, 2.0));
  const auto b = primex::GaussianBelief::from_moments(
      Eigen::VectorXd::Constant(1, -1.5), Eigen::MatrixXd::Constant(1, 1, 0.5));
  for (const double w : {0.25, 0.5, 0.75}) {
    const std::vector<primex::GaussianBelief> inputs = {a, b};
    const std::vector<double> weights = {w, 1.0 - w};
    const auto pooled = primex::geometric_pool(inputs, weights);
    const auto [mean, variance] =
        primex::oracles::scalar_pool_numeric(1.0, 2.0, -1.5, 0.5, w, 1.0 - w);
    std::printf("  w=%.2f  closed form mean=%.8f var=%.8f  quadrature mean=%.8f var=%.8f\n",
                w, pooled.mean()(0), pooled.covariance()(0, 0), mean, variance);
  }
}

void oracle_filter() {
  std::puts("information-form filtering vs. moment-form batch filter:");
  primex::ScenarioConfig config;
  config.steps = 10;
  config.mc_runs = 1;
  const auto motion = primex::motion_model(config);
  const auto sensor = primex::sensor_model(config);
  const auto prior = primex::prior_belief(config);

  const auto truth = primex::sample_truth(config, 11);
  const auto measurements = primex::sample_measurements(truth, sensor, 3, 13);
  const auto reference =
      primex::oracles::batch_information_filter(prior, motion, sensor, measurements);

  primex::GaussianBelief global = prior;
  double worst_mean = 0.0;
  double worst_cov = 0.0;
  for (std::size_t k = 0; k < measurements.size(); ++k) {
    std::vector<primex::SensorReading> readings;
    for (const auto& z : measurements[k]) {
      readings.push_back({z, sensor});
    }
    global = primex::centralized_step(global, readings, motion, k > 0);
    worst_mean = std::max(worst_mean, (global.mean() - reference[k].mean).norm());
    worst_cov =
        std::max(worst_cov, (global.covariance() - reference[k].covariance).norm());
  }
  std::printf("  10 steps, 3 sensors: max mean gap %.3e, max covariance gap %.3e\n",
              worst_mean, worst_cov);
}

void oracle_ci() {
  std::puts("covariance-intersection weight, line search vs. exhaustive grid:");
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::MatrixXd root(4, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        root(r, c) = normal(rng);
      }
    }
    const Eigen::MatrixXd cov_a =
        root * root.transpose() + 0.5 * Eigen::MatrixXd::Identity(4, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        root(r, c) = normal(rng);
      }
    }
    const Eigen::MatrixXd cov_b =
        root * root.transpose() + 0.5 * Eigen::MatrixXd::Identity(4, 4);
    const auto a = primex::GaussianBelief::from_moments(Eigen::VectorXd::Zero(4), cov_a);
    const auto b = primex::GaussianBelief::from_moments(Eigen::VectorXd::Zero(4), cov_b);
    std::printf("  pair %d: line search w=%.6f  grid w=%.6f\n", trial,
                primex::ci_optimal_weight(a, b), primex::oracles::ci_grid_weight(a, b));
  }
}

int oracle_command(const std::string& suite) {
  if (suite == "weights") {
    oracle_weights();
  } else if (suite == "codes") {
    oracle_codes();
  } else if (suite == "pooling") {
    oracle_pooling();
  } else if (suite == "filter") {
    oracle_filter();
  } else if (suite == "ci") {
    oracle_ci();
  } else if (suite == "all") {
    oracle_codes();
    oracle_weights();
    oracle_pooling();
    oracle_filter();
    oracle_ci();
  } else {
    throw primex::ConfigError(
        "unknown oracle suite: " + suite +
        " (available: codes, weights, pooling, filter, ci, all)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed single-target tracking with prime-coded information pedigrees"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the Monte Carlo tracking benchmark");
  std::string config_path;
  run->add_option("--config", config_path, "Scenario configuration (JSON)")->required();
  std::string algorithms;
  run->add_option("--algorithms", algorithms,
                  "Comma-separated algorithm list, overriding the config");
  std::string rounds_text;
  run->add_option("--rounds", rounds_text,
                  "Communication rounds per step: a value (7) or a range (1..10)");
  int mc = 0;
  run->add_option("--mc", mc, "Monte Carlo run count, overriding the config");
  std::int64_t seed = -1;
  run->add_option("--seed", seed, "Master seed, overriding the config");
  std::string out_dir = "results";
  run->add_option("--out", out_dir, "Output directory");

  auto* validate = app.add_subcommand("validate-topology", "Inspect a topology file");
  std::string topology_path;
  validate->add_option("--file", topology_path, "Topology file (JSON)")->required();

  auto* oracle = app.add_subcommand(
      "oracle", "Run an independent reference computation and print both sides");
  std::string suite;
  oracle->add_option("--suite", suite, "codes, weights, pooling, filter, ci, or all")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(config_path, algorithms, rounds_text, mc, seed, out_dir);
    }
    if (validate->parsed()) {
      return validate_topology_command(topology_path);
    }
    if (oracle->parsed()) {
      return oracle_command(suite);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
