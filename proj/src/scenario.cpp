#include "primex/scenario.hpp"

#include <fstream>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "primex/errors.hpp"
#include "primex/protocols.hpp"

namespace primex {

namespace {

void require_keys(const nlohmann::json& doc, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!doc.is_object()) {
    throw ConfigError(where + " must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key in " + where + ": " + key);
    }
  }
}

double number_field(const nlohmann::json& doc, const std::string& key, double fallback) {
  if (!doc.contains(key)) {
    return fallback;
  }
  if (!doc[key].is_number()) {
    throw ConfigError("field " + key + " must be a number");
  }
  return doc[key].get<double>();
}

int int_field(const nlohmann::json& doc, const std::string& key, int fallback) {
  if (!doc.contains(key)) {
    return fallback;
  }
  if (!doc[key].is_number_integer()) {
    throw ConfigError("field " + key + " must be an integer");
  }
  return doc[key].get<int>();
}

bool bool_field(const nlohmann::json& doc, const std::string& key, bool fallback) {
  if (!doc.contains(key)) {
    return fallback;
  }
  if (!doc[key].is_boolean()) {
    throw ConfigError("field " + key + " must be a boolean");
  }
  return doc[key].get<bool>();
}

}  // namespace

void ScenarioConfig::check() const {
  if (steps < 1) {
    throw ConfigError("steps must be at least 1");
  }
  if (rounds < 0) {
    throw ConfigError("rounds must be nonnegative");
  }
  if (mc_runs < 1) {
    throw ConfigError("mc_runs must be at least 1");
  }
  if (sample_time <= 0.0) {
    throw ConfigError("sample_time must be positive");
  }
  if (process_noise_intensity < 0.0) {
    throw ConfigError("process_noise_intensity must be nonnegative");
  }
  if (measurement_variance <= 0.0) {
    throw ConfigError("measurement_variance must be positive");
  }
  if (prior_mean.size() != 4) {
    throw ConfigError("prior_mean must have four entries");
  }
  if (prior_covariance_scale <= 0.0) {
    throw ConfigError("prior_covariance_scale must be positive");
  }
  if (window_length.has_value() && *window_length < 1) {
    throw ConfigError("window_length must be positive when finite");
  }
  if (algorithms.empty()) {
    throw ConfigError("at least one algorithm is required");
  }
  for (const auto& name : algorithms) {
    AlgorithmSpec::parse(name);
  }
  if (!network.topology_file.has_value()) {
    if (network.nodes < 2) {
      throw ConfigError("network.nodes must be at least 2");
    }
    if (network.sensors < 1 || network.sensors > network.nodes) {
      throw ConfigError("network.sensors must be between 1 and network.nodes");
    }
    if (network.average_degree <= 0.0) {
      throw ConfigError("network.average_degree must be positive");
    }
  }
}

MotionModel motion_model(const ScenarioConfig& config) {
  return MotionModel::nearly_constant_velocity(config.sample_time,
                                               config.process_noise_intensity);
}

SensorModel sensor_model(const ScenarioConfig& config) {
  return SensorModel::position_observer(config.measurement_variance);
}

GaussianBelief prior_belief(const ScenarioConfig& config) {
  const Eigen::MatrixXd cov =
      config.prior_covariance_scale * Eigen::MatrixXd::Identity(4, 4);
  return GaussianBelief::from_moments(config.prior_mean, cov);
}

ScenarioConfig scenario_from_json(const nlohmann::json& doc) {
  require_keys(doc,
               {"steps", "sample_time", "process_noise_intensity", "measurement_variance",
                "prior_mean", "prior_covariance_scale", "network", "rounds", "algorithms",
                "mc_runs", "seed", "window_length", "gate_first_round",
                "exact_product_when_disjoint"},
               "scenario config");

  ScenarioConfig config;
  config.steps = int_field(doc, "steps", config.steps);
  config.sample_time = number_field(doc, "sample_time", config.sample_time);
  config.process_noise_intensity =
      number_field(doc, "process_noise_intensity", config.process_noise_intensity);
  config.measurement_variance =
      number_field(doc, "measurement_variance", config.measurement_variance);

  if (doc.contains("prior_mean")) {
    const auto& entries = doc["prior_mean"];
    if (!entries.is_array() || entries.size() != 4) {
      throw ConfigError("prior_mean must be an array of four numbers");
    }
    Eigen::VectorXd mean(4);
    for (Eigen::Index i = 0; i < 4; ++i) {
      const auto& entry = entries[static_cast<std::size_t>(i)];
      if (!entry.is_number()) {
        throw ConfigError("prior_mean entries must be numbers");
      }
      mean(i) = entry.get<double>();
    }
    config.prior_mean = mean;
  }
  config.prior_covariance_scale =
      number_field(doc, "prior_covariance_scale", config.prior_covariance_scale);

  if (doc.contains("network")) {
    const auto& net = doc["network"];
    require_keys(net, {"topology_file", "nodes", "sensors", "average_degree"}, "network");
    if (net.contains("topology_file")) {
      if (!net["topology_file"].is_string()) {
        throw ConfigError("network.topology_file must be a string");
      }
      config.network.topology_file = net["topology_file"].get<std::string>();
    }
    config.network.nodes = int_field(net, "nodes", config.network.nodes);
    config.network.sensors = int_field(net, "sensors", config.network.sensors);
    config.network.average_degree =
        number_field(net, "average_degree", config.network.average_degree);
  }

  config.rounds = int_field(doc, "rounds", config.rounds);
  if (doc.contains("algorithms")) {
    if (!doc["algorithms"].is_array()) {
      throw ConfigError("algorithms must be an array of names");
    }
    config.algorithms.clear();
    for (const auto& entry : doc["algorithms"]) {
      if (!entry.is_string()) {
        throw ConfigError("algorithm names must be strings");
      }
      config.algorithms.push_back(entry.get<std::string>());
    }
  }
  config.mc_runs = int_field(doc, "mc_runs", config.mc_runs);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      throw ConfigError("seed must be a nonnegative integer");
    }
    config.master_seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("window_length") && !doc["window_length"].is_null()) {
    if (!doc["window_length"].is_number_integer()) {
      throw ConfigError("window_length must be an integer or null");
    }
    config.window_length = doc["window_length"].get<int>();
  }
  config.gate_first_round = bool_field(doc, "gate_first_round", config.gate_first_round);
  config.exact_product_when_disjoint =
      bool_field(doc, "exact_product_when_disjoint", config.exact_product_when_disjoint);

  config.check();
  return config;
}

nlohmann::json scenario_to_json(const ScenarioConfig& config) {
  nlohmann::json doc;
  doc["steps"] = config.steps;
  doc["sample_time"] = config.sample_time;
  doc["process_noise_intensity"] = config.process_noise_intensity;
  doc["measurement_variance"] = config.measurement_variance;
  doc["prior_mean"] = {config.prior_mean(0), config.prior_mean(1), config.prior_mean(2),
                       config.prior_mean(3)};
  doc["prior_covariance_scale"] = config.prior_covariance_scale;
  nlohmann::json net;
  if (config.network.topology_file.has_value()) {
    net["topology_file"] = *config.network.topology_file;
  }
  net["nodes"] = config.network.nodes;
  net["sensors"] = config.network.sensors;
  net["average_degree"] = config.network.average_degree;
  doc["network"] = std::move(net);
  doc["rounds"] = config.rounds;
  doc["algorithms"] = config.algorithms;
  doc["mc_runs"] = config.mc_runs;
  doc["seed"] = config.master_seed;
  if (config.window_length.has_value()) {
    doc["window_length"] = *config.window_length;
  } else {
    doc["window_length"] = nullptr;
  }
  doc["gate_first_round"] = config.gate_first_round;
  doc["exact_product_when_disjoint"] = config.exact_product_when_disjoint;
  return doc;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream input(path);
  if (!input) {
    throw ConfigError("cannot open config file: " + path);
  }
  nlohmann::json doc;
  try {
    input >> doc;
  } catch (const nlohmann::json::parse_error& err) {
    throw ConfigError("config file " + path + " is not valid JSON: " + err.what());
  }
  return scenario_from_json(doc);
}

namespace {

std::uint64_t splitmix64_finalize(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run, SeedPurpose purpose) {
  std::uint64_t z = splitmix64_finalize(master_seed + 0x9E3779B97F4A7C15ULL * (run + 1));
  z = splitmix64_finalize(z + static_cast<std::uint64_t>(purpose));
  return z;
}

NetworkGraph scenario_topology(const ScenarioConfig& config, int run) {
  if (config.network.topology_file.has_value()) {
    return load_topology(*config.network.topology_file);
  }
  const std::uint64_t seed =
      derive_seed(config.master_seed, static_cast<std::uint64_t>(run), SeedPurpose::kTopology);
  return generate_topology(seed, config.network.nodes, config.network.sensors,
                           config.network.average_degree);
}

}  // namespace primex
