// Run configuration: a single JSON document with sections "constellation",
// "channel", "observer", "run" and "output". See README for the schema.
#pragma once

#include "orbitcox/analytics.hpp"
#include "orbitcox/simulate.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitcox::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepConfig {
  double total = 0.0;               // lambda * mu held fixed
  std::vector<double> lambdas;      // mu = total / lambda
  std::optional<double> binomial_radius_km;
};

struct RunConfig {
  nlohmann::json resolved;  // the document after overrides and defaults

  EarthFrame frame;
  ConstellationModel model;
  ChannelModel channel;
  Observer observer;
  bool randomize_longitude = true;

  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  bool exact_snapshots = false;
  std::vector<double> distance_grid;
  std::vector<double> threshold_db_grid;
  std::vector<double> s_grid;
  std::vector<double> param_grid;
  SweptParam swept = SweptParam::lambda;
  QuadratureSpec quadrature;
  std::optional<SweepConfig> sweep;

  std::string format = "csv";
  std::string out_path = "-";

  bool is_cox() const { return std::holds_alternative<CoxModel>(model); }
  /// Throws ConfigError unless the model is Cox.
  const CoxParams& cox() const;
  SimSpec sim_spec() const;
};

/// Reads a config file. Output files written by the tool are accepted too:
/// their embedded config is extracted. Throws IoError / ConfigError.
nlohmann::json load_config_file(const std::string& path);

/// Applies "a.b.c=value"; value is parsed as JSON, falling back to a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates and converts. Unknown keys are rejected by name.
RunConfig parse_config(const nlohmann::json& doc);

}  // namespace orbitcox::cli
