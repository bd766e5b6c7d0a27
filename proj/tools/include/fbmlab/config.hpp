#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fbmlab {

/// Thrown for anything wrong with a configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

/// Commands, spelled as on the command line.
inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "kernel verify", "simulate",         "variation",      "area",   "malliavin",
      "malliavin spectral", "malliavin tail", "density", "verify-all"};
  return names;
}

/// One experiment. Fields not used by `command` keep their defaults and are
/// neither written nor accepted in the on-disk form.
struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string command;
  std::uint64_t seed = 0;
  std::string out;

  double H = 0.4;
  double T = 1.0;
  unsigned level = 8;
  std::uint64_t count = 1000;
  std::string method = "circulant";
  std::uint64_t grid_n = 8;
  std::uint64_t samples = 10000;
  std::uint64_t negativity_samples = 100000;
  unsigned level_min = 4;
  unsigned level_max = 12;
  std::vector<double> s_grid{10.0, 100.0, 1000.0, 10000.0};
  std::string input;
  std::optional<double> p;
  std::string mode = "dp";
  std::uint64_t sample = 0;
  unsigned component = 1;
  std::string marginal;
  bool quick = false;

  /// Never serialized: results must not depend on it.
  unsigned threads = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parameter names accepted by a command (the keys of "params").
const std::vector<std::string>& fields_for(const std::string& command);

/// Defaults that differ between commands (level, count, grid size, ...).
ExperimentConfig defaults_for(const std::string& command);

nlohmann::json to_json(const ExperimentConfig& config);
/// Rejects unknown fields and wrong types, naming the offending field.
ExperimentConfig from_json(const nlohmann::json& j);

/// Overwrites `config` with the fields present in `j` (same rules as from_json).
void merge_json(ExperimentConfig& config, const nlohmann::json& j);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

/// Range and consistency checks; throws ConfigError.
void validate(const ExperimentConfig& config);

}  // namespace fbmlab
