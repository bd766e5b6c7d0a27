#include "fbmlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fbmlab/output.hpp"

namespace fbmlab {
namespace {

using nlohmann::json;

const std::map<std::string, std::vector<std::string>>& field_table() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"kernel verify", {"H", "T", "grid_n", "samples", "negativity_samples"}},
      {"simulate", {"H", "T", "level", "count", "method"}},
      {"variation", {"input", "p", "mode", "sample", "component"}},
      {"area", {"H", "T", "level_min", "level_max", "count", "method"}},
      {"malliavin", {"H", "T", "level", "count", "method"}},
      {"malliavin spectral", {"H", "T", "grid_n"}},
      {"malliavin tail", {"H", "T", "level", "count", "method", "s_grid"}},
      {"density", {"H", "T", "level", "count", "method", "grid_n", "marginal"}},
      {"verify-all", {"H", "T", "quick"}},
  };
  return table;
}

template <class V>
void read_field(const json& params, const std::string& key, V& target) {
  try {
    target = params.at(key).get<V>();
  } catch (const json::exception&) {
    throw ConfigError("field 'params." + key + "' has the wrong type");
  }
}

void read_param(ExperimentConfig& c, const json& params, const std::string& key) {
  if (key == "H") read_field(params, key, c.H);
  else if (key == "T") read_field(params, key, c.T);
  else if (key == "level") read_field(params, key, c.level);
  else if (key == "count") read_field(params, key, c.count);
  else if (key == "method") read_field(params, key, c.method);
  else if (key == "grid_n") read_field(params, key, c.grid_n);
  else if (key == "samples") read_field(params, key, c.samples);
  else if (key == "negativity_samples") read_field(params, key, c.negativity_samples);
  else if (key == "level_min") read_field(params, key, c.level_min);
  else if (key == "level_max") read_field(params, key, c.level_max);
  else if (key == "s_grid") read_field(params, key, c.s_grid);
  else if (key == "input") read_field(params, key, c.input);
  else if (key == "p") {
    if (params.at(key).is_null()) {
      c.p.reset();
    } else {
      double v = 0.0;
      read_field(params, key, v);
      c.p = v;
    }
  } else if (key == "mode") read_field(params, key, c.mode);
  else if (key == "sample") read_field(params, key, c.sample);
  else if (key == "component") read_field(params, key, c.component);
  else if (key == "marginal") read_field(params, key, c.marginal);
  else if (key == "quick") read_field(params, key, c.quick);
}

json param_value(const ExperimentConfig& c, const std::string& key) {
  if (key == "H") return c.H;
  if (key == "T") return c.T;
  if (key == "level") return c.level;
  if (key == "count") return c.count;
  if (key == "method") return c.method;
  if (key == "grid_n") return c.grid_n;
  if (key == "samples") return c.samples;
  if (key == "negativity_samples") return c.negativity_samples;
  if (key == "level_min") return c.level_min;
  if (key == "level_max") return c.level_max;
  if (key == "s_grid") return c.s_grid;
  if (key == "input") return c.input;
  if (key == "p") return c.p ? json(*c.p) : json(nullptr);
  if (key == "mode") return c.mode;
  if (key == "sample") return c.sample;
  if (key == "component") return c.component;
  if (key == "marginal") return c.marginal;
  if (key == "quick") return c.quick;
  throw ConfigError("internal: no field " + key);
}

}  // namespace

const std::vector<std::string>& fields_for(const std::string& command) {
  const auto& table = field_table();
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

ExperimentConfig defaults_for(const std::string& command) {
  fields_for(command);
  ExperimentConfig c;
  c.command = command;
  if (command == "kernel verify") c.grid_n = 8;
  if (command == "simulate") {
    c.level = 8;
    c.count = 100;
  }
  if (command == "area") c.count = 500;
  if (command == "malliavin tail") c.count = 10000;
  if (command == "malliavin spectral") c.grid_n = 16;
  if (command == "density") {
    c.count = 100000;
    c.grid_n = 21;
  }
  return c;
}

json to_json(const ExperimentConfig& c) {
  json params = json::object();
  for (const auto& key : fields_for(c.command)) params[key] = param_value(c, key);
  return json{{"schema_version", c.schema_version},
              {"command", c.command},
              {"seed", c.seed},
              {"out", c.out},
              {"params", params}};
}

void merge_json(ExperimentConfig& c, const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::vector<std::string> top{"schema_version", "command", "seed", "out", "params"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(top.begin(), top.end(), key) == top.end()) throw ConfigError("unknown field '" + key + "'");
  }
  if (j.contains("command")) {
    std::string cmd;
    try {
      cmd = j.at("command").get<std::string>();
    } catch (const json::exception&) {
      throw ConfigError("field 'command' has the wrong type");
    }
    if (!c.command.empty() && cmd != c.command) {
      throw ConfigError("field 'command' is '" + cmd + "' but '" + c.command + "' was requested");
    }
    fields_for(cmd);
    c.command = cmd;
  }
  if (c.command.empty()) throw ConfigError("field 'command' is missing");
  try {
    if (j.contains("schema_version")) c.schema_version = j.at("schema_version").get<int>();
  } catch (const json::exception&) {
    throw ConfigError("field 'schema_version' has the wrong type");
  }
  if (c.schema_version != kSchemaVersion) {
    throw ConfigError("field 'schema_version' must be " + std::to_string(kSchemaVersion));
  }
  try {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception&) {
    throw ConfigError("field 'seed' has the wrong type");
  }
  try {
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
  } catch (const json::exception&) {
    throw ConfigError("field 'out' has the wrong type");
  }
  if (j.contains("params")) {
    const auto& params = j.at("params");
    if (!params.is_object()) throw ConfigError("field 'params' must be an object");
    const auto& allowed = fields_for(c.command);
    for (const auto& [key, value] : params.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ConfigError("unknown field 'params." + key + "' for command '" + c.command + "'");
      }
      read_param(c, params, key);
    }
  }
}

ExperimentConfig from_json(const json& j) {
  if (!j.is_object() || !j.contains("command")) throw ConfigError("field 'command' is missing");
  std::string cmd;
  try {
    cmd = j.at("command").get<std::string>();
  } catch (const json::exception&) {
    throw ConfigError("field 'command' has the wrong type");
  }
  ExperimentConfig c = defaults_for(cmd);
  merge_json(c, j);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  write_atomic(path, to_json(config).dump(2) + "\n");
}

void validate(const ExperimentConfig& c) {
  fields_for(c.command);
  const auto& f = fields_for(c.command);
  const auto uses = [&](const char* key) { return std::find(f.begin(), f.end(), key) != f.end(); };
  const auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("field '" + field + "' " + why);
  };
  if (uses("H") && !(c.H > 1.0 / 3.0 && c.H < 0.5)) {
    // H = 1/2 is the Brownian diagnostic, accepted only where it is meaningful
    const bool diagnostic_ok = (c.command == "area" || c.command == "simulate") && c.H > 0.0 && c.H <= 0.5;
    if (!diagnostic_ok) fail("H", "must lie in (1/3, 1/2)");
  }
  if (uses("T") && !(c.T > 0.0 && std::isfinite(c.T))) fail("T", "must be positive and finite");
  if (uses("level") && (c.level < 1 || c.level > 20)) fail("level", "must lie in 1..20");
  if (uses("count") && c.count < 1) fail("count", "must be at least 1");
  if (uses("method") && c.method != "cholesky" && c.method != "circulant") {
    fail("method", "must be 'cholesky' or 'circulant'");
  }
  if (c.command == "kernel verify" && (c.grid_n < 2 || c.grid_n > 9)) fail("grid_n", "must lie in 2..9");
  if (c.command == "malliavin spectral" && (c.grid_n < 1 || c.grid_n > 64)) fail("grid_n", "must lie in 1..64");
  if (c.command == "density" && (c.grid_n < 3 || c.grid_n > 101)) fail("grid_n", "must lie in 3..101");
  if (c.command == "density" && c.count < 100) fail("count", "must be at least 100 for density estimation");
  if (uses("level_min") && !(c.level_min >= 1 && c.level_min < c.level_max)) {
    fail("level_min", "must satisfy 1 <= level_min < level_max");
  }
  if (uses("level_max") && c.level_max > 14) fail("level_max", "must be at most 14");
  if (uses("s_grid")) {
    if (c.s_grid.empty()) fail("s_grid", "must not be empty");
    for (std::size_t i = 0; i < c.s_grid.size(); ++i) {
      if (!(c.s_grid[i] > 0.0) || (i > 0 && !(c.s_grid[i] > c.s_grid[i - 1]))) {
        fail("s_grid", "must be positive and strictly increasing");
      }
    }
    if (c.count < 4) fail("count", "must be at least 4");
  }
  if (c.command == "variation") {
    if (c.input.empty()) fail("input", "is required");
    if (!c.p) fail("p", "is required");
    if (!(*c.p >= 1.0 && std::isfinite(*c.p))) fail("p", "must be >= 1");
    if (c.mode != "dp" && c.mode != "bruteforce") fail("mode", "must be 'dp' or 'bruteforce'");
    if (c.component < 1 || c.component > 2) fail("component", "must be 1 or 2");
  }
  if (c.command == "density" && !c.marginal.empty() && c.marginal != "b1" && c.marginal != "b2" &&
      c.marginal != "a") {
    fail("marginal", "must be one of b1, b2, a");
  }
  if (c.command == "verify-all" && c.out.empty()) fail("out", "must name an output directory");
}

}  // namespace fbmlab
