#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fbmarea/pathgen.hpp"
#include "fbmarea/rng.hpp"
#include "fbmarea/variation.hpp"
#include "fbmlab/commands.hpp"
#include "fbmlab/config.hpp"
#include "fbmlab/output.hpp"

using namespace fbmlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "fbmlab_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs and returns (exit code, stderr).
std::pair<int, std::string> run_capture(const ExperimentConfig& c, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  if (out_text) *out_text = out.str();
  return {code, err.str()};
}

ExperimentConfig random_config(const std::string& cmd, fbmarea::RandomStream& s) {
  auto c = defaults_for(cmd);
  c.seed = static_cast<std::uint64_t>(s.uniform() * 1e15);
  c.out = "out_" + std::to_string(c.seed);
  c.H = 0.34 + 0.15 * s.uniform();
  c.T = 0.1 + 10 * s.uniform();
  c.level = 1 + static_cast<unsigned>(s.uniform() * 12);
  c.count = 1 + static_cast<std::uint64_t>(s.uniform() * 1e6);
  c.method = s.uniform() < 0.5 ? "cholesky" : "circulant";
  c.grid_n = 2 + static_cast<std::uint64_t>(s.uniform() * 7);
  c.samples = static_cast<std::uint64_t>(s.uniform() * 1e5);
  c.level_min = 1 + static_cast<unsigned>(s.uniform() * 3);
  c.level_max = c.level_min + 1 + static_cast<unsigned>(s.uniform() * 5);
  c.s_grid = {s.uniform(), 1 + s.uniform(), 1e3 * (2 + s.uniform())};
  c.input = "in.csv";
  c.p = 1.0 + 4 * s.uniform();
  c.mode = s.uniform() < 0.5 ? "dp" : "bruteforce";
  c.sample = 3;
  c.component = 2;
  c.marginal = "a";
  c.quick = s.uniform() < 0.5;
  // fields the command does not use cannot survive the round trip
  const auto& f = fields_for(cmd);
  const auto keep = [&](const char* key) { return std::find(f.begin(), f.end(), key) != f.end(); };
  const auto d = defaults_for(cmd);
  if (!keep("H")) c.H = d.H;
  if (!keep("T")) c.T = d.T;
  if (!keep("level")) c.level = d.level;
  if (!keep("count")) c.count = d.count;
  if (!keep("method")) c.method = d.method;
  if (!keep("grid_n")) c.grid_n = d.grid_n;
  if (!keep("samples")) c.samples = d.samples;
  if (!keep("negativity_samples")) c.negativity_samples = d.negativity_samples;
  if (!keep("level_min")) c.level_min = d.level_min;
  if (!keep("level_max")) c.level_max = d.level_max;
  if (!keep("s_grid")) c.s_grid = d.s_grid;
  if (!keep("input")) c.input = d.input;
  if (!keep("p")) c.p = d.p;
  if (!keep("mode")) c.mode = d.mode;
  if (!keep("sample")) c.sample = d.sample;
  if (!keep("component")) c.component = d.component;
  if (!keep("marginal")) c.marginal = d.marginal;
  if (!keep("quick")) c.quick = d.quick;
  return c;
}

ExperimentConfig small(const std::string& cmd) {
  auto c = defaults_for(cmd);
  c.seed = 17;
  c.level = 5;
  c.count = 200;
  c.grid_n = cmd == "density" ? 5 : c.grid_n;
  return c;
}

}  // namespace

TEST_CASE("configs round-trip through their JSON form") {
  fbmarea::RandomStream s({90, 0, 0});
  for (const auto& cmd : command_names()) {
    for (int i = 0; i < 25; ++i) {
      const auto c = random_config(cmd, s);
      const auto text = to_json(c).dump();
      const auto back = from_json(nlohmann::json::parse(text));
      CHECK(back == c);
      CHECK(to_json(back).dump() == text);
    }
  }
  const auto path = scratch("cfg.json");
  const auto c = random_config("malliavin tail", s);
  save_config(c, path.string());
  CHECK(load_config(path.string()) == c);
  CHECK(!fs::exists(path.string() + ".tmp"));
}

TEST_CASE("unknown or mistyped fields are rejected by name") {
  const auto msg = [](const std::string& text) {
    try {
      from_json(nlohmann::json::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("accepted");
  };
  CHECK(msg(R"({"command":"simulate","params":{"levle":3}})").find("params.levle") != std::string::npos);
  CHECK(msg(R"({"command":"simulate","sede":3})").find("'sede'") != std::string::npos);
  CHECK(msg(R"({"command":"simulate","params":{"H":"0.4"}})").find("params.H") != std::string::npos);
  CHECK(msg(R"({"command":"simulate","params":{"s_grid":[1,2]}})").find("params.s_grid") != std::string::npos);
  CHECK(msg(R"({"command":"simulate","schema_version":7})").find("schema_version") != std::string::npos);
  CHECK(msg(R"({"command":"frobnicate"})").find("frobnicate") != std::string::npos);
  CHECK(msg(R"({"params":{}})").find("command") != std::string::npos);
  CHECK(msg(R"([1,2])").find("command") != std::string::npos);
}

TEST_CASE("invalid values exit with code 2 naming the field") {
  auto c = small("simulate");
  c.H = 0.7;
  auto [code, err] = run_capture(c);
  CHECK(code == kExitConfig);
  CHECK(err.find("'H'") != std::string::npos);

  c = small("density");
  c.count = 10;
  std::tie(code, err) = run_capture(c);
  CHECK(code == kExitConfig);
  CHECK(err.find("'count'") != std::string::npos);

  c = defaults_for("variation");
  c.input = "x.csv";
  std::tie(code, err) = run_capture(c);
  CHECK(code == kExitConfig);
  CHECK(err.find("'p'") != std::string::npos);

  c = small("malliavin tail");
  c.s_grid = {10, 5};
  std::tie(code, err) = run_capture(c);
  CHECK(err.find("'s_grid'") != std::string::npos);

  c = defaults_for("verify-all");
  std::tie(code, err) = run_capture(c);
  CHECK(code == kExitConfig);
  CHECK(err.find("'out'") != std::string::npos);
}

TEST_CASE("numerical failures exit with code 3 and a JSON diagnostic") {
  auto c = small("density");
  c.T = 1e-300;  // the area underflows to a zero-variance sample
  const auto [code, err] = run_capture(c);
  CHECK(code == kExitNumeric);
  const auto j = nlohmann::json::parse(err);
  CHECK(j.at("error") == "numerical_failure");
  CHECK(j.at("config").at("params").at("T") == 1e-300);
}

TEST_CASE("doubles are written with round-trip precision") {
  fbmarea::RandomStream s({91, 0, 0});
  for (int i = 0; i < 1000; ++i) {
    const double x = s.normal() * std::pow(10.0, 40 * s.uniform() - 20);
    const auto text = format_double(x);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == x);
    CHECK(text.find(',') == std::string::npos);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("artifacts are byte-identical across runs and thread counts") {
  for (const char* cmd : {"simulate", "area", "malliavin", "density", "malliavin tail", "kernel verify"}) {
    auto c = small(cmd);
    if (c.command == "area") {
      c.level_min = 2;
      c.level_max = 6;
      c.count = 20;
    }
    if (c.command == "kernel verify") {
      c.samples = 500;
      c.negativity_samples = 500;
    }
    c.out = scratch(std::string("a_") + std::to_string(std::hash<std::string>{}(cmd))).string();
    c.threads = 1;
    REQUIRE(run_capture(c).first == 0);
    const auto first = slurp(c.out);
    REQUIRE(run_capture(c).first == 0);
    CHECK(slurp(c.out) == first);
    c.threads = 3;
    REQUIRE(run_capture(c).first == 0);
    CHECK(slurp(c.out) == first);
    CHECK(!fs::exists(c.out + ".tmp"));
  }
}

TEST_CASE("artifacts carry the configuration that made them") {
  auto c = small("malliavin");
  c.out = scratch("meta.csv").string();
  REQUIRE(run_capture(c).first == 0);
  std::ifstream in(c.out);
  std::string version, config;
  std::getline(in, version);
  std::getline(in, config);
  CHECK(version.rfind("# fbmarea ", 0) == 0);
  REQUIRE(config.rfind("# config ", 0) == 0);
  auto echoed = from_json(nlohmann::json::parse(config.substr(9)));
  CHECK(echoed.out.empty());
  echoed.out = c.out;
  CHECK(echoed == c);
}

TEST_CASE("variation reads the simulate format") {
  auto sim = small("simulate");
  sim.level = 4;
  sim.count = 2;
  sim.out = scratch("paths.csv").string();
  REQUIRE(run_capture(sim).first == 0);

  auto v = defaults_for("variation");
  v.input = sim.out;
  v.p = 2.5;
  v.sample = 1;
  v.component = 2;
  std::string text;
  REQUIRE(run_capture(v, &text).first == 0);
  const auto j = nlohmann::json::parse(text);

  const fbmarea::FbmSampler sampler(fbmarea::HurstParams(0.4, 1.0), 4, fbmarea::SamplerMethod::circulant);
  const auto path = sampler.sample(17, 1);
  CHECK(j.at("result").at("value").get<double>() == fbmarea::pvar_exact(path.component(1), 2.5).value);

  v.mode = "bruteforce";
  REQUIRE(run_capture(v, &text).first == 0);
  CHECK(nlohmann::json::parse(text).at("result").at("value").get<double>() ==
        doctest::Approx(j.at("result").at("value").get<double>()).epsilon(1e-12));

  sim.level = 5;  // 33 points: too many to enumerate
  REQUIRE(run_capture(sim).first == 0);
  const auto [code, err] = run_capture(v);
  CHECK(code == kExitConfig);
  CHECK(err.find("'mode'") != std::string::npos);
}
