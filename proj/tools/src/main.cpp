#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include <fbmarea/version.hpp>

#include "fbmlab/commands.hpp"
#include "fbmlab/config.hpp"

namespace {

using fbmlab::ExperimentConfig;

// Flags are parsed into `parsed`; only those given on the command line are
// copied onto the config loaded from --config (flags win over the file).
struct Bindings {
  ExperimentConfig parsed;
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> apply;

  template <class V>
  CLI::Option* add(CLI::App* app, const std::string& flag, V ExperimentConfig::*member, const std::string& help) {
    auto* opt = app->add_option(flag, parsed.*member, help);
    apply.emplace_back(opt, [this, member](ExperimentConfig& c) { c.*member = parsed.*member; });
    return opt;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Brownian motion, Levy area and Malliavin diagnostics"};
  app.set_version_flag("--version", std::string(fbmarea::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  bool print_config = false;
  auto* seed_opt = app.add_option("--seed", seed, "root seed of all random streams");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--config", config_path, "JSON experiment file; flags override its values");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");

  Bindings b;
  double p_value = 0.0;
  CLI::Option* p_opt = nullptr;
  std::string out_path;

  const auto common = [&](CLI::App* s, bool with_T = true) {
    b.add(s, "--H", &ExperimentConfig::H, "Hurst parameter");
    if (with_T) b.add(s, "--T", &ExperimentConfig::T, "horizon");
  };
  const auto sampling = [&](CLI::App* s) {
    b.add(s, "--level", &ExperimentConfig::level, "dyadic level m (2^m steps)");
    b.add(s, "--count", &ExperimentConfig::count, "number of sample paths");
    b.add(s, "--method", &ExperimentConfig::method, "cholesky | circulant");
  };

  auto* kernel = app.add_subcommand("kernel", "covariance kernel checks");
  kernel->require_subcommand(1);
  auto* kverify = kernel->add_subcommand("verify", "negativity, rectangle bound and 2D variation of R");
  common(kverify);
  b.add(kverify, "--grid-n", &ExperimentConfig::grid_n, "points of the 2D-variation grid");
  b.add(kverify, "--samples", &ExperimentConfig::samples, "random rectangles");
  b.add(kverify, "--negativity-samples", &ExperimentConfig::negativity_samples, "random disjoint quadruples");

  auto* simulate = app.add_subcommand("simulate", "sample 2D fBm paths on a dyadic grid");
  common(simulate);
  sampling(simulate);

  auto* variation = app.add_subcommand("variation", "exact p-variation of a path from a CSV file");
  b.add(variation, "--input", &ExperimentConfig::input, "CSV written by `simulate`");
  p_opt = variation->add_option("--p", p_value, "variation exponent");
  b.add(variation, "--mode", &ExperimentConfig::mode, "dp | bruteforce");
  b.add(variation, "--sample", &ExperimentConfig::sample, "sample index in the file");
  b.add(variation, "--component", &ExperimentConfig::component, "1 or 2");

  auto* area = app.add_subcommand("area", "Levy area along dyadic refinements");
  common(area);
  b.add(area, "--level-min", &ExperimentConfig::level_min, "coarsest level");
  b.add(area, "--level-max", &ExperimentConfig::level_max, "finest level");
  b.add(area, "--count", &ExperimentConfig::count, "number of sample paths");
  b.add(area, "--method", &ExperimentConfig::method, "cholesky | circulant");

  auto* malliavin = app.add_subcommand("malliavin", "Malliavin matrix of (B_T, A_T) per sample");
  malliavin->require_subcommand(0, 1);
  common(malliavin);
  sampling(malliavin);
  auto* spectral = malliavin->add_subcommand("spectral", "spectrum of Phi on a finite kernel basis");
  common(spectral);
  b.add(spectral, "--grid-n", &ExperimentConfig::grid_n, "basis atoms per component");
  auto* tail = malliavin->add_subcommand("tail", "Laplace transform and inverse moments of Phi");
  common(tail);
  sampling(tail);
  b.add(tail, "--s-grid", &ExperimentConfig::s_grid, "comma-separated s values")->delimiter(',');

  auto* density = app.add_subcommand("density", "kernel density estimate of (B1_T, B2_T, A_T)");
  common(density);
  sampling(density);
  b.add(density, "--grid-n", &ExperimentConfig::grid_n, "cells per axis");
  b.add(density, "--marginal", &ExperimentConfig::marginal, "b1 | b2 | a: 1D marginal only");

  auto* verify_all = app.add_subcommand("verify-all", "run the full verification suite");
  common(verify_all);
  b.add(verify_all, "--quick", &ExperimentConfig::quick, "smaller problem sizes");
  verify_all->get_option("--quick")->expected(0, 1)->default_str("true");

  for (auto* s : {kverify, simulate, variation, area, malliavin, spectral, tail, density, verify_all}) {
    auto* out_opt = s->add_option("--out", out_path, s == verify_all ? "output directory" : "output file (default stdout)");
    b.apply.emplace_back(out_opt, [&out_path](ExperimentConfig& c) { c.out = out_path; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fbmlab::kExitConfig;
  }

  std::string command;
  if (kverify->parsed()) command = "kernel verify";
  else if (spectral->parsed()) command = "malliavin spectral";
  else if (tail->parsed()) command = "malliavin tail";
  else if (malliavin->parsed()) command = "malliavin";
  else if (simulate->parsed()) command = "simulate";
  else if (variation->parsed()) command = "variation";
  else if (area->parsed()) command = "area";
  else if (density->parsed()) command = "density";
  else if (verify_all->parsed()) command = "verify-all";

  ExperimentConfig config;
  try {
    config = fbmlab::defaults_for(command);
    if (!config_path.empty()) {
      auto loaded = fbmlab::load_config(config_path);
      if (loaded.command != command) {
        throw fbmlab::ConfigError("field 'command' in " + config_path + " is '" + loaded.command +
                                  "' but the command line asks for '" + command + "'");
      }
      config = loaded;
    }
  } catch (const fbmlab::ConfigError& e) {
    std::cerr << "fbmlab: error: " << e.what() << "\n";
    return fbmlab::kExitConfig;
  }
  for (auto& [opt, fn] : b.apply) {
    // Options of other subcommands are never set, so this only fires for ours.
    if (opt->count() > 0) fn(config);
  }
  if (p_opt->count() > 0) config.p = p_value;
  if (seed_opt->count() > 0) config.seed = seed;
  config.threads = threads;

  if (print_config) {
    std::cout << fbmlab::to_json(config).dump(2) << "\n";
    return 0;
  }
  return fbmlab::run(config, std::cout, std::cerr);
}
