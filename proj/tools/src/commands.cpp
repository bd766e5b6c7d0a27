#include "fbmlab/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fbmarea/density.hpp>
#include <fbmarea/errors.hpp>
#include <fbmarea/kernel.hpp>
#include <fbmarea/levy_area.hpp>
#include <fbmarea/malliavin.hpp>
#include <fbmarea/pathgen.hpp>
#include <fbmarea/variation.hpp>

#include "fbmlab/output.hpp"

namespace fbmlab {

using namespace fbmarea;
using nlohmann::json;

namespace {

HurstParams params_of(const ExperimentConfig& c) {
  if (c.H == 0.5) return HurstParams::diagnostic(c.H, c.T);
  return HurstParams(c.H, c.T);
}

void emit(const ExperimentConfig& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_atomic(c.out, text);
  }
}

void emit_json(const ExperimentConfig& c, std::ostream& out, json result) {
  emit(c, out, dump_json(wrap_result(c, std::move(result))));
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericalFailure(std::string("non-finite ") + what, {{"quantity", what}, {"value", format_double(x)}});
}

int cmd_kernel_verify(const ExperimentConfig& c, std::ostream& out) {
  const auto r = kernel_check(params_of(c), c.negativity_samples, c.samples, c.grid_n, c.seed);
  emit_json(c, out, to_json(r));
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const auto batch = sample_fbm({params_of(c), c.level, c.count, c.seed, parse_sampler_method(c.method)}, c.threads);
  if (batch.fallback) err << "fbmlab: " << batch.warning << "\n";
  CsvTable csv(c, "sample,component,k,t,value");
  for (std::size_t i = 0; i < batch.paths.size(); ++i) {
    const auto& p = batch.paths[i];
    for (std::size_t comp = 0; comp < p.dim(); ++comp) {
      const auto v = p.component(comp);
      for (std::size_t k = 0; k < p.size(); ++k) {
        require_finite(v[k], "path value");
        csv.cell(std::uint64_t{i}).cell(std::uint64_t{comp + 1}).cell(std::uint64_t{k}).cell(p.times()[k]).cell(v[k]);
        csv.end_row();
      }
    }
  }
  emit(c, out, csv.str());
  return kExitOk;
}

// Reads the path (sample, component) from a simulate-style CSV.
std::pair<std::vector<double>, std::vector<double>> read_path(const ExperimentConfig& c) {
  std::ifstream in(c.input);
  if (!in) throw ConfigError("field 'input': cannot open '" + c.input + "'");
  std::string line;
  bool header = false;
  std::vector<double> t, v;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "sample,component,k,t,value") {
        throw ConfigError("field 'input': expected header sample,component,k,t,value");
      }
      header = true;
      continue;
    }
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    std::uint64_t sample = 0, comp = 0, k = 0;
    double tt = 0.0, value = 0.0;
    char c1, c2, c3, c4;
    if (!(row >> sample >> c1 >> comp >> c2 >> k >> c3 >> tt >> c4 >> value) || c1 != ',' || c2 != ',' ||
        c3 != ',' || c4 != ',') {
      throw ConfigError("field 'input': malformed row at line " + std::to_string(lineno));
    }
    if (sample == c.sample && comp == c.component) {
      t.push_back(tt);
      v.push_back(value);
    }
  }
  if (v.empty()) {
    throw ConfigError("field 'sample': no rows for sample " + std::to_string(c.sample) + " component " +
                      std::to_string(c.component));
  }
  return {t, v};
}

int cmd_variation(const ExperimentConfig& c, std::ostream& out) {
  const auto [t, v] = read_path(c);
  const double p = *c.p;
  json result{{"p", p}, {"mode", c.mode}, {"points", v.size()}};
  if (c.mode == "bruteforce") {
    if (v.size() > kBruteforceMaxPoints) {
      throw ConfigError("field 'mode': bruteforce is limited to " + std::to_string(kBruteforceMaxPoints) +
                        " points, the path has " + std::to_string(v.size()));
    }
    result["value"] = pvar_bruteforce(v, p);
  } else {
    const auto r = pvar_exact(v, p);
    result["value"] = r.value;
    std::vector<double> times;
    for (auto i : r.partition.indices) times.push_back(t[i]);
    result["partition"] = {{"indices", r.partition.indices}, {"times", times}};
  }
  require_finite(result["value"].get<double>(), "p-variation");
  emit_json(c, out, result);
  return kExitOk;
}

int cmd_area(const ExperimentConfig& c, std::ostream& out) {
  const auto rep = area_convergence(
      {params_of(c), c.level_min, c.level_max, c.count, c.seed, parse_sampler_method(c.method)}, c.threads);
  CsvTable csv(c, "sample,m,area");
  for (std::size_t i = 0; i < rep.series.size(); ++i) {
    const auto& s = rep.series[i];
    for (std::size_t j = 0; j < s.levels.size(); ++j) {
      require_finite(s.values[j], "area");
      csv.cell(std::uint64_t{i}).cell(std::uint64_t{s.levels[j]}).cell(s.values[j]);
      csv.end_row();
    }
  }
  emit(c, out, csv.str());
  return kExitOk;
}

int cmd_malliavin(const ExperimentConfig& c, std::ostream& out) {
  const auto rows = malliavin_samples({params_of(c), c.level, c.count, c.seed, parse_sampler_method(c.method)}, c.threads);
  CsvTable csv(c, "sample,phi,det_gamma,qnorm2,q1T,q2T");
  for (const auto& r : rows) {
    require_finite(r.phi, "phi");
    require_finite(r.det_gamma, "det_gamma");
    csv.cell(std::uint64_t{r.sample}).cell(r.phi).cell(r.det_gamma).cell(r.q_norm2).cell(r.q_omega_T[0]).cell(r.q_omega_T[1]);
    csv.end_row();
  }
  emit(c, out, csv.str());
  return kExitOk;
}

int cmd_spectral(const ExperimentConfig& c, std::ostream& out) {
  const auto r = spectral_diagnostic(params_of(c), c.grid_n);
  for (double e : r.eigenvalues) require_finite(e, "eigenvalue");
  emit_json(c, out, to_json(r, true));
  return kExitOk;
}

int cmd_tail(const ExperimentConfig& c, std::ostream& out) {
  const auto r = phi_tail_diagnostic({params_of(c), c.level, c.count, c.seed, parse_sampler_method(c.method)},
                                     c.s_grid, c.threads);
  require_finite(r.log_slope, "tail slope");
  emit_json(c, out, to_json(r));
  return kExitOk;
}

int cmd_density(const ExperimentConfig& c, std::ostream& out) {
  const auto y = sample_Y({params_of(c), c.level, c.count, c.seed, parse_sampler_method(c.method)}, c.threads);
  if (!c.marginal.empty()) {
    const std::size_t d = c.marginal == "b1" ? 0 : c.marginal == "b2" ? 1 : 2;
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i][d];
    const auto m = kde_marginal(x, c.grid_n);
    CsvTable csv(c, "i,x,value");
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      csv.cell(std::uint64_t{i}).cell(m.axis.center(i)).cell(m.values[i]);
      csv.end_row();
    }
    emit(c, out, csv.str());
    return kExitOk;
  }
  const auto est = kde(y, default_box(y, c.grid_n), std::nullopt, c.threads);
  CsvTable csv(c, "ix,iy,iz,x,y,z,value");
  const auto& ax = est.axes;
  for (std::size_t i = 0; i < ax[0].n; ++i) {
    for (std::size_t j = 0; j < ax[1].n; ++j) {
      for (std::size_t k = 0; k < ax[2].n; ++k) {
        const double v = est.at(i, j, k);
        require_finite(v, "density");
        csv.cell(std::uint64_t{i}).cell(std::uint64_t{j}).cell(std::uint64_t{k});
        csv.cell(ax[0].center(i)).cell(ax[1].center(j)).cell(ax[2].center(k)).cell(v);
        csv.end_row();
      }
    }
  }
  emit(c, out, csv.str());
  return kExitOk;
}

int cmd_verify_all(const ExperimentConfig& c, std::ostream& out) {
  const auto z = suite_sizes(c.quick);
  const auto params = HurstParams(c.H, c.T);
  const auto th = c.threads;
  json checks = json::object();
  bool ok = true;
  const auto add = [&](const char* name, json j) {
    ok = ok && j.at("passed").get<bool>();
    out << (j.at("passed").get<bool>() ? "PASS " : "FAIL ") << name << "\n" << std::flush;
    checks[name] = std::move(j);
  };

  add("kernel", to_json(kernel_check(params, z.quadruples, z.rects, z.kernel_grid, c.seed)));
  add("covariance", to_json(covariance_check(params, z.cov_level, z.cov_count, c.seed, th)));
  add("levy_area", to_json(area_check(c.T, z.area_level, z.area_count, c.seed, th)));
  add("variation", to_json(variation_check(params, z.pvar_random, z.pvar_projection, z.pvar_level, c.seed, th)));
  add("cameron_martin", to_json(cameron_martin_check(params, z.cm_level, z.cm_integrands, c.seed)));
  add("malliavin", to_json(malliavin_check(params, z.mall_level, z.mall_count, z.mall_pairs, c.seed, th)));
  add("phi_tail", to_json(tail_check(params, z.tail_level, z.tail_count, {10.0, 100.0, 1000.0, 10000.0}, c.seed, th)));
  add("spectral", to_json(spectral_check(params, z.spectral_grids)));
  add("density", to_json(density_check(params, z.density_level, z.density_count, z.density_ks_count,
                                       z.density_grid, c.seed, th)));

  const std::string dir = c.out;
  write_atomic(dir + "/summary.json", dump_json(wrap_result(c, {{"passed", ok}, {"checks", checks}})));

  // plot-ready marginals of (B1_T, B2_T, A_T)
  const auto y = sample_Y({params, z.density_level, z.density_ks_count, derive_seed(c.seed, 14),
                           SamplerMethod::circulant}, th);
  CsvTable csv(c, "coordinate,i,x,value");
  const char* names[] = {"b1", "b2", "a"};
  for (std::size_t d = 0; d < 3; ++d) {
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i][d];
    const auto m = kde_marginal(x, 101);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      csv.cell(names[d]).cell(std::uint64_t{i}).cell(m.axis.center(i)).cell(m.values[i]);
      csv.end_row();
    }
  }
  write_atomic(dir + "/marginals.csv", csv.str());
  out << (ok ? "all checks passed" : "some checks FAILED") << "\n";
  return ok ? kExitOk : kExitFailed;
}

json failure_json(const ExperimentConfig& c, const char* kind, const std::string& message) {
  return {{"error", "numerical_failure"}, {"kind", kind}, {"message", message}, {"command", c.command},
          {"config", config_echo(c)}};
}

const char* kind_of(const fbmarea::Error& e) {
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const SizeError*>(&e)) return "size";
  if (dynamic_cast<const GridMismatchError*>(&e)) return "grid_mismatch";
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension";
  if (dynamic_cast<const KernelMismatchError*>(&e)) return "kernel_mismatch";
  if (dynamic_cast<const DegenerateSampleError*>(&e)) return "degenerate_sample";
  return "library";
}

}  // namespace

SuiteSizes suite_sizes(bool quick) {
  if (quick) {
    return {10000, 10000, 8, 4, 20000, 10, 10000, 200, 100, 8, 8, 3, 6, 200, 50, 6, 2000,
            {8, 16, 32}, 6, 20000, 10000, 11};
  }
  return {100000, 10000, 8, 6, 100000, 12, 10000, 1000, 1000, 8, 10, 5, 8, 1000, 100, 8, 10000,
          {8, 16, 32}, 8, 100000, 10000, 21};
}

int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    const auto& cmd = c.command;
    if (cmd == "kernel verify") return cmd_kernel_verify(c, out);
    if (cmd == "simulate") return cmd_simulate(c, out, err);
    if (cmd == "variation") return cmd_variation(c, out);
    if (cmd == "area") return cmd_area(c, out);
    if (cmd == "malliavin") return cmd_malliavin(c, out);
    if (cmd == "malliavin spectral") return cmd_spectral(c, out);
    if (cmd == "malliavin tail") return cmd_tail(c, out);
    if (cmd == "density") return cmd_density(c, out);
    if (cmd == "verify-all") return cmd_verify_all(c, out);
    throw ConfigError("unknown command '" + cmd + "'");
  } catch (const ConfigError& e) {
    err << "fbmlab: error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    auto j = failure_json(c, "non_finite", e.what());
    j["details"] = e.details();
    err << j.dump() << "\n";
    return kExitNumeric;
  } catch (const fbmarea::Error& e) {
    err << failure_json(c, kind_of(e), e.what()).dump() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "fbmlab: " << e.what() << "\n";
    return kExitFailed;
  }
}

}  // namespace fbmlab
