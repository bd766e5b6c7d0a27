#include "fbmlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fbmarea/cameron_martin.hpp>
#include <fbmarea/density.hpp>
#include <fbmarea/kernel.hpp>
#include <fbmarea/levy_area.hpp>
#include <fbmarea/parallel.hpp>
#include <fbmarea/pathgen.hpp>
#include <fbmarea/rng.hpp>
#include <fbmarea/stats.hpp>
#include <fbmarea/variation.hpp>
#include <fbmarea/young.hpp>

namespace fbmlab {

using namespace fbmarea;
using nlohmann::json;

namespace {

double rel_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

CMElement random_element(const HurstParams& params, RandomStream& s, std::size_t atoms) {
  std::vector<Atom> a;
  for (std::size_t i = 0; i < atoms; ++i) {
    const unsigned c = s.uniform() < 0.5 ? 0u : 1u;
    a.push_back({s.uniform() * params.horizon(), c, s.normal()});
  }
  return CMElement(params, std::move(a));
}

// Accumulation blocks are fixed, so sums do not depend on the thread count.
constexpr std::size_t kBlocks = 64;

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) noexcept {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// --- kernel -----------------------------------------------------------------

KernelCheck kernel_check(const HurstParams& params, std::size_t quadruples, std::size_t rects,
                         std::size_t grid_points, std::uint64_t seed) {
  const CovKernel k(params);
  const double T = params.horizon();
  KernelCheck r;

  const auto quads = random_disjoint_rects(T, quadruples, derive_seed(seed, 1));
  const auto neg = verify_negativity(k, quads);
  r.negativity_count = neg.count;
  r.negativity_violations = neg.violations;
  r.negativity_worst = neg.worst;

  const auto rs = random_rects(T, rects, derive_seed(seed, 2));
  const auto msr = verify_msr_bound(k, rs);
  r.bound_count = msr.count;
  r.bound_violations = msr.violations;
  r.bound_worst_margin = msr.worst_margin;

  std::vector<double> grid(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) grid[i] = T * double(i) / double(grid_points - 1);
  grid.back() = T;
  r.variation_grid_points = grid_points;
  r.variation_2d = variation_2d_R(k, grid, Variation2DMode::exact).value;
  r.variation_lower = std::pow(T, params.two_h());
  r.variation_upper = rvar_upper_bound(params);
  r.refinement_monotone = true;
  for (unsigned m = 0; m <= 3; ++m) {
    r.variation_refinement.push_back(variation_2d_R(k, dyadic_grid(T, m), Variation2DMode::exact).value);
    if (m > 0 && r.variation_refinement[m] < r.variation_refinement[m - 1] * (1 - 1e-12)) r.refinement_monotone = false;
  }

  for (int i = 1; i <= 5; ++i) {
    for (int j = 1; j <= 5; ++j) {
      const double s = T * i / 5.0, t = T * j / 5.0;
      r.kh_max_rel_error = std::max(r.kh_max_rel_error, rel_error(kh_covariance(k, s, t), k.eval_R(s, t)));
    }
  }

  const double rtol = 1e-12;
  r.passed = r.negativity_violations == 0 && r.bound_violations == 0 &&
             r.variation_2d >= r.variation_lower * (1 - rtol) &&
             r.variation_2d <= r.variation_upper * (1 + rtol) && r.refinement_monotone &&
             r.kh_max_rel_error < 1e-3;
  return r;
}

json to_json(const KernelCheck& r) {
  return {{"negativity", {{"count", r.negativity_count}, {"violations", r.negativity_violations}, {"worst", r.negativity_worst}}},
          {"rectangle_bound", {{"count", r.bound_count}, {"violations", r.bound_violations}, {"worst_margin", r.bound_worst_margin}}},
          {"variation_2d",
           {{"value", r.variation_2d}, {"lower", r.variation_lower}, {"bound", r.variation_upper},
            {"grid_points", r.variation_grid_points}, {"mode", "exact"},
            {"dyadic_refinement", r.variation_refinement}, {"refinement_monotone", r.refinement_monotone}}},
          {"volterra_kernel", {{"max_rel_error", r.kh_max_rel_error}}},
          {"passed", r.passed}};
}

// --- covariance ---------------------------------------------------------------

CovarianceCheck covariance_check(const HurstParams& params, unsigned level, std::size_t count,
                                 std::uint64_t seed, unsigned threads) {
  const CovKernel k(params);
  const FbmSampler sampler(params, level, SamplerMethod::cholesky, 1);
  const auto t = sampler.times();
  const std::size_t n = t.size() - 1;  // interior + terminal points
  const std::size_t pairs = n * (n + 1) / 2;
  const std::uint64_t s = derive_seed(seed, 3);

  std::vector<std::vector<double>> s1(kBlocks, std::vector<double>(pairs)), s2 = s1;
  parallel_for(kBlocks, threads, [&](std::size_t b) {
    std::vector<double> inc(n), x(n);
    for (std::size_t i = b * count / kBlocks; i < (b + 1) * count / kBlocks; ++i) {
      sampler.sample_increments(s, i, 0, inc);
      double acc = 0.0;
      for (std::size_t a = 0; a < n; ++a) x[a] = acc += inc[a];
      std::size_t e = 0;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t c = a; c < n; ++c, ++e) {
          const double p = x[a] * x[c];
          s1[b][e] += p;
          s2[b][e] += p * p;
        }
      }
    }
  });

  CovarianceCheck r;
  r.level = level;
  r.count = count;
  r.entries = pairs;
  const double N = static_cast<double>(count);
  std::size_t e = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = a; c < n; ++c, ++e) {
      double m1 = 0.0, m2 = 0.0;
      for (std::size_t b = 0; b < kBlocks; ++b) {
        m1 += s1[b][e];
        m2 += s2[b][e];
      }
      m1 /= N;
      const double var = std::max(0.0, (m2 / N - m1 * m1) * N / (N - 1.0));
      const double se = std::sqrt(var / N);
      const double target = k.eval_R(t[a + 1], t[c + 1]);
      const double z = std::abs(m1 - target) / se;
      r.max_abs_z = std::max(r.max_abs_z, z);
      if (z > 3.0) ++r.violations;
      if (a == n - 1 && c == n - 1) {
        r.var_T = m1;
        r.var_T_error = se;
        r.var_T_target = target;
        r.var_T_z = z;
      }
    }
  }
  r.passed = r.violations == 0 && r.var_T_z <= 3.0;
  return r;
}

json to_json(const CovarianceCheck& r) {
  return {{"level", r.level}, {"count", r.count}, {"entries", r.entries}, {"violations", r.violations},
          {"max_abs_z", r.max_abs_z},
          {"terminal_variance", {{"estimate", r.var_T}, {"std_error", r.var_T_error}, {"target", r.var_T_target}, {"z", r.var_T_z}}},
          {"passed", r.passed}};
}

// --- Levy area ----------------------------------------------------------------

AreaCheck area_check(double horizon, unsigned level, std::size_t count, std::uint64_t seed,
                     unsigned threads) {
  AreaCheck r;
  const GridPath square({0.0, 1.0, 2.0, 3.0, 4.0}, {{0.0, 1.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 1.0, 0.0}});
  r.square_error = std::abs(levy_area(square) - 1.0);

  r.circle_points = std::size_t{1} << 12;
  std::vector<double> ct(r.circle_points + 1), cx(ct.size()), cy(ct.size());
  for (std::size_t i = 0; i <= r.circle_points; ++i) {
    const double th = 2.0 * std::numbers::pi * double(i) / double(r.circle_points);
    ct[i] = double(i);
    cx[i] = std::cos(th) - 1.0;  // start at the origin; a closed loop's area is translation invariant
    cy[i] = std::sin(th);
  }
  r.circle_error = std::abs(levy_area(GridPath(ct, {cx, cy})) - std::numbers::pi);

  const auto bm = HurstParams::diagnostic(0.5, horizon);
  const FbmSampler sampler(bm, level, SamplerMethod::circulant);
  const std::uint64_t s = derive_seed(seed, 4);
  std::vector<double> a2(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const double a = levy_area(sampler.sample(s, i));
    a2[i] = a * a;
  });
  const auto me = stats::mean_and_error(a2);
  r.brownian_level = level;
  r.brownian_count = count;
  r.brownian_var = me.mean;
  r.brownian_var_error = me.std_error;
  r.brownian_target = horizon * horizon / 4.0;
  r.brownian_rel_error = std::abs(me.mean - r.brownian_target) / r.brownian_target;
  r.passed = r.square_error <= 1e-12 && r.circle_error <= 1e-5 && r.brownian_rel_error <= 0.05;
  return r;
}

json to_json(const AreaCheck& r) {
  return {{"unit_square", {{"abs_error", r.square_error}}},
          {"circle", {{"points", r.circle_points}, {"abs_error", r.circle_error}}},
          {"brownian_variance",
           {{"level", r.brownian_level}, {"count", r.brownian_count}, {"estimate", r.brownian_var},
            {"std_error", r.brownian_var_error}, {"target", r.brownian_target}, {"rel_error", r.brownian_rel_error}}},
          {"passed", r.passed}};
}

// --- p-variation ----------------------------------------------------------------

VariationCheck variation_check(const HurstParams& params, std::size_t random_paths,
                               std::size_t projection_paths, unsigned level, std::uint64_t seed,
                               unsigned threads) {
  VariationCheck r;
  r.random_paths = random_paths;
  r.projection_paths = projection_paths;
  r.p = params.default_p();

  std::vector<double> dp_err(random_paths);
  const std::uint64_t s_rand = derive_seed(seed, 5);
  parallel_for(random_paths, threads, [&](std::size_t i) {
    RandomStream s({s_rand, i, 0});
    const std::size_t n = 2 + static_cast<std::size_t>(s.uniform() * (kBruteforceMaxPoints - 1));
    std::vector<double> v(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) v[j] = v[j - 1] + s.normal();
    const double p = 1.0 + 3.0 * s.uniform();
    dp_err[i] = rel_error(pvar_exact(v, p).value, pvar_bruteforce(v, p));
  });
  r.max_dp_vs_bruteforce = dp_err.empty() ? 0.0 : *std::max_element(dp_err.begin(), dp_err.end());

  std::vector<double> mono(65);
  for (std::size_t i = 0; i < mono.size(); ++i) mono[i] = std::sqrt(double(i)) + 0.01 * double(i * i);
  r.monotone_error = rel_error(pvar_exact(mono, r.p).value, mono.back() - mono.front());

  const FbmSampler sampler(params, level, SamplerMethod::circulant);
  const std::uint64_t s_proj = derive_seed(seed, 6);
  const double factor = std::pow(3.0, r.p - 1.0);
  std::vector<double> ratio(projection_paths);
  parallel_for(projection_paths, threads, [&](std::size_t i) {
    const auto x = sampler.sample(s_proj, i);
    const double full = pvar_exact(x, r.p).value;
    double worst = 0.0;
    for (unsigned m = 1; m < level; ++m) {
      worst = std::max(worst, pvar_exact(dyadic_project(x, m), r.p).value / (factor * full));
    }
    ratio[i] = worst;
  });
  for (double q : ratio) {
    r.projection_max_ratio = std::max(r.projection_max_ratio, q);
    if (q > 1.0) ++r.projection_violations;
  }
  r.passed = r.max_dp_vs_bruteforce <= 1e-12 && r.monotone_error <= 1e-12 && r.projection_violations == 0;
  return r;
}

json to_json(const VariationCheck& r) {
  return {{"dp_vs_bruteforce", {{"paths", r.random_paths}, {"max_rel_error", r.max_dp_vs_bruteforce}}},
          {"monotone", {{"rel_error", r.monotone_error}}},
          {"dyadic_projection",
           {{"paths", r.projection_paths}, {"p", r.p}, {"violations", r.projection_violations}, {"max_ratio", r.projection_max_ratio}}},
          {"passed", r.passed}};
}

// --- Cameron-Martin -------------------------------------------------------------

CameronMartinCheck cameron_martin_check(const HurstParams& params, unsigned level,
                                        std::size_t integrands, std::uint64_t seed) {
  CameronMartinCheck r;
  const CovKernel k(params);
  const double T = params.horizon();
  RandomStream s({derive_seed(seed, 7), 0, 0});
  for (int i = 0; i < 200; ++i) {
    const double a = s.uniform() * T, b = s.uniform() * T;
    const unsigned c = i % 2;
    const double lhs = cm_inner(CMElement::section(params, a, c), CMElement::section(params, b, c));
    r.reproducing_max_error = std::max(r.reproducing_max_error, std::abs(lhs - k.eval_R(a, b)));
    const auto h = random_element(params, s, 5);
    const double via_inner = cm_inner(h, CMElement::section(params, a, c));
    r.reproducing_max_error = std::max(r.reproducing_max_error, std::abs(via_inner - cm_eval(h, a)[c]));
  }

  const auto t = dyadic_grid(T, level);
  const FbmSampler sampler(params, level, SamplerMethod::circulant, 1);
  const auto mu = [&](double a, double b, double c, double d) { return k.mu_R_unchecked(a, b, c, d); };
  const std::uint64_t s_int = derive_seed(seed, 8);
  for (std::size_t i = 0; i < integrands; ++i) {
    std::vector<double> alpha;
    if (i == 0) {
      alpha.assign(t.begin(), t.end());
    } else {
      const auto p = sampler.sample(s_int, i);
      alpha.assign(p.component(0).begin(), p.component(0).end());
    }
    // 2D Young sums sample f at cell corners; for a tensor integrand they
    // reduce to the one-dimensional weights of the same rule.
    Eigen::MatrixXd f(t.size(), t.size());
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = 0; b < t.size(); ++b) f(a, b) = alpha[a] * alpha[b];
    for (Rule rule : {Rule::midpoint, Rule::left}) {
      const double y2 = young_integral_2d(f, t, t, mu, rule);
      const double n = cm_integral_norm(params, t, alpha, rule);
      r.young_max_rel_error = std::max(r.young_max_rel_error, rel_error(n * n, y2));
    }
  }
  r.young_integrands = integrands;
  r.passed = r.reproducing_max_error <= 1e-15 * std::max(1.0, std::pow(T, params.two_h())) &&
             r.young_max_rel_error <= 1e-10;
  return r;
}

json to_json(const CameronMartinCheck& r) {
  return {{"reproducing_identity", {{"max_abs_error", r.reproducing_max_error}}},
          {"norm_vs_young_2d", {{"integrands", r.young_integrands}, {"max_rel_error", r.young_max_rel_error}}},
          {"passed", r.passed}};
}

// --- Malliavin ----------------------------------------------------------------

MalliavinCheck malliavin_check(const HurstParams& params, unsigned level, std::size_t count,
                               std::size_t pairs, std::uint64_t seed, unsigned threads) {
  MalliavinCheck r;
  r.level = level;
  r.count = count;
  r.pairs = pairs;
  const auto t = dyadic_grid(params.horizon(), level);

  {
    RandomStream s({derive_seed(seed, 9), 0, 0});
    for (std::size_t i = 0; i < pairs; ++i) {
      const auto h = random_element(params, s, 4), k = random_element(params, s, 4);
      const auto hp = cm_path(h, t), kp = cm_path(k, t);
      r.duality_max_rel_error =
          std::max(r.duality_max_rel_error, rel_error(cm_inner(q_operator(params, hp), k), q_form(hp, kp)));
    }
  }

  const std::uint64_t s_paths = derive_seed(seed, 10);
  const auto rows = malliavin_samples({params, level, count, s_paths, SamplerMethod::circulant}, threads);
  const FbmSampler sampler(params, level, SamplerMethod::circulant);
  const double p = params.default_p();
  const double c = std::pow(params.horizon(), params.two_h()) / 4.0 + 2.0 * rvar_upper_bound(params);
  const std::uint64_t s_dir = derive_seed(seed, 11);
  std::vector<double> ratio(rows.size()), gateaux(rows.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const auto omega = sampler.sample(s_paths, rows[i].sample);
    const double pv = pvar_exact(omega, p).value;
    ratio[i] = rows[i].q_norm2 / (c * pv * pv);
    RandomStream s({s_dir, i, 0});
    const auto h = cm_path(random_element(params, s, 3), t);
    // A is quadratic, so the central difference is exact up to rounding.
    const double eps = 1e-3;
    const double fd = (levy_area(omega.combine(1.0, h, eps)) - levy_area(omega.combine(1.0, h, -eps))) / (2 * eps);
    gateaux[i] = rel_error(fd, derivative_area(omega, h));
  });
  r.min_phi = rows.empty() ? 0.0 : rows.front().phi;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    r.min_phi = std::min(r.min_phi, row.phi);
    r.det_max_rel_error = std::max({r.det_max_rel_error, rel_error(row.det_gamma, row.phi), rel_error(row.det_blockdet, row.phi)});
    r.bound_max_ratio = std::max(r.bound_max_ratio, ratio[i]);
    if (ratio[i] > 1.0) ++r.bound_violations;
    r.gateaux_max_rel_error = std::max(r.gateaux_max_rel_error, gateaux[i]);
  }
  r.passed = r.duality_max_rel_error <= 1e-6 && r.det_max_rel_error <= 1e-10 && r.min_phi >= -1e-10 &&
             r.gateaux_max_rel_error <= 1e-8 && r.bound_violations == 0;
  return r;
}

json to_json(const MalliavinCheck& r) {
  return {{"level", r.level}, {"count", r.count},
          {"duality", {{"pairs", r.pairs}, {"max_rel_error", r.duality_max_rel_error}}},
          {"determinant", {{"max_rel_error", r.det_max_rel_error}}},
          {"min_phi", r.min_phi},
          {"gateaux", {{"max_rel_error", r.gateaux_max_rel_error}}},
          {"q_norm_bound", {{"violations", r.bound_violations}, {"max_ratio", r.bound_max_ratio}}},
          {"passed", r.passed}};
}

// --- tail -------------------------------------------------------------------

TailCheck tail_check(const HurstParams& params, unsigned level, std::size_t count,
                     std::vector<double> s_grid, std::uint64_t seed, unsigned threads) {
  TailCheck r;
  r.report = phi_tail_diagnostic({params, level, count, derive_seed(seed, 12), SamplerMethod::circulant},
                                 s_grid, threads);
  r.passed = r.report.log_slope <= -1.0 && r.report.decreasing;
  return r;
}

json to_json(const PhiTailReport& r) {
  return {{"s_grid", r.s_grid}, {"laplace", r.laplace}, {"log_laplace", r.log_laplace}, {"log_slope", r.log_slope}, {"decreasing", r.decreasing},
          {"inverse_moment", r.inverse_moment}, {"inverse_moment_quarter", r.inverse_moment_quarter},
          {"inverse_moment_stable", r.inverse_moment_stable}, {"count", r.count},
          {"excluded", r.excluded}, {"min_phi", r.min_phi}};
}

json to_json(const TailCheck& r) {
  json j = to_json(r.report);
  j["passed"] = r.passed;
  return j;
}

// --- spectral ---------------------------------------------------------------

SpectralCheck spectral_check(const HurstParams& params, std::vector<std::size_t> grids) {
  SpectralCheck r;
  r.psd = true;
  r.counts_increasing = true;
  for (std::size_t g : grids) {
    r.reports.push_back(spectral_diagnostic(params, g));
    const auto& rep = r.reports.back();
    if (rep.min_eigenvalue < -1e-10) r.psd = false;
    if (r.reports.size() > 1 && !(rep.positive_count > r.reports[r.reports.size() - 2].positive_count)) {
      r.counts_increasing = false;
    }
  }
  if (r.reports.size() >= 2) {
    const double a = r.reports[r.reports.size() - 2].trace, b = r.reports.back().trace;
    r.trace_change = std::abs(b - a) / std::abs(a);
  }
  r.passed = r.psd && r.counts_increasing && r.trace_change <= 0.1;
  return r;
}

json to_json(const SpectralReport& r, bool with_eigenvalues) {
  json j{{"grid_n", r.grid_n}, {"positive_count", r.positive_count}, {"trace", r.trace},
         {"min_eigenvalue", r.min_eigenvalue}};
  if (with_eigenvalues) j["eigenvalues"] = r.eigenvalues;
  return j;
}

json to_json(const SpectralCheck& r) {
  json grids = json::array();
  for (const auto& rep : r.reports) grids.push_back(to_json(rep, false));
  return {{"grids", grids}, {"psd", r.psd}, {"counts_increasing", r.counts_increasing},
          {"trace_change", r.trace_change}, {"passed", r.passed}};
}

// --- density ----------------------------------------------------------------

DensityCheck density_check(const HurstParams& params, unsigned level, std::size_t count,
                           std::size_t ks_count, std::size_t grid_n, std::uint64_t seed,
                           unsigned threads) {
  DensityCheck r;
  r.count = count;
  r.ks_count = std::min(ks_count, count);
  r.grid_n = grid_n;
  const auto y = sample_Y({params, level, count, derive_seed(seed, 13), SamplerMethod::circulant}, threads);

  const double sd = std::pow(params.horizon(), params.hurst());
  std::vector<double> b1(r.ks_count), b2(r.ks_count);
  for (std::size_t i = 0; i < r.ks_count; ++i) {
    b1[i] = y[i][0];
    b2[i] = y[i][1];
  }
  r.ks_b1_p = stats::ks_normal(b1, 0.0, sd).p_value;
  r.ks_b2_p = stats::ks_normal(b2, 0.0, sd).p_value;

  // A and -A have the same law; compare disjoint halves so the samples are independent.
  const std::size_t half = r.ks_count / 2;
  std::vector<double> a1(half), a2(half);
  for (std::size_t i = 0; i < half; ++i) {
    a1[i] = y[i][2];
    a2[i] = -y[half + i][2];
  }
  r.ks_sign_flip_p = stats::ks_two_sample(a1, a2).p_value;

  const auto est = kde(y, default_box(y, grid_n), std::nullopt, threads);
  r.mass = est.mass();
  const auto sm = smoothness_probe(est);
  r.smooth_finite = sm.all_finite;
  r.high_variance_cells = sm.high_variance_cells;
  r.probed_cells = sm.cells;
  r.max_relative_sd = sm.max_relative_sd;
  r.passed = r.ks_b1_p > 0.01 && r.ks_b2_p > 0.01 && r.ks_sign_flip_p > 0.01 && r.mass >= 0.9 &&
             r.mass <= 1.05 && r.smooth_finite;
  return r;
}

json to_json(const DensityCheck& r) {
  return {{"count", r.count}, {"ks_count", r.ks_count}, {"grid_n", r.grid_n},
          {"ks_p_value", {{"b1", r.ks_b1_p}, {"b2", r.ks_b2_p}, {"area_sign_flip", r.ks_sign_flip_p}}},
          {"mass", r.mass},
          {"smoothness", {{"all_finite", r.smooth_finite}, {"probed_cells", r.probed_cells},
                          {"high_variance_cells", r.high_variance_cells}, {"max_relative_sd", r.max_relative_sd}}},
          {"passed", r.passed}};
}

}  // namespace fbmlab
