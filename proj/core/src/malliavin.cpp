#include "fbmarea/malliavin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbmarea/errors.hpp"
#include "fbmarea/kernel.hpp"
#include "fbmarea/levy_area.hpp"
#include "fbmarea/parallel.hpp"
#include "fbmarea/stats.hpp"
#include "fbmarea/young.hpp"

namespace fbmarea {
namespace {

void require_2d(const GridPath& p) {
  if (p.dim() != 2) throw DimensionError("expected a two-component path");
}

void require_shared(const GridPath& a, const GridPath& b) {
  require_2d(a);
  require_2d(b);
  if (!same_grid(a, b)) throw GridMismatchError("paths are not on the same grid");
}

// int h . dk~ = int h^1 dk^2 - int h^2 dk^1
double cross_integral(const GridPath& h, const GridPath& k) {
  return young_integral(h.component(0), k.component(1)) - young_integral(h.component(1), k.component(0));
}

void require_horizon(const HurstParams& params, std::span<const double> times) {
  if (std::abs(times.back() - params.horizon()) > 1e-12 * params.horizon()) {
    throw GridMismatchError("path grid must end at the horizon T");
  }
}

}  // namespace

GridPath rotate(const GridPath& omega) {
  require_2d(omega);
  std::vector<double> second(omega.component(1).begin(), omega.component(1).end());
  std::vector<double> first(omega.component(0).begin(), omega.component(0).end());
  for (auto& v : first) v = -v;
  return GridPath(std::vector<double>(omega.times().begin(), omega.times().end()),
                  {std::move(second), std::move(first)});
}

double q_form(const GridPath& h, const GridPath& k) {
  require_shared(h, k);
  return 0.5 * (cross_integral(h, k) + cross_integral(k, h));
}

double q_form_alt(const GridPath& h, const GridPath& k) {
  require_shared(h, k);
  // k(T) . h~(T) = k^1 h^2 - k^2 h^1
  const double boundary = k.terminal(0) * h.terminal(1) - k.terminal(1) * h.terminal(0);
  return cross_integral(h, k) + 0.5 * boundary;
}

std::array<std::vector<double>, 2> q_operator_coefficients(const GridPath& omega) {
  require_2d(omega);
  const auto rot = rotate(omega);
  std::array<std::vector<double>, 2> out;
  for (std::size_t c = 0; c < 2; ++c) {
    auto coeffs = cm_integral_coefficients(rot.component(c), Rule::midpoint);
    for (auto& v : coeffs) v = -v;
    coeffs.back() += 0.5 * rot.terminal(c);
    out[c] = std::move(coeffs);
  }
  return out;
}

CMElement q_operator(const HurstParams& params, const GridPath& omega) {
  require_horizon(params, omega.times());
  const auto coeffs = q_operator_coefficients(omega);
  std::vector<Atom> atoms;
  atoms.reserve(2 * omega.size());
  for (unsigned c = 0; c < 2; ++c) {
    for (std::size_t k = 0; k < omega.size(); ++k) atoms.push_back({omega.times()[k], c, coeffs[c][k]});
  }
  return CMElement(params, std::move(atoms));
}

double derivative_area(const GridPath& omega, const GridPath& h) {
  require_shared(omega, h);
  return 0.5 * (cross_integral(h, omega) + cross_integral(omega, h));
}

double det3(const Eigen::Matrix3d& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double block_determinant(double a, const Eigen::Vector2d& c, double d) {
  if (a == 0.0) throw DomainError("block determinant needs a != 0");
  return a * a * (d - c.squaredNorm() / a);
}

MalliavinReport malliavin_matrix(const GridGram& gram, const GridPath& omega) {
  require_2d(omega);
  if (omega.size() != gram.size()) throw GridMismatchError("Gram grid does not match the path");
  const HurstParams& params = gram.params();
  const double t2h = std::pow(params.horizon(), params.two_h());

  const auto coeffs = q_operator_coefficients(omega);
  MalliavinReport rep;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto values = gram.evaluate(coeffs[c]);
    double norm2 = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) norm2 += coeffs[c][k] * values[k];
    rep.q_norm2_component[c] = norm2;
    rep.q_omega_T[c] = values.back();
  }
  rep.q_norm2 = rep.q_norm2_component[0] + rep.q_norm2_component[1];

  rep.gamma.setZero();
  rep.gamma(0, 0) = t2h;
  rep.gamma(1, 1) = t2h;
  rep.gamma(0, 2) = rep.gamma(2, 0) = rep.q_omega_T[0];
  rep.gamma(1, 2) = rep.gamma(2, 1) = rep.q_omega_T[1];
  rep.gamma(2, 2) = rep.q_norm2;

  const double qT2 = rep.q_omega_T[0] * rep.q_omega_T[0] + rep.q_omega_T[1] * rep.q_omega_T[1];
  rep.phi = t2h * t2h * rep.q_norm2 - t2h * qT2;
  rep.det_gamma = det3(rep.gamma);
  rep.det_blockdet = block_determinant(t2h, Eigen::Vector2d(rep.q_omega_T[0], rep.q_omega_T[1]), rep.q_norm2);
  return rep;
}

MalliavinReport malliavin_matrix(const HurstParams& params, const GridPath& omega) {
  require_horizon(params, omega.times());
  return malliavin_matrix(GridGram(params, omega.times()), omega);
}

Eigen::Vector3d dy_apply(const HurstParams& params, const GridPath& omega, const CMElement& k) {
  const auto end = cm_eval(k, params.horizon());
  return {end[0], end[1], cm_inner(q_operator(params, omega), k)};
}

CMElement dy_adjoint(const HurstParams& params, const GridPath& omega, const Eigen::Vector3d& x) {
  const double T = params.horizon();
  CMElement ends(params, {{T, 0, x[0]}, {T, 1, x[1]}});
  return ends + q_operator(params, omega).scaled(x[2]);
}

std::vector<double> phi_series(const HurstParams& params, const GridPath& fine,
                               unsigned level_min, unsigned level_max) {
  std::vector<double> out;
  for (unsigned m = level_min; m <= level_max; ++m) {
    out.push_back(malliavin_matrix(params, dyadic_project(fine, m)).phi);
  }
  return out;
}

std::vector<MalliavinSample> malliavin_samples(const MalliavinBatchConfig& config, unsigned threads) {
  const FbmSampler sampler(config.params, config.level, config.method, 2);
  const GridGram gram(config.params, sampler.times());
  std::vector<MalliavinSample> out(config.count);
  parallel_for(config.count, threads, [&](std::size_t i) {
    const GridPath omega = sampler.sample(config.root_seed, i);
    const auto rep = malliavin_matrix(gram, omega);
    auto& row = out[i];
    row.sample = i;
    row.phi = rep.phi;
    row.det_gamma = rep.det_gamma;
    row.det_blockdet = rep.det_blockdet;
    row.q_norm2 = rep.q_norm2;
    row.q_omega_T = rep.q_omega_T;
    row.q_norm2_component = rep.q_norm2_component;
    row.area = levy_area(omega);
  });
  return out;
}

PhiTailReport phi_tail_from_samples(const HurstParams& params, std::span<const double> phi,
                                    std::span<const double> s_grid) {
  if (s_grid.empty()) throw DomainError("s grid is empty");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1]))) {
      throw DomainError("s grid must be positive and strictly increasing");
    }
  }
  if (phi.size() < 4) throw SizeError("tail diagnostic needs at least four samples");

  PhiTailReport rep;
  rep.count = phi.size();
  rep.s_grid.assign(s_grid.begin(), s_grid.end());
  rep.min_phi = *std::min_element(phi.begin(), phi.end());

  std::vector<double> exponent(phi.size());
  std::vector<double> log_s, log_e;
  for (double s : s_grid) {
    for (std::size_t i = 0; i < phi.size(); ++i) exponent[i] = -s * std::max(phi[i], 0.0);
    const double lme = stats::log_mean_exp(exponent);
    rep.laplace.push_back(std::exp(lme));
    rep.log_laplace.push_back(lme);
    log_s.push_back(std::log(s));
    log_e.push_back(lme);
  }
  rep.log_slope = log_s.size() >= 2 ? stats::fit_line(log_s, log_e).slope : 0.0;
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.log_laplace.size(); ++i) {
    if (!(rep.log_laplace[i] < rep.log_laplace[i - 1])) rep.decreasing = false;
  }

  const double t4h = std::pow(params.horizon(), 2.0 * params.two_h());
  const double floor = 1e-14 * t4h;
  const std::size_t quarter = phi.size() / 4;
  std::array<double, 2> sum_all{0.0, 0.0}, sum_q{0.0, 0.0};
  std::size_t kept_all = 0, kept_q = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!(phi[i] >= floor)) {
      ++rep.excluded;
      continue;
    }
    const double inv = 1.0 / phi[i];
    sum_all[0] += inv;
    sum_all[1] += inv * inv;
    ++kept_all;
    if (i < quarter) {
      sum_q[0] += inv;
      sum_q[1] += inv * inv;
      ++kept_q;
    }
  }
  for (std::size_t j = 0; j < 2; ++j) {
    rep.inverse_moment[j] = kept_all ? sum_all[j] / static_cast<double>(kept_all) : 0.0;
    rep.inverse_moment_quarter[j] = kept_q ? sum_q[j] / static_cast<double>(kept_q) : 0.0;
    const double a = rep.inverse_moment[j];
    const double b = rep.inverse_moment_quarter[j];
    rep.inverse_moment_stable[j] = std::isfinite(a) && std::isfinite(b) && a > 0.0 &&
                                   std::abs(b - a) <= 0.2 * a;
  }
  return rep;
}

PhiTailReport phi_tail_diagnostic(const MalliavinBatchConfig& config, std::span<const double> s_grid,
                                  unsigned threads) {
  const auto samples = malliavin_samples(config, threads);
  std::vector<double> phi(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) phi[i] = samples[i].phi;
  return phi_tail_from_samples(config.params, phi, s_grid);
}

SpectralReport spectral_diagnostic(const HurstParams& params, std::size_t grid_n,
                                   unsigned integration_level) {
  if (grid_n < 1 || grid_n > kSpectralMaxGrid) throw SizeError("spectral grid must have 1..64 atoms");
  const double T = params.horizon();
  const double t2h = std::pow(T, params.two_h());
  const CovKernel kernel(params);
  const auto tau = dyadic_grid(T, integration_level);
  const GridGram gram(params, tau);
  const std::size_t n_int = tau.size();

  std::vector<double> atom_t(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) atom_t[i] = static_cast<double>(i + 1) * T / static_cast<double>(grid_n);

  // Q applied to each atom path, stored as grid coefficients and evaluations.
  const std::size_t dim = 2 * grid_n;
  std::vector<std::array<std::vector<double>, 2>> qc(dim), qv(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    const std::size_t c = a / grid_n;
    const double t = atom_t[a % grid_n];
    std::vector<std::vector<double>> comps(2, std::vector<double>(n_int, 0.0));
    for (std::size_t k = 0; k < n_int; ++k) comps[c][k] = kernel.R_unchecked(t, tau[k]);
    const GridPath path(tau, std::move(comps));
    qc[a] = q_operator_coefficients(path);
    for (std::size_t d = 0; d < 2; ++d) qv[a][d] = gram.evaluate(qc[a][d]);
  }

  Eigen::MatrixXd M(dim, dim), G = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      double inner = 0.0, endpoint = 0.0;
      for (std::size_t d = 0; d < 2; ++d) {
        for (std::size_t k = 0; k < n_int; ++k) inner += qc[a][d][k] * qv[b][d][k];
        endpoint += qv[a][d].back() * qv[b][d].back();
      }
      const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
      M(ia, ib) = t2h * t2h * inner - t2h * endpoint;
      if (a / grid_n == b / grid_n) G(ia, ib) = kernel.R_unchecked(atom_t[a % grid_n], atom_t[b % grid_n]);
    }
  }
  const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, G, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw Error("generalized eigensolver failed");

  SpectralReport rep;
  rep.grid_n = grid_n;
  const Eigen::VectorXd& ev = solver.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
  rep.min_eigenvalue = rep.eigenvalues.front();
  for (double v : rep.eigenvalues) {
    rep.trace += v;
    if (v > 1e-10) ++rep.positive_count;
  }
  return rep;
}

MomentReport moments_from_samples(std::span<const double> area, unsigned j_max) {
  if (j_max < 1 || j_max > kMomentMaxOrder) throw DomainError("moment order must be in 1..8");
  if (area.size() < 20) throw SizeError("moment diagnostic needs at least 20 samples");
  MomentReport rep;
  rep.count = area.size();
  rep.stable = true;
  const std::size_t groups = std::min<std::size_t>(20, area.size());
  for (unsigned j = 1; j <= j_max; ++j) {
    const auto stat = [j](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += std::pow(std::abs(v), static_cast<double>(j));
      return s / static_cast<double>(x.size());
    };
    const auto jk = stats::jackknife(area, groups, stat);
    rep.rows.push_back({j, stat(area), jk.std_error});
    const double rel = rep.rows.back().std_error / rep.rows.back().estimate;
    if (!std::isfinite(rep.rows.back().estimate) || !std::isfinite(rel) || rel >= 0.5) rep.stable = false;
  }
  if (j_max >= 4) {
    const double m2 = rep.rows[1].estimate;
    rep.kurtosis_ratio = rep.rows[3].estimate / (m2 * m2);
  }
  return rep;
}

MomentReport moment_diagnostic(const MalliavinBatchConfig& config, unsigned j_max, unsigned threads) {
  if (j_max < 1 || j_max > kMomentMaxOrder) throw DomainError("moment order must be in 1..8");
  const FbmSampler sampler(config.params, config.level, config.method, 2);
  std::vector<double> area(config.count);
  parallel_for(config.count, threads,
               [&](std::size_t i) { area[i] = levy_area(sampler.sample(config.root_seed, i)); });
  return moments_from_samples(area, j_max);
}

}  // namespace fbmarea
