#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fbmarea/errors.hpp"
#include "fbmarea/kernel.hpp"
#include "fbmarea/levy_area.hpp"
#include "fbmarea/malliavin.hpp"
#include "fbmarea/rng.hpp"
#include "fbmarea/stats.hpp"
#include "fbmarea/variation.hpp"

using namespace fbmarea;

namespace {

CMElement random_element(const HurstParams& params, RandomStream& s, std::size_t atoms) {
  std::vector<Atom> a;
  for (std::size_t i = 0; i < atoms; ++i) a.push_back({s.uniform() * params.horizon(), s.uniform() < 0.5 ? 0u : 1u, s.normal()});
  return CMElement(params, a);
}

GridPath smooth_path(std::span<const double> t, double a, double b) {
  std::vector<double> x(t.size()), y(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    x[k] = std::sin(a * t[k]);
    y[k] = t[k] * std::cos(b * t[k]) - 0.0;
  }
  return GridPath(std::vector<double>(t.begin(), t.end()), {x, y});
}

}  // namespace

TEST_CASE("rotation") {
  const auto t = dyadic_grid(1.0, 4);
  const auto p = smooth_path(t, 2.0, 3.0);
  const auto r2 = rotate(rotate(p));
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(r2.value(0, k) == -p.value(0, k));
    CHECK(r2.value(1, k) == -p.value(1, k));
    const auto r = rotate(p);
    CHECK(std::hypot(r.value(0, k), r.value(1, k)) == std::hypot(p.value(0, k), p.value(1, k)));
  }
}

TEST_CASE("q form identities") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 8, SamplerMethod::circulant);
  for (int i = 0; i < 30; ++i) {
    const auto h = sampler.sample(61, 2 * i), k = sampler.sample(61, 2 * i + 1);
    CHECK(q_form(h, k) == doctest::Approx(q_form(k, h)).epsilon(1e-14).scale(1.0));
    CHECK(q_form_alt(h, k) == doctest::Approx(q_form(h, k)).epsilon(1e-12).scale(1.0));
    CHECK(0.5 * q_form(h, h) == doctest::Approx(levy_area(h)).epsilon(1e-12).scale(1.0));
    const double r = params.r();
    const double ratio = std::abs(q_form(h, k)) / (pvar_exact(h, r).value * pvar_exact(k, r).value);
    CHECK(std::isfinite(ratio));
  }
  const auto other = smooth_path(dyadic_grid(1.0, 5), 1.0, 1.0);
  CHECK_THROWS_AS(q_form(sampler.sample(61, 0), other), GridMismatchError);
}

TEST_CASE("Q of a straight line vanishes at T") {
  for (double h : {0.35, 0.4, 0.45}) {
    const HurstParams params(h, 1.3);
    const auto t = dyadic_grid(1.3, 11);
    std::vector<double> x(t.begin(), t.end()), zero(t.size(), 0.0);
    const GridPath omega(t, {x, zero});
    const auto q = q_operator(params, omega);
    const auto end = cm_eval(q, 1.3);
    CHECK(std::abs(end[0]) < 1e-14);
    CHECK(std::abs(end[1]) < 1e-4);

    // the continuum value of int_0^T t R(dt, T) is T^{2H+1}/2
    const CovKernel kern(params);
    const double T = 1.3;
    const double ir = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double s) { return kern.eval_R(s, T); }, 0.0, T, 12, 1e-13);
    CHECK(T * std::pow(T, 2 * h) - ir == doctest::Approx(0.5 * std::pow(T, 2 * h + 1)).epsilon(1e-10));
  }
}

TEST_CASE("duality between Q and q") {
  const HurstParams params(0.4, 1.0);
  const auto t = dyadic_grid(1.0, 8);
  RandomStream s({62, 0, 0});
  for (int i = 0; i < 20; ++i) {
    const auto h = random_element(params, s, 4), k = random_element(params, s, 4);
    const auto hp = cm_path(h, t), kp = cm_path(k, t);
    const double lhs = cm_inner(q_operator(params, hp), k);
    CHECK(lhs == doctest::Approx(q_form(hp, kp)).epsilon(1e-6));
  }
}

TEST_CASE("derivative of the area") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 8, SamplerMethod::circulant);
  const auto t = sampler.times();
  const auto omega = sampler.sample(63, 0);
  const auto h = smooth_path(t, 1.5, 2.5);
  const double eps = 1e-5;
  const double fd = (levy_area(omega.combine(1.0, h, eps)) - levy_area(omega.combine(1.0, h, -eps))) / (2 * eps);
  CHECK(fd == doctest::Approx(derivative_area(omega, h)).epsilon(1e-8));
  CHECK(derivative_area(omega, omega) == doctest::Approx(2.0 * levy_area(omega)).epsilon(1e-12));

  for (double u : {0.3, 0.9}) {
    const auto e = CMElement::section(params, u, 0);
    const double via_q = cm_inner(q_operator(params, omega), e);
    CHECK(via_q == doctest::Approx(derivative_area(omega, cm_path(e, t))).epsilon(1e-6));
  }
}

TEST_CASE("determinants") {
  const Eigen::Vector2d c(1.0, 2.0);
  Eigen::Matrix3d m;
  m << 2, 0, 1, 0, 2, 2, 1, 2, 10;
  CHECK(det3(m) == doctest::Approx(30.0));
  CHECK(block_determinant(2.0, c, 10.0) == doctest::Approx(30.0));
  CHECK(det3(m) == doctest::Approx(m.determinant()));
  CHECK_THROWS_AS(block_determinant(0.0, c, 1.0), DomainError);
}

TEST_CASE("Malliavin matrix of the zero path") {
  const HurstParams params(0.4, 2.0);
  const auto t = dyadic_grid(2.0, 5);
  const GridPath zero(t, {std::vector<double>(t.size()), std::vector<double>(t.size())});
  const auto rep = malliavin_matrix(params, zero);
  const double t2h = std::pow(2.0, 0.8);
  CHECK(rep.phi == 0.0);
  CHECK(rep.q_norm2 == 0.0);
  CHECK(rep.gamma(0, 0) == t2h);
  CHECK(rep.gamma(1, 1) == t2h);
  CHECK(rep.gamma(2, 2) == 0.0);
}

TEST_CASE("Malliavin matrix on sampled paths") {
  const HurstParams params(0.4, 1.0);
  const auto rows = malliavin_samples({params, 8, 200, 64, SamplerMethod::circulant}, 0);
  const double t2h = 1.0;
  const double bound_c = t2h / 4 + 2 * rvar_upper_bound(params);
  const FbmSampler sampler(params, 8, SamplerMethod::circulant);
  for (const auto& r : rows) {
    CHECK(r.phi >= -1e-10);
    CHECK(r.det_gamma == doctest::Approx(r.phi).epsilon(1e-10));
    CHECK(r.det_blockdet == doctest::Approx(r.phi).epsilon(1e-10));
    for (int c = 0; c < 2; ++c) CHECK(r.q_omega_T[c] * r.q_omega_T[c] <= t2h * r.q_norm2_component[c] * (1 + 1e-12));
    const auto omega = sampler.sample(64, r.sample);
    const double pv = pvar_exact(omega, params.default_p()).value;
    CHECK(r.q_norm2 <= bound_c * pv * pv);
  }
  // the Gram fast path agrees with the atom calculus
  const auto omega = sampler.sample(64, 0);
  const auto q = q_operator(params, omega);
  CHECK(cm_norm2(q) == doctest::Approx(rows[0].q_norm2).epsilon(1e-10));
  const auto qt = cm_eval(q, 1.0);
  CHECK(qt[0] == doctest::Approx(rows[0].q_omega_T[0]).epsilon(1e-10));
}

TEST_CASE("adjoint of the derivative") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 6, SamplerMethod::circulant);
  RandomStream s({65, 0, 0});
  for (int i = 0; i < 10; ++i) {
    const auto omega = sampler.sample(65, i);
    const Eigen::Vector3d x(s.normal(), s.normal(), s.normal());
    const auto k = random_element(params, s, 5);
    const double lhs = cm_inner(dy_adjoint(params, omega, x), k);
    const double rhs = x.dot(dy_apply(params, omega, k));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    // gamma = DY DY*
    const auto rep = malliavin_matrix(params, omega);
    for (int a = 0; a < 3; ++a) {
      Eigen::Vector3d e = Eigen::Vector3d::Zero();
      e[a] = 1.0;
      const auto col = dy_apply(params, omega, dy_adjoint(params, omega, e));
      for (int b = 0; b < 3; ++b) CHECK(col[b] == doctest::Approx(rep.gamma(b, a)).epsilon(1e-10).scale(1e-12));
    }
  }
}

TEST_CASE("Phi converges under dyadic refinement") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 11, SamplerMethod::circulant);
  std::vector<double> mean_diff(6, 0.0);
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    const auto phi = phi_series(params, sampler.sample(66, i), 4, 10);
    for (std::size_t k = 0; k + 1 < phi.size(); ++k) mean_diff[k] += std::abs(phi[k + 1] - phi[k]) / n;
  }
  std::vector<double> lvl, logd;
  for (std::size_t k = 0; k < mean_diff.size(); ++k) {
    lvl.push_back(double(k));
    logd.push_back(std::log(mean_diff[k]));
  }
  CHECK(stats::fit_line(lvl, logd).slope < 0.0);
}

TEST_CASE("spectral diagnostic on a small basis") {
  const HurstParams params(0.4, 1.0);
  const auto rep = spectral_diagnostic(params, 4, 8);
  CHECK(rep.eigenvalues.size() == 8);
  CHECK(rep.min_eigenvalue >= -1e-8);
  CHECK(rep.trace > 0.0);
  CHECK_THROWS_AS(spectral_diagnostic(params, 65), SizeError);
}

TEST_CASE("tail and moment diagnostics") {
  const HurstParams params(0.4, 1.0);
  const std::vector<double> s{10, 100, 1000};
  const auto tail = phi_tail_diagnostic({params, 6, 400, 67, SamplerMethod::circulant}, s);
  CHECK(tail.decreasing);
  CHECK(tail.log_slope < 0.0);
  CHECK(tail.count == 400);
  const std::vector<double> bad{10, 5};
  const std::vector<double> phi(10, 1.0);
  CHECK_THROWS_AS(phi_tail_from_samples(params, phi, bad), DomainError);

  // exp(-s) underflows for the larger s; the log values must not
  const std::vector<double> big{100, 1000, 10000};
  const auto under = phi_tail_from_samples(params, phi, big);
  CHECK(under.laplace[2] == 0.0);
  CHECK(under.log_laplace[2] == doctest::Approx(-10000.0));
  CHECK(under.decreasing);

  const auto bm = HurstParams::diagnostic(0.5, 1.0);
  const auto mom = moment_diagnostic({bm, 10, 10000, 68, SamplerMethod::circulant}, 4);
  CHECK(mom.rows[1].estimate == doctest::Approx(0.25).epsilon(0.05));
  CHECK(mom.rows[0].estimate <= std::sqrt(mom.rows[1].estimate));
  CHECK(mom.kurtosis_ratio >= 1.0);
  CHECK(mom.kurtosis_ratio <= 20.0);
  CHECK(mom.stable);
  CHECK_THROWS_AS(moment_diagnostic({bm, 4, 100, 1, SamplerMethod::circulant}, 9), DomainError);
}
