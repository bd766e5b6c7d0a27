#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "fbmarea/cameron_martin.hpp"
#include "fbmarea/errors.hpp"
#include "fbmarea/kernel.hpp"
#include "fbmarea/pathgen.hpp"
#include "fbmarea/rng.hpp"
#include "fbmarea/variation.hpp"

using namespace fbmarea;

namespace {

CMElement random_element(const HurstParams& params, RandomStream& s, std::size_t atoms, bool one_component = false) {
  std::vector<Atom> a;
  for (std::size_t i = 0; i < atoms; ++i) {
    const unsigned c = one_component ? 0u : (s.uniform() < 0.5 ? 0u : 1u);
    a.push_back({s.uniform() * params.horizon(), c, s.normal()});
  }
  return CMElement(params, a);
}

}  // namespace

TEST_CASE("reproducing identity") {
  const HurstParams params(0.4, 1.0);
  const CovKernel k(params);
  const auto a = CMElement::section(params, 0.3, 0);
  const auto b = CMElement::section(params, 0.8, 0);
  const auto b2 = CMElement::section(params, 0.8, 1);
  CHECK(cm_inner(a, b) == k.eval_R(0.3, 0.8));
  CHECK(cm_inner(a, b2) == 0.0);
  CHECK(cm_eval(a, 0.6)[0] == k.eval_R(0.3, 0.6));
  CHECK(cm_eval(a, 0.6)[1] == 0.0);
  CHECK(cm_eval(a, 0.0)[0] == 0.0);
  CHECK_THROWS_AS(cm_eval(a, 1.2), DomainError);
  CHECK_THROWS_AS(cm_inner(a, CMElement::section(HurstParams(0.35, 1.0), 0.3, 0)), KernelMismatchError);

  RandomStream s({51, 0, 0});
  for (int i = 0; i < 50; ++i) {
    const auto h = random_element(params, s, 5);
    const double t = s.uniform();
    const auto e = cm_eval(h, t);
    CHECK(e[0] == doctest::Approx(cm_inner(h, CMElement::section(params, t, 0))).epsilon(1e-14).scale(1.0));
    CHECK(e[1] == doctest::Approx(cm_inner(h, CMElement::section(params, t, 1))).epsilon(1e-14).scale(1.0));
  }
}

TEST_CASE("atoms consolidate on exact time match") {
  const HurstParams params(0.4, 1.0);
  const CMElement h(params, {{0.5, 0, 1.0}, {0.5, 0, 2.0}, {0.5, 1, 1.0}, {0.2, 0, 1.0}, {0.2, 0, -1.0}});
  CHECK(h.size() == 2);
  CHECK((h - h).size() == 0);
  CHECK_THROWS_AS(CMElement(params, {{0.5, 2, 1.0}}), DimensionError);
}

TEST_CASE("gram matrices are positive semidefinite") {
  const HurstParams params(0.4, 1.0);
  const CovKernel k(params);
  RandomStream s({52, 0, 0});
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(s.uniform() * 8);
    Eigen::MatrixXd g(n, n);
    std::vector<double> t(n);
    for (auto& v : t) v = s.uniform();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = k.eval_R(t[i], t[j]);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().cwiseAbs().maxCoeff());
    const auto h = random_element(params, s, 6);
    CHECK(cm_norm2(h) >= -1e-12);
  }
}

TEST_CASE("integrals against the kernel") {
  const HurstParams params(0.4, 1.0);
  const CovKernel k(params);
  const auto t = dyadic_grid(1.0, 10);
  const std::vector<double> one(t.size(), 1.0);
  CHECK(cm_norm2(cm_integral(params, t, one, 0)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(cm_integral_norm(params, t, one) == doctest::Approx(1.0).epsilon(1e-13));

  std::vector<double> lin(t.begin(), t.end());
  Eigen::MatrixXd f(t.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) f(i, j) = lin[i] * lin[j];
  const auto mu = [&](double a, double b, double c, double d) { return k.mu_R_unchecked(a, b, c, d); };
  const double y2 = young_integral_2d(f, t, t, mu);
  CHECK(cm_integral_norm(params, t, lin) == doctest::Approx(std::sqrt(y2)).epsilon(1e-10));

  const auto s = cm_integral(params, t, lin, 0);
  for (double u : {0.1, 0.5, 0.77}) {
    std::vector<double> h(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) h[i] = k.eval_R(u, t[i]);
    CHECK(cm_inner(s, CMElement::section(params, u, 0)) == doctest::Approx(young_integral(lin, h)).epsilon(1e-12));
  }

  // linearity in the integrand
  std::vector<double> sq(t.size()), mix(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    sq[i] = t[i] * t[i];
    mix[i] = 2.0 * lin[i] - 0.5 * sq[i];
  }
  const auto lhs = cm_integral(params, t, mix, 0);
  const auto rhs = cm_integral(params, t, lin, 0).scaled(2.0) + cm_integral(params, t, sq, 0).scaled(-0.5);
  CHECK(cm_norm2(lhs - rhs) == doctest::Approx(0.0).scale(1e-12));
}

TEST_CASE("dyadic refinement of the integral is cauchy") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 12, SamplerMethod::circulant);
  const auto alpha = sampler.sample(53, 0);
  std::vector<double> diffs;
  CMElement prev(params);
  for (unsigned m = 6; m <= 12; ++m) {
    const auto proj = dyadic_project(alpha, m);
    const auto cur = cm_integral(params, proj.times(), proj.component(0), 0);
    if (m > 6) diffs.push_back(std::sqrt(cm_norm2(cur - prev)));
    prev = cur;
  }
  for (std::size_t i = 1; i < diffs.size(); ++i) CHECK(diffs[i] < diffs[i - 1]);
}

TEST_CASE("norm bound against path variation") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 8, SamplerMethod::circulant);
  const double p = params.default_p();
  for (int i = 0; i < 20; ++i) {
    const auto a = sampler.sample(54, i);
    const double norm = cm_integral_norm(params, a.times(), a.component(0));
    const double pv = pvar_exact(a.component(0), p).value;
    const double ratio = norm * norm / (pv * pv * rvar_upper_bound(params));
    CHECK(std::isfinite(ratio));
    CHECK(ratio <= 1.0);
  }
}

TEST_CASE("gram cache agrees with atom calculus") {
  const HurstParams params(0.4, 1.0);
  const auto t = dyadic_grid(1.0, 5);
  const GridGram g(params, t);
  RandomStream s({55, 0, 0});
  std::vector<double> a(t.size()), b(t.size());
  for (auto& v : a) v = s.normal();
  for (auto& v : b) v = s.normal();
  const auto ea = g.to_element(a, 0), eb = g.to_element(b, 0);
  CHECK(g.inner(a, b) == doctest::Approx(cm_inner(ea, eb)).epsilon(1e-12));
  const auto ev = g.evaluate(a);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(ev[k] == doctest::Approx(cm_eval(ea, t[k])[0]).epsilon(1e-12).scale(1.0));
  CHECK(g.evaluate_terminal(a) == doctest::Approx(ev.back()));
}

TEST_CASE("embedding into r-variation paths is a contraction") {
  for (double h : {0.35, 0.4, 0.45}) {
    const HurstParams params(h, 1.0);
    const auto t = dyadic_grid(1.0, 8);
    RandomStream s({56, 0, 0});
    for (int i = 0; i < 200; ++i) {
      auto e = random_element(params, s, 1 + static_cast<std::size_t>(s.uniform() * 6), true);
      e = e.scaled(1.0 / std::sqrt(cm_norm2(e)));
      CHECK(pvar_exact(cm_path(e, t).component(0), params.r()).value <= 1.0 + 1e-8);
    }
  }
}
