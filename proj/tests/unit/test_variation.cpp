#include <cmath>
#include <vector>

#include "doctest.h"
#include "fbmarea/errors.hpp"
#include "fbmarea/pathgen.hpp"
#include "fbmarea/rng.hpp"
#include "fbmarea/variation.hpp"

using namespace fbmarea;

TEST_CASE("p-variation examples") {
  const std::vector<double> mono{0, 0.2, 0.5, 1.0};
  CHECK(pvar_exact(mono, 3.0).value == doctest::Approx(1.0));
  const std::vector<double> tent{0, 1, 0};
  CHECK(pvar_exact(tent, 2.0).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(pvar_bruteforce(tent, 2.0) == doctest::Approx(std::sqrt(2.0)));
  const std::vector<double> two{0, -0.7};
  CHECK(pvar_bruteforce(two, 2.5) == doctest::Approx(0.7));
  std::vector<double> big(19, 0.0);
  CHECK_THROWS_AS(pvar_bruteforce(big, 2.0), SizeError);
  CHECK_THROWS_AS(pvar_exact(tent, 0.5), DomainError);

  const auto r = pvar_exact(tent, 2.0);
  CHECK(r.partition.indices.front() == 0);
  CHECK(r.partition.indices.back() == 2);
}

TEST_CASE("dp matches brute force, p = 1 is total variation, scaling, monotone in p") {
  RandomStream s({21, 0, 0});
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(s.uniform() * 15);
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) v[i] = v[i - 1] + s.normal();
    const double p = 1.0 + 3.0 * s.uniform();
    const double dp = pvar_exact(v, p).value;
    CHECK(dp == doctest::Approx(pvar_bruteforce(v, p)).epsilon(1e-12));
    double tv = 0.0;
    for (std::size_t i = 1; i < n; ++i) tv += std::abs(v[i] - v[i - 1]);
    CHECK(pvar_exact(v, 1.0).value == doctest::Approx(tv).epsilon(1e-12));
    std::vector<double> scaled(v);
    for (auto& x : scaled) x *= -2.5;
    CHECK(pvar_exact(scaled, p).value == doctest::Approx(2.5 * dp).epsilon(1e-12));
    CHECK(pvar_exact(v, p + 0.5).value <= dp * (1 + 1e-12));
  }
}

TEST_CASE("dyadic projection bound") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 9, SamplerMethod::circulant);
  const double p = params.default_p();
  for (int i = 0; i < 30; ++i) {
    const auto fine = sampler.sample(3, i);
    const double full = pvar_exact(fine.component(0), p).value;
    for (unsigned m : {3u, 5u, 7u}) {
      const auto proj = dyadic_project(fine, m);
      CHECK(pvar_exact(proj.component(0), p).value <= std::pow(3.0, p - 1.0) * full);
    }
  }
}

TEST_CASE("2d variation") {
  RandomStream s({22, 0, 0});
  std::vector<double> g(7, 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) g[i] = g[i - 1] + s.normal();
  const double p = 2.5;
  Eigen::MatrixXd f(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) f(i, j) = g[i] * g[j];
  const double pg = pvar_exact(g, p).value;
  const auto ex = pvar2d(f, p, Variation2DMode::exact);
  CHECK(ex.value <= pg * pg * (1 + 1e-12));
  CHECK(ex.value >= pvar2d(f, p, Variation2DMode::heuristic).value - 1e-12);
  CHECK(pvar2d(f, p, Variation2DMode::heuristic).value >= pvar2d(f, p, Variation2DMode::grid_only).value - 1e-12);
  // cross-section bound for f(0, .) = 0
  for (int i = 1; i < 7; ++i) {
    std::vector<double> row(7);
    for (int j = 0; j < 7; ++j) row[j] = f(i, j);
    CHECK(pvar_exact(row, p).value <= ex.value * (1 + 1e-12));
  }
  CHECK(pvar2d(Eigen::MatrixXd::Zero(5, 5), p, Variation2DMode::exact).value == 0.0);
  CHECK_THROWS_AS(pvar2d(Eigen::MatrixXd::Zero(10, 4), p, Variation2DMode::exact), SizeError);
}

TEST_CASE("2d projection bound on a small grid") {
  RandomStream s({23, 0, 0});
  const double p = 2.2;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(9, 9);
    for (int i = 1; i < 9; ++i)
      for (int j = 1; j < 9; ++j) f(i, j) = f(i - 1, j) + f(i, j - 1) - f(i - 1, j - 1) + s.normal();
    Eigen::MatrixXd proj(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) proj(i, j) = f(2 * i, 2 * j);
    CHECK(pvar2d(proj, p, Variation2DMode::exact).value <=
          std::pow(9.0, p - 1.0) * pvar2d(f, p, Variation2DMode::exact).value);
  }
}
