#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fbmarea/errors.hpp"
#include "fbmarea/levy_area.hpp"
#include "fbmarea/young.hpp"

using namespace fbmarea;

TEST_CASE("rotation form") {
  CHECK(rotation_form({1, 0}, {0, 1}) == 1.0);
  CHECK(rotation_form({0.3, -2}, {0.3, -2}) == 0.0);
  CHECK(rotation_form({2, 3}, {4, 5}) == -2.0);
}

TEST_CASE("closed-form areas") {
  const GridPath square({0, 1, 2, 3, 4}, {{0, 1, 1, 0, 0}, {0, 0, 1, 1, 0}});
  CHECK(levy_area(square) == doctest::Approx(1.0).epsilon(1e-12));
  const GridPath segment({0, 1}, {{0, 3}, {0, -2}});
  CHECK(levy_area(segment) == 0.0);

  const std::size_t n = 1u << 12;
  std::vector<double> t(n + 1), x(n + 1), y(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    t[k] = 2.0 * std::numbers::pi * double(k) / double(n);
    x[k] = std::cos(t[k]) - 1.0;
    y[k] = std::sin(t[k]);
  }
  x[n] = 0.0;
  y[n] = 0.0;
  CHECK(std::abs(levy_area(GridPath(t, {x, y})) - std::numbers::pi) < 1e-5);

  const auto g = dyadic_grid(1.0, 6);
  std::vector<double> diag(g.begin(), g.end());
  CHECK(levy_area(GridPath(g, {diag, diag})) == 0.0);
  CHECK_THROWS_AS(levy_area(GridPath(g, {diag})), DimensionError);
}

TEST_CASE("area symmetries") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 8, SamplerMethod::circulant);
  for (int i = 0; i < 20; ++i) {
    const auto p = sampler.sample(41, i);
    const double a = levy_area(p);
    const std::vector<double> x(p.component(0).begin(), p.component(0).end());
    const std::vector<double> y(p.component(1).begin(), p.component(1).end());
    const std::vector<double> t(p.times().begin(), p.times().end());
    CHECK(levy_area(GridPath(t, {y, x})) == doctest::Approx(-a).epsilon(1e-13));
    const double th = 0.7;
    std::vector<double> rx(x.size()), ry(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      rx[k] = std::cos(th) * x[k] - std::sin(th) * y[k];
      ry[k] = std::sin(th) * x[k] + std::cos(th) * y[k];
    }
    CHECK(levy_area(GridPath(t, {rx, ry})) == doctest::Approx(a).epsilon(1e-10).scale(1.0));
    CHECK(levy_area(p.scaled(-3.0)) == doctest::Approx(9.0 * a).epsilon(1e-12));
    const double via_young = 0.5 * (young_integral(p.component(0), p.component(1)) -
                                     young_integral(p.component(1), p.component(0)));
    CHECK(std::abs(via_young - a) < 1e-12);
  }
}

TEST_CASE("area series and convergence") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 10, SamplerMethod::circulant);
  const auto s = area_series(sampler.sample(2, 0), 4, 10);
  CHECK(s.levels.size() == 7);
  CHECK(s.extrapolated == s.values.back());

  AreaConvergenceConfig cfg{params, 4, 12, 500, 17, SamplerMethod::circulant};
  const auto rep = area_convergence(cfg, 0);
  CHECK(rep.rows.size() == 8);
  CHECK(rep.strictly_decreasing);
  CHECK(rep.log2_slope < 0.0);

  cfg.level_max = 15;
  CHECK_THROWS_AS(area_convergence(cfg), Error);
}
