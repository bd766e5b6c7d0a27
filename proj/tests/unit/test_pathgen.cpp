#include <cmath>
#include <vector>

#include "doctest.h"
#include "fbmarea/errors.hpp"
#include "fbmarea/kernel.hpp"
#include "fbmarea/pathgen.hpp"
#include "fbmarea/stats.hpp"

using namespace fbmarea;

TEST_CASE("grid paths validate their invariants") {
  CHECK_THROWS_AS(GridPath({0.0}, {{0.0}}), Error);
  CHECK_THROWS_AS(GridPath({0.1, 1.0}, {{0.0, 1.0}}), Error);
  CHECK_THROWS_AS(GridPath({0.0, 0.5, 0.5}, {{0.0, 1.0, 2.0}}), Error);
  CHECK_THROWS_AS(GridPath({0.0, 1.0}, {{0.0, 1.0, 2.0}}), Error);
  CHECK_THROWS_AS(GridPath({0.0, 1.0}, {{0.5, 1.0}}), Error);
  const GridPath p({0.0, 0.5, 1.0}, {{0.0, 1.0, 0.0}});
  CHECK(p.interpolate(0, 0.25) == doctest::Approx(0.5));
  CHECK(p.terminal(0) == 0.0);
}

TEST_CASE("dyadic grid and projection") {
  const auto g = dyadic_grid(1.0, 10);
  CHECK(g.size() == 1025);
  CHECK(g[512] == 0.5);
  CHECK(g.back() == 1.0);
  std::vector<double> lin(g.begin(), g.end());
  const GridPath line(g, {lin});
  const auto p3 = dyadic_project(line, 3);
  CHECK(p3.size() == 9);
  for (std::size_t k = 0; k < p3.size(); ++k) CHECK(p3.value(0, k) == p3.times()[k]);
  CHECK(same_grid(dyadic_project(p3, 3), p3));
  const auto via = dyadic_project(dyadic_project(line, 6), 3);
  for (std::size_t k = 0; k < 9; ++k) CHECK(via.value(0, k) == p3.value(0, k));
  CHECK(finest_dyadic_level(line) == 10);
  const GridPath odd({0.0, 0.3, 1.0}, {{0.0, 1.0, 2.0}});
  CHECK_THROWS_AS(dyadic_project(odd, 1), GridMismatchError);
}

TEST_CASE("fgn autocovariance") {
  CHECK(fgn_autocovariance(0.4, 1.0, 0) == doctest::Approx(1.0));
  CHECK(fgn_autocovariance(0.4, 1.0, 1) == doctest::Approx(0.5 * (std::pow(2.0, 0.8) - 2.0)));
  CHECK(fgn_autocovariance(0.4, 1.0, 1) < 0.0);
  CHECK(fgn_autocovariance(0.5, 0.25, 3) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("terminal variance and independence of components") {
  const HurstParams params(0.4, 1.0);
  const auto batch = sample_fbm({params, 8, 10000, 2024, SamplerMethod::circulant});
  CHECK_FALSE(batch.fallback);
  std::vector<double> b1, b2, prod;
  for (const auto& p : batch.paths) {
    b1.push_back(p.terminal(0));
    b2.push_back(p.terminal(1));
    prod.push_back(p.terminal(0) * p.terminal(1));
  }
  std::vector<double> sq;
  for (double v : b1) sq.push_back(v * v);
  const auto v = stats::mean_and_error(sq);
  CHECK(std::abs(v.mean - 1.0) < 3.0 * v.std_error);
  const auto c = stats::mean_and_error(prod);
  CHECK(std::abs(c.mean) < 3.0 * c.std_error);
}

TEST_CASE("cholesky covariance at an interior pair") {
  const HurstParams params(0.35, 1.0);
  const FbmSampler sampler(params, 2, SamplerMethod::cholesky);
  CHECK(sampler.method() == SamplerMethod::cholesky);
  std::vector<double> prod(100000);
  for (std::size_t i = 0; i < prod.size(); ++i) {
    const auto p = sampler.sample(77, i);
    prod[i] = p.value(0, 1) * p.value(0, 3);
  }
  const auto m = stats::mean_and_error(prod);
  const double ref = CovKernel(params).eval_R(0.25, 0.75);
  CHECK(std::abs(m.mean - ref) < 3.0 * m.std_error);
}

TEST_CASE("circulant and cholesky agree in law") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler chol(params, 7, SamplerMethod::cholesky), circ(params, 7, SamplerMethod::circulant);
  CHECK(circ.min_relative_eigenvalue() >= -1e-10);
  std::vector<double> a(5000), b(5000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = chol.sample(5, i).value(0, 40);
    b[i] = circ.sample(6, i).value(0, 40);
  }
  CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("batches are deterministic and thread independent") {
  const HurstParams params(0.4, 1.0);
  const SampleBatchConfig cfg{params, 6, 64, 99, SamplerMethod::circulant};
  const auto a = sample_fbm(cfg, 1);
  const auto b = sample_fbm(cfg, 4);
  for (std::size_t i = 0; i < a.paths.size(); ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t k = 0; k < a.paths[i].size(); ++k) CHECK(a.paths[i].value(c, k) == b.paths[i].value(c, k));
    }
  }
  CHECK_THROWS_AS(FbmSampler(params, 0, SamplerMethod::circulant), Error);
}

TEST_CASE("self-similarity") {
  const HurstParams params(0.4, 1.0);
  const auto same = self_similarity_check(params, 6, 10000, 31, 1.0);
  CHECK(same.statistic < 0.03);
  const auto half = self_similarity_check(params, 8, 10000, 32, 0.5);
  CHECK(half.passed);
  const auto wrong = self_similarity_check(params, 8, 10000, 33, 0.5, 0.8);
  CHECK(wrong.p_value < 0.01);
  CHECK_THROWS_AS(self_similarity_check(params, 4, 10, 1, 0.3), DomainError);
}

TEST_CASE("holder proxy tracks the regularity threshold") {
  const HurstParams params(0.4, 1.0);
  const FbmSampler sampler(params, 12, SamplerMethod::circulant);
  double grow_lo = 0.0, grow_hi = 0.0;
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    const auto fine = sampler.sample(8, i);
    const auto coarse = dyadic_project(fine, 6);
    grow_lo += holder_proxy(fine, 0, 0.2) / holder_proxy(coarse, 0, 0.2) / n;
    grow_hi += holder_proxy(fine, 0, 0.6) / holder_proxy(coarse, 0, 0.6) / n;
  }
  CHECK(grow_lo < 1.5);
  CHECK(grow_hi > 2.0);
}
