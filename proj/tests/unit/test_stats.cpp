#include <cmath>
#include <vector>

#include "doctest.h"
#include "fbmarea/rng.hpp"
#include "fbmarea/stats.hpp"

using namespace fbmarea;

TEST_CASE("kolmogorov survival function") {
  CHECK(stats::kolmogorov_q(0.0) == 1.0);
  // Q(1.3581) ~ 0.05, Q(1.6276) ~ 0.01
  CHECK(stats::kolmogorov_q(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(stats::kolmogorov_q(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(stats::kolmogorov_q(5.0) < 1e-20);
}

TEST_CASE("two-sample ks separates shifted samples") {
  RandomStream s({3, 0, 0});
  std::vector<double> a(5000), b(5000), c(5000);
  for (auto& v : a) v = s.normal();
  for (auto& v : b) v = s.normal();
  for (auto& v : c) v = s.normal() + 0.2;
  CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
  CHECK(stats::ks_two_sample(a, c).p_value < 1e-6);
  CHECK(stats::ks_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("line fit and log-mean-exp") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto f = stats::fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  const std::vector<double> v{-1000.0, -1000.0};
  CHECK(stats::log_mean_exp(v) == doctest::Approx(-1000.0));
  const std::vector<double> w{0.0, std::log(3.0)};
  CHECK(stats::log_mean_exp(w) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("jackknife of the mean matches the standard error") {
  RandomStream s({4, 0, 0});
  std::vector<double> x(4000);
  for (auto& v : x) v = s.normal();
  const auto jk = stats::jackknife(x, x.size(), [](std::span<const double> d) { return stats::mean(d); });
  CHECK(jk.std_error == doctest::Approx(stats::mean_and_error(x).std_error).epsilon(1e-9));
  const auto grouped = stats::jackknife(x, 20, [](std::span<const double> d) { return stats::mean(d); });
  CHECK(grouped.std_error == doctest::Approx(jk.std_error).epsilon(0.5));
}
