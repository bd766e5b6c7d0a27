#include "fbmarea/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbmarea/errors.hpp"
#include "fbmarea/rng.hpp"

namespace fbmarea::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw DegenerateSampleError("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw DegenerateSampleError("variance needs at least two samples");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

MeanError mean_and_error(std::span<const double> x) {
  const double m = mean(x);
  if (x.size() < 2) return {m, std::numeric_limits<double>::infinity()};
  return {m, std::sqrt(variance(x) / static_cast<double>(x.size()))};
}

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-17 * std::max(sum, 1e-300)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double n_eff) {
  const double s = std::sqrt(n_eff);
  return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DegenerateSampleError("KS test needs nonempty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return {d, ks_p_value(d, nx * ny / (nx + ny))};
}

KsResult ks_normal(std::span<const double> x, double mu, double sigma) {
  if (x.empty()) throw DegenerateSampleError("KS test needs a nonempty sample");
  if (!(sigma > 0.0)) throw DomainError("KS reference sigma must be positive");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double cdf = normal_cdf((v[i] - mu) / sigma);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n)};
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DegenerateSampleError("line fit needs two or more paired points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateSampleError("line fit with constant abscissa");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double log_mean_exp(std::span<const double> v) {
  if (v.empty()) throw DegenerateSampleError("log_mean_exp of empty sample");
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s / static_cast<double>(v.size()));
}

JackknifeResult jackknife(std::span<const double> x, std::size_t groups,
                          const std::function<double(std::span<const double>)>& statistic) {
  if (groups < 2 || x.size() < groups) {
    throw DegenerateSampleError("jackknife needs at least two nonempty groups");
  }
  const double full = statistic(x);
  const std::size_t n = x.size();
  std::vector<double> leave_out(groups);
  std::vector<double> buffer;
  buffer.reserve(n);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t lo = g * n / groups;
    const std::size_t hi = (g + 1) * n / groups;
    buffer.clear();
    buffer.insert(buffer.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(lo));
    buffer.insert(buffer.end(), x.begin() + static_cast<std::ptrdiff_t>(hi), x.end());
    leave_out[g] = statistic(buffer);
  }
  const double gbar = mean(leave_out);
  double s = 0.0;
  for (double v : leave_out) s += (v - gbar) * (v - gbar);
  const double k = static_cast<double>(groups);
  return {full, std::sqrt((k - 1.0) / k * s)};
}

}  // namespace fbmarea::stats
