#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fbmarea::stats {

struct MeanError {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and its standard error (sample sd / sqrt(n)).
MeanError mean_and_error(std::span<const double> x);
double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Kolmogorov survival function Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda);

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
/// One-sample test against N(mu, sigma^2).
KsResult ks_normal(std::span<const double> x, double mu, double sigma);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// log(mean(exp(v))) without overflow or underflow.
double log_mean_exp(std::span<const double> v);

struct JackknifeResult {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Delete-one-group jackknife of `statistic` using `groups` contiguous
/// blocks of the data.
JackknifeResult jackknife(std::span<const double> x, std::size_t groups,
                          const std::function<double(std::span<const double>)>& statistic);

}  // namespace fbmarea::stats
