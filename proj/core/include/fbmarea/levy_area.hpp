#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fbmarea/hurst.hpp"
#include "fbmarea/path.hpp"
#include "fbmarea/pathgen.hpp"

namespace fbmarea {

/// alpha(a, b) = a1 b2 - a2 b1.
inline double rotation_form(const std::array<double, 2>& a, const std::array<double, 2>& b) noexcept {
  return a[0] * b[1] - a[1] * b[0];
}

/// (1/2) sum_k alpha(x_{k-1}, x_k - x_{k-1}): the Levy area at T of the
/// piecewise-linear interpolant, exact for that path.
double levy_area(const GridPath& path);

struct AreaSeries {
  std::vector<unsigned> levels;
  std::vector<double> values;
  double extrapolated = 0.0;  ///< value at the finest level
};

/// A_m at T for the nested dyadic projections of one fine path.
AreaSeries area_series(const GridPath& fine, unsigned level_min, unsigned level_max);

struct AreaConvergenceRow {
  unsigned level = 0;
  double mean_sq_diff = 0.0;  ///< sample mean of |A_m - A_{m_max}|^2
  double std_error = 0.0;
};

struct AreaConvergenceReport {
  std::vector<AreaConvergenceRow> rows;  ///< levels m_min .. m_max - 1
  double log2_slope = 0.0;               ///< fitted slope of log2 mean_sq_diff vs m
  bool strictly_decreasing = false;
  std::vector<AreaSeries> series;        ///< per sample
  SamplerMethod method = SamplerMethod::circulant;
};

struct AreaConvergenceConfig {
  HurstParams params;
  unsigned level_min = 4;
  unsigned level_max = 12;
  std::size_t count = 500;
  std::uint64_t root_seed = 0;
  SamplerMethod method = SamplerMethod::circulant;
};

inline constexpr unsigned kAreaMaxLevel = 14;

AreaConvergenceReport area_convergence(const AreaConvergenceConfig& config, unsigned threads = 0);

}  // namespace fbmarea
