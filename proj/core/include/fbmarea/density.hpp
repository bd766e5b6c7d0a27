#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fbmarea/hurst.hpp"
#include "fbmarea/pathgen.hpp"

namespace fbmarea {

/// (B^1_T, B^2_T, A_T)
using YSample = std::array<double, 3>;

struct YSampleConfig {
  HurstParams params;
  unsigned level = 8;
  std::size_t count = 10000;
  std::uint64_t root_seed = 0;
  SamplerMethod method = SamplerMethod::circulant;
};

std::vector<YSample> sample_Y(const YSampleConfig& config, unsigned threads = 0);

/// Uniform axis of n cells; values live at the cell centres.
struct Axis {
  double lo = 0.0;
  double step = 1.0;
  std::size_t n = 1;

  double center(std::size_t i) const noexcept { return lo + (static_cast<double>(i) + 0.5) * step; }
  double hi() const noexcept { return lo + static_cast<double>(n) * step; }
};

struct DensityEstimate {
  std::array<Axis, 3> axes;
  std::array<double, 3> bandwidth{};
  std::vector<double> values;  ///< index (ix * ny + iy) * nz + iz
  std::size_t count = 0;

  double at(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return values[(ix * axes[1].n + iy) * axes[2].n + iz];
  }
  /// Midpoint-rule integral over the box.
  double mass() const;
};

/// Per-axis mean +- 4 sample standard deviations, n cells per axis.
std::array<Axis, 3> default_box(std::span<const YSample> samples, std::size_t n);

/// Scott's rule sigma_d N^{-1/(d+4)} per axis. Throws DegenerateSampleError
/// if an axis has zero variance.
std::array<double, 3> scott_bandwidth(std::span<const YSample> samples);

/// Product-Gaussian KDE on the cell centres of `axes`. Needs N >= 100.
DensityEstimate kde(std::span<const YSample> samples, const std::array<Axis, 3>& axes,
                    std::optional<std::array<double, 3>> bandwidth = std::nullopt,
                    unsigned threads = 0);

struct Marginal {
  Axis axis;
  double bandwidth = 0.0;
  std::vector<double> values;
};

/// 1D Gaussian KDE of one coordinate; Scott bandwidth sigma N^{-1/5} unless given.
Marginal kde_marginal(std::span<const double> x, std::size_t n,
                      std::optional<double> bandwidth = std::nullopt);
/// Density estimate at a single point.
double kde_point(std::span<const double> x, double at, double bandwidth);

struct SmoothnessReport {
  bool all_finite = false;
  std::array<double, 3> max_first{};   ///< max |d f / d x_d|
  std::array<double, 3> max_second{};  ///< max |d^2 f / d x_d^2|
  double max_mixed = 0.0;              ///< max |d^2 f / dx dy|
  double mixed_asymmetry = 0.0;        ///< max gap between the two orders / max_mixed
  std::size_t cells = 0;               ///< interior cells probed
  std::size_t high_variance_cells = 0;
  double max_relative_sd = 0.0;
};

/// Central-difference first and second partials on interior cells, plus a
/// Monte Carlo variance model that flags cells with relative sd > 0.1 among
/// cells holding at least 10% of the peak density.
SmoothnessReport smoothness_probe(const DensityEstimate& estimate);

}  // namespace fbmarea
