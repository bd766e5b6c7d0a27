#include "fbmarea/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fbmarea/errors.hpp"
#include "fbmarea/levy_area.hpp"
#include "fbmarea/parallel.hpp"
#include "fbmarea/stats.hpp"

namespace fbmarea {
namespace {

constexpr std::size_t kMinKdeSamples = 100;

std::array<std::vector<double>, 3> columns(std::span<const YSample> samples) {
  std::array<std::vector<double>, 3> cols;
  for (auto& c : cols) c.reserve(samples.size());
  for (const auto& s : samples) {
    for (std::size_t d = 0; d < 3; ++d) cols[d].push_back(s[d]);
  }
  return cols;
}

void gaussian_weights(const Axis& axis, double x, double h, std::vector<double>& out) {
  const double norm = 1.0 / (h * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < axis.n; ++i) {
    const double z = (axis.center(i) - x) / h;
    out[i] = norm * std::exp(-0.5 * z * z);
  }
}

}  // namespace

std::vector<YSample> sample_Y(const YSampleConfig& config, unsigned threads) {
  const FbmSampler sampler(config.params, config.level, config.method, 2);
  std::vector<YSample> out(config.count);
  parallel_for(config.count, threads, [&](std::size_t i) {
    const GridPath path = sampler.sample(config.root_seed, i);
    out[i] = {path.terminal(0), path.terminal(1), levy_area(path)};
  });
  return out;
}

double DensityEstimate::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * axes[0].step * axes[1].step * axes[2].step;
}

std::array<double, 3> scott_bandwidth(std::span<const YSample> samples) {
  if (samples.size() < 2) throw SizeError("bandwidth needs at least two samples");
  const auto cols = columns(samples);
  const double factor = std::pow(static_cast<double>(samples.size()), -1.0 / 7.0);
  std::array<double, 3> h{};
  for (std::size_t d = 0; d < 3; ++d) {
    const double sd = std::sqrt(stats::variance(cols[d]));
    if (!(sd > 0.0)) throw DegenerateSampleError("sample has zero variance along an axis");
    h[d] = sd * factor;
  }
  return h;
}

std::array<Axis, 3> default_box(std::span<const YSample> samples, std::size_t n) {
  if (n < 1) throw SizeError("grid needs at least one cell per axis");
  if (samples.size() < 2) throw SizeError("box needs at least two samples");
  const auto cols = columns(samples);
  std::array<Axis, 3> axes;
  for (std::size_t d = 0; d < 3; ++d) {
    const double mu = stats::mean(cols[d]);
    const double sd = std::sqrt(stats::variance(cols[d]));
    if (!(sd > 0.0)) throw DegenerateSampleError("sample has zero variance along an axis");
    axes[d] = {mu - 4.0 * sd, 8.0 * sd / static_cast<double>(n), n};
  }
  return axes;
}

DensityEstimate kde(std::span<const YSample> samples, const std::array<Axis, 3>& axes,
                    std::optional<std::array<double, 3>> bandwidth, unsigned threads) {
  if (samples.size() < kMinKdeSamples) throw SizeError("kde needs at least 100 samples");
  const auto h = bandwidth ? *bandwidth : scott_bandwidth(samples);
  for (double v : h) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("bandwidth must be positive");
  }
  DensityEstimate est;
  est.axes = axes;
  est.bandwidth = h;
  est.count = samples.size();
  const std::size_t nx = axes[0].n, ny = axes[1].n, nz = axes[2].n;
  est.values.assign(nx * ny * nz, 0.0);

  // Each x-slab is owned by one worker and sums samples in index order, so
  // the result does not depend on the thread count.
  parallel_for(nx, threads, [&](std::size_t ix) {
    std::vector<double> wy(ny), wz(nz), wx(nx);
    double* slab = est.values.data() + ix * ny * nz;
    for (const auto& s : samples) {
      const double zx = (axes[0].center(ix) - s[0]) / h[0];
      const double w0 = std::exp(-0.5 * zx * zx) / (h[0] * std::sqrt(2.0 * std::numbers::pi));
      if (w0 == 0.0) continue;
      gaussian_weights(axes[1], s[1], h[1], wy);
      gaussian_weights(axes[2], s[2], h[2], wz);
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double a = w0 * wy[iy];
        double* row = slab + iy * nz;
        for (std::size_t iz = 0; iz < nz; ++iz) row[iz] += a * wz[iz];
      }
    }
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (std::size_t k = 0; k < ny * nz; ++k) slab[k] *= inv_n;
  });
  return est;
}

double kde_point(std::span<const double> x, double at, double bandwidth) {
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
  double s = 0.0;
  for (double v : x) {
    const double z = (at - v) / bandwidth;
    s += std::exp(-0.5 * z * z);
  }
  return s / (static_cast<double>(x.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
}

Marginal kde_marginal(std::span<const double> x, std::size_t n, std::optional<double> bandwidth) {
  if (x.size() < kMinKdeSamples) throw SizeError("kde needs at least 100 samples");
  if (n < 1) throw SizeError("grid needs at least one cell");
  const double mu = stats::mean(x);
  const double sd = std::sqrt(stats::variance(x));
  if (!(sd > 0.0)) throw DegenerateSampleError("sample has zero variance");
  Marginal m;
  m.axis = {mu - 4.0 * sd, 8.0 * sd / static_cast<double>(n), n};
  m.bandwidth = bandwidth ? *bandwidth : sd * std::pow(static_cast<double>(x.size()), -0.2);
  m.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.values[i] = kde_point(x, m.axis.center(i), m.bandwidth);
  return m;
}

SmoothnessReport smoothness_probe(const DensityEstimate& est) {
  SmoothnessReport rep;
  rep.all_finite = true;
  const std::size_t nx = est.axes[0].n, ny = est.axes[1].n, nz = est.axes[2].n;
  const double hx = est.axes[0].step, hy = est.axes[1].step, hz = est.axes[2].step;
  const std::array<double, 3> step{hx, hy, hz};

  double peak = 0.0;
  for (double v : est.values) {
    if (!std::isfinite(v)) rep.all_finite = false;
    peak = std::max(peak, v);
  }
  double kernel_volume = 1.0;
  for (double h : est.bandwidth) kernel_volume *= 2.0 * std::sqrt(std::numbers::pi) * h;
  for (double v : est.values) {
    if (v <= 0.0 || v < 0.1 * peak) continue;
    const double rel_sd = std::sqrt(1.0 / (static_cast<double>(est.count) * v * kernel_volume));
    rep.max_relative_sd = std::max(rep.max_relative_sd, rel_sd);
    if (rel_sd > 0.1) ++rep.high_variance_cells;
  }

  if (nx < 3 || ny < 3 || nz < 3) return rep;
  const auto f = [&](std::size_t i, std::size_t j, std::size_t k) { return est.at(i, j, k); };
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      for (std::size_t k = 1; k + 1 < nz; ++k) {
        ++rep.cells;
        const double c = f(i, j, k);
        const std::array<std::array<double, 2>, 3> nb{{{f(i - 1, j, k), f(i + 1, j, k)},
                                                       {f(i, j - 1, k), f(i, j + 1, k)},
                                                       {f(i, j, k - 1), f(i, j, k + 1)}}};
        for (std::size_t d = 0; d < 3; ++d) {
          const double d1 = (nb[d][1] - nb[d][0]) / (2.0 * step[d]);
          const double d2 = (nb[d][1] - 2.0 * c + nb[d][0]) / (step[d] * step[d]);
          if (!std::isfinite(d1) || !std::isfinite(d2)) rep.all_finite = false;
          rep.max_first[d] = std::max(rep.max_first[d], std::abs(d1));
          rep.max_second[d] = std::max(rep.max_second[d], std::abs(d2));
        }
        // x-difference of y-differences versus y-difference of x-differences.
        const double dy_p = (f(i + 1, j + 1, k) - f(i + 1, j - 1, k)) / (2.0 * hy);
        const double dy_m = (f(i - 1, j + 1, k) - f(i - 1, j - 1, k)) / (2.0 * hy);
        const double xy = (dy_p - dy_m) / (2.0 * hx);
        const double dx_p = (f(i + 1, j + 1, k) - f(i - 1, j + 1, k)) / (2.0 * hx);
        const double dx_m = (f(i + 1, j - 1, k) - f(i - 1, j - 1, k)) / (2.0 * hx);
        const double yx = (dx_p - dx_m) / (2.0 * hy);
        if (!std::isfinite(xy) || !std::isfinite(yx)) rep.all_finite = false;
        rep.max_mixed = std::max(rep.max_mixed, std::abs(xy));
        rep.mixed_asymmetry = std::max(rep.mixed_asymmetry, std::abs(xy - yx));
      }
    }
  }
  // relative to the largest mixed partial on the grid
  if (rep.max_mixed > 0.0) rep.mixed_asymmetry /= rep.max_mixed;
  return rep;
}

}  // namespace fbmarea
