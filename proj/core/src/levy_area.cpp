#include "fbmarea/levy_area.hpp"

#include <cmath>

#include "fbmarea/errors.hpp"
#include "fbmarea/parallel.hpp"
#include "fbmarea/stats.hpp"

namespace fbmarea {

double levy_area(const GridPath& path) {
  if (path.dim() != 2) throw DimensionError("Levy area needs a two-component path");
  const auto x = path.component(0);
  const auto y = path.component(1);
  double s = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    s += rotation_form({x[k - 1], y[k - 1]}, {x[k] - x[k - 1], y[k] - y[k - 1]});
  }
  return 0.5 * s;
}

AreaSeries area_series(const GridPath& fine, unsigned level_min, unsigned level_max) {
  if (level_min > level_max) throw DomainError("level_min must not exceed level_max");
  AreaSeries out;
  for (unsigned m = level_min; m <= level_max; ++m) {
    out.levels.push_back(m);
    out.values.push_back(levy_area(dyadic_project(fine, m)));
  }
  out.extrapolated = out.values.back();
  return out;
}

AreaConvergenceReport area_convergence(const AreaConvergenceConfig& config, unsigned threads) {
  if (!(config.level_min < config.level_max)) throw DomainError("need level_min < level_max");
  if (config.level_max > kAreaMaxLevel) throw SizeError("level_max above 14 is not supported");
  if (config.count < 1) throw DomainError("sample count must be >= 1");

  FbmSampler sampler(config.params, config.level_max, config.method);
  AreaConvergenceReport rep;
  rep.method = sampler.method();
  rep.series.resize(config.count);
  parallel_for(config.count, threads, [&](std::size_t i) {
    rep.series[i] = area_series(sampler.sample(config.root_seed, i), config.level_min,
                                config.level_max);
  });

  std::vector<double> xs, ys;
  std::vector<double> diffs(config.count);
  const std::size_t n_levels = config.level_max - config.level_min;
  for (std::size_t l = 0; l < n_levels; ++l) {
    for (std::size_t i = 0; i < config.count; ++i) {
      const double d = rep.series[i].values[l] - rep.series[i].extrapolated;
      diffs[i] = d * d;
    }
    const auto me = stats::mean_and_error(diffs);
    rep.rows.push_back({config.level_min + static_cast<unsigned>(l), me.mean, me.std_error});
    if (me.mean > 0.0) {
      xs.push_back(static_cast<double>(config.level_min + l));
      ys.push_back(std::log2(me.mean));
    }
  }
  rep.strictly_decreasing = true;
  for (std::size_t l = 1; l < rep.rows.size(); ++l) {
    if (!(rep.rows[l].mean_sq_diff < rep.rows[l - 1].mean_sq_diff)) rep.strictly_decreasing = false;
  }
  rep.log2_slope = xs.size() >= 2 ? stats::fit_line(xs, ys).slope : 0.0;
  return rep;
}

}  // namespace fbmarea
