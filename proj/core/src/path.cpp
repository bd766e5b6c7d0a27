#include "fbmarea/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbmarea/errors.hpp"

namespace fbmarea {

GridPath::GridPath(std::vector<double> times, std::vector<std::vector<double>> components)
    : times_(std::move(times)), values_(std::move(components)) {
  if (times_.size() < 2) throw DomainError("a grid path needs at least two times");
  if (times_.front() != 0.0) throw DomainError("grid must start at t = 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) throw DomainError("grid times must be strictly increasing");
  }
  if (values_.empty()) throw DimensionError("a grid path needs at least one component");
  for (const auto& v : values_) {
    if (v.size() != times_.size()) {
      throw DimensionError("component length " + std::to_string(v.size()) +
                           " does not match grid length " + std::to_string(times_.size()));
    }
    if (v.front() != 0.0) throw DomainError("paths must start at the origin");
  }
}

std::span<const double> GridPath::component(std::size_t c) const {
  if (c >= values_.size()) throw DimensionError("component index out of range");
  return values_[c];
}

double GridPath::interpolate(std::size_t c, double t) const {
  if (c >= values_.size()) throw DimensionError("component index out of range");
  if (t < 0.0 || t > times_.back()) throw DomainError("interpolation time outside [0,T]");
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.end()) return values_[c].back();
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  return values_[c][lo] + w * (values_[c][hi] - values_[c][lo]);
}

GridPath GridPath::combine(double c, const GridPath& other, double d) const {
  if (!same_grid(*this, other) || other.dim() != dim()) {
    throw GridMismatchError("combine requires paths on the same grid and dimension");
  }
  auto vals = values_;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    for (std::size_t k = 0; k < vals[i].size(); ++k) {
      vals[i][k] = c * values_[i][k] + d * other.values_[i][k];
    }
  }
  return GridPath(times_, std::move(vals));
}

GridPath GridPath::scaled(double c) const {
  auto vals = values_;
  for (auto& v : vals) {
    for (auto& x : v) x *= c;
  }
  return GridPath(times_, std::move(vals));
}

std::vector<double> dyadic_grid(double horizon, unsigned level) {
  if (level > 30) throw SizeError("dyadic level above 30 is not supported");
  const std::size_t n = std::size_t{1} << level;
  const double scale = std::ldexp(1.0, -static_cast<int>(level));
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = (static_cast<double>(k) * horizon) * scale;
  return t;
}

bool same_grid(const GridPath& a, const GridPath& b) noexcept {
  return std::equal(a.times().begin(), a.times().end(), b.times().begin(), b.times().end());
}

std::vector<std::size_t> locate_subgrid(std::span<const double> fine,
                                        std::span<const double> coarse) {
  std::vector<std::size_t> idx;
  idx.reserve(coarse.size());
  const double tol = 1e-12 * std::max(1.0, std::fabs(fine.back()));
  std::size_t j = 0;
  for (double t : coarse) {
    while (j < fine.size() && fine[j] < t - tol) ++j;
    if (j == fine.size() || std::fabs(fine[j] - t) > tol) {
      throw GridMismatchError("time " + std::to_string(t) + " is not on the source grid");
    }
    idx.push_back(j);
  }
  return idx;
}

GridPath dyadic_project(const GridPath& path, unsigned level) {
  const auto coarse = dyadic_grid(path.horizon(), level);
  const auto idx = locate_subgrid(path.times(), coarse);
  std::vector<std::vector<double>> vals(path.dim(), std::vector<double>(coarse.size()));
  for (std::size_t c = 0; c < path.dim(); ++c) {
    for (std::size_t k = 0; k < idx.size(); ++k) vals[c][k] = path.value(c, idx[k]);
  }
  return GridPath(coarse, std::move(vals));
}

int finest_dyadic_level(const GridPath& path) {
  int best = -1;
  for (unsigned m = 0; m <= 30; ++m) {
    if ((std::size_t{1} << m) + 1 > path.size()) break;
    try {
      locate_subgrid(path.times(), dyadic_grid(path.horizon(), m));
      best = static_cast<int>(m);
    } catch (const GridMismatchError&) {
      break;
    }
  }
  return best;
}

}  // namespace fbmarea
