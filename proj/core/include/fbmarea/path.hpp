#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fbmarea {

/// A path sampled on a finite time grid, read as the piecewise-linear
/// interpolant of its samples. Immutable after construction.
///
/// Invariants: times strictly increasing from 0; every component has one
/// value per time; every component starts at the origin.
class GridPath {
 public:
  GridPath(std::vector<double> times, std::vector<std::vector<double>> components);

  std::size_t size() const noexcept { return times_.size(); }
  std::size_t dim() const noexcept { return values_.size(); }
  double horizon() const noexcept { return times_.back(); }

  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> component(std::size_t c) const;
  double value(std::size_t c, std::size_t k) const { return values_[c][k]; }
  double terminal(std::size_t c) const { return values_[c].back(); }

  /// Linear interpolation of component c at time t in [0, T].
  double interpolate(std::size_t c, double t) const;

  /// c * this + d * other on the same grid. Throws GridMismatchError.
  GridPath combine(double c, const GridPath& other, double d) const;
  GridPath scaled(double c) const;

 private:
  std::vector<double> times_;
  std::vector<std::vector<double>> values_;
};

/// D_m = {k T / 2^m}, each point computed as (k*T)/2^m.
std::vector<double> dyadic_grid(double horizon, unsigned level);

/// True when both paths have bitwise-identical time grids.
bool same_grid(const GridPath& a, const GridPath& b) noexcept;

/// Piecewise-linear projection pi_m: the path on D_m agreeing with the
/// input at the points of D_m. Throws GridMismatchError if D_m is not a
/// subset of the input grid.
GridPath dyadic_project(const GridPath& path, unsigned level);

/// Indices of `coarse` inside `fine` (exact match up to 1e-12*T).
/// Throws GridMismatchError when a point is missing.
std::vector<std::size_t> locate_subgrid(std::span<const double> fine,
                                        std::span<const double> coarse);

/// Largest m such that D_m is contained in the grid of the path, or -1.
int finest_dyadic_level(const GridPath& path);

}  // namespace fbmarea
