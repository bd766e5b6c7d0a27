#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fbmarea/path.hpp"

namespace fbmarea {

/// A subpartition of a grid: strictly increasing grid indices that always
/// contain the first and the last index.
struct Partition {
  std::vector<std::size_t> indices;
};

struct PVarResult {
  double value = 0.0;      ///< the p-variation (not its p-th power)
  Partition partition;     ///< a maximising subpartition
};

/// Exact discrete p-variation by O(n^2) dynamic programming over
/// breakpoints. For a piecewise-linear path sampled at its kinks this is
/// the exact p-variation norm. Ties resolve toward the earlier index.
PVarResult pvar_exact(std::span<const double> values, double p);

/// Same, for a multi-component path with Euclidean increment norm.
PVarResult pvar_exact(const GridPath& path, double p);

/// Exhaustive search over all 2^(n-2) subpartitions; n <= 18.
double pvar_bruteforce(std::span<const double> values, double p);

inline constexpr std::size_t kBruteforceMaxPoints = 18;
inline constexpr std::size_t kExact2DMaxPoints = 9;

enum class Variation2DMode {
  exact,      ///< exhaustive over both axes, <= 9 points per axis
  grid_only,  ///< the full grid partition only (a lower bound)
  heuristic,  ///< alternating exact 1D optimisation, started from the full grid
};

/// Increment of a 2D function over the coarse cell
/// (s_{i0}, s_{i1}] x (t_{j0}, t_{j1}] given by grid indices.
using RectIncrement =
    std::function<double(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1)>;

struct PVar2DResult {
  double value = 0.0;
  Partition rows;
  Partition cols;
  Variation2DMode mode = Variation2DMode::exact;
};

/// sup over subpartition pairs of (sum |Delta_ij f|^p)^(1/p), for a
/// function on an n_rows x n_cols grid whose cell increments are supplied.
PVar2DResult pvar2d(std::size_t n_rows, std::size_t n_cols, const RectIncrement& increment,
                    double p, Variation2DMode mode);

/// Convenience overload for grid values f(s_i, t_j).
PVar2DResult pvar2d(const Eigen::MatrixXd& f, double p, Variation2DMode mode);

/// Generic best-partition DP: maximises sum of cost(i, j) over consecutive
/// breakpoints i < j from index 0 to n-1. Returns the optimal sum.
double best_partition_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& cost,
                          Partition* argmax = nullptr);

}  // namespace fbmarea
