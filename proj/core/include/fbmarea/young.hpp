#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fbmarea/path.hpp"

namespace fbmarea {

/// Evaluation point inside each grid interval.
enum class Rule {
  left,      ///< f(t_{i-1})
  midpoint,  ///< f at the interval midpoint under linear interpolation
};

/// Riemann-Stieltjes sum of f against g over the full shared grid.
/// With the midpoint rule and piecewise-linear f, g this is the trapezoid sum.
double young_integral(std::span<const double> f, std::span<const double> g,
                      Rule rule = Rule::midpoint);

/// Grid-checked form on path components. Throws GridMismatchError.
double young_integral(const GridPath& f, std::size_t f_component, const GridPath& g,
                      std::size_t g_component, Rule rule = Rule::midpoint);

/// Increment of the integrator over (a, b] x (c, d].
using RectMeasure = std::function<double(double a, double b, double c, double d)>;

/// sum_ij f(c_i, d_j) dG((s_{i-1}, s_i] x (t_{j-1}, t_j]) where f holds the
/// grid values f(s_i, t_j). The midpoint rule averages the four corners,
/// which is the cell-center value of the bilinear interpolant.
double young_integral_2d(const Eigen::MatrixXd& f, std::span<const double> s_grid,
                         std::span<const double> t_grid, const RectMeasure& dG,
                         Rule rule = Rule::midpoint);

/// Integrals on the nested dyadic projections of f and g at levels
/// level_min .. finest level of the shared grid.
std::vector<double> young_refinement(const GridPath& f, std::size_t f_component, const GridPath& g,
                                     std::size_t g_component, unsigned level_min,
                                     Rule rule = Rule::midpoint);

}  // namespace fbmarea
