#include "fbmarea/young.hpp"

#include "fbmarea/errors.hpp"

namespace fbmarea {

double young_integral(std::span<const double> f, std::span<const double> g, Rule rule) {
  if (f.size() != g.size()) throw GridMismatchError("integrand and integrator have different grids");
  double s = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double fc = rule == Rule::left ? f[i - 1] : 0.5 * (f[i - 1] + f[i]);
    s += fc * (g[i] - g[i - 1]);
  }
  return s;
}

double young_integral(const GridPath& f, std::size_t f_component, const GridPath& g,
                      std::size_t g_component, Rule rule) {
  if (!same_grid(f, g)) throw GridMismatchError("integrand and integrator have different grids");
  return young_integral(f.component(f_component), g.component(g_component), rule);
}

double young_integral_2d(const Eigen::MatrixXd& f, std::span<const double> s_grid,
                         std::span<const double> t_grid, const RectMeasure& dG, Rule rule) {
  if (static_cast<std::size_t>(f.rows()) != s_grid.size() ||
      static_cast<std::size_t>(f.cols()) != t_grid.size()) {
    throw GridMismatchError("grid function shape does not match the grids");
  }
  double total = 0.0;
  for (Eigen::Index i = 1; i < f.rows(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    for (Eigen::Index j = 1; j < f.cols(); ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const double fc = rule == Rule::left
                            ? f(i - 1, j - 1)
                            : 0.25 * (f(i - 1, j - 1) + f(i - 1, j) + f(i, j - 1) + f(i, j));
      total += fc * dG(s_grid[iu - 1], s_grid[iu], t_grid[ju - 1], t_grid[ju]);
    }
  }
  return total;
}

std::vector<double> young_refinement(const GridPath& f, std::size_t f_component, const GridPath& g,
                                     std::size_t g_component, unsigned level_min, Rule rule) {
  if (!same_grid(f, g)) throw GridMismatchError("integrand and integrator have different grids");
  const int finest = finest_dyadic_level(f);
  if (finest < static_cast<int>(level_min)) {
    throw GridMismatchError("grid is coarser than the requested minimum level");
  }
  std::vector<double> out;
  for (unsigned m = level_min; m <= static_cast<unsigned>(finest); ++m) {
    const GridPath fm = dyadic_project(f, m);
    const GridPath gm = dyadic_project(g, m);
    out.push_back(young_integral(fm.component(f_component), gm.component(g_component), rule));
  }
  return out;
}

}  // namespace fbmarea
