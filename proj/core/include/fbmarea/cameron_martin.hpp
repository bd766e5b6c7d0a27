#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fbmarea/hurst.hpp"
#include "fbmarea/kernel.hpp"
#include "fbmarea/path.hpp"
#include "fbmarea/young.hpp"

namespace fbmarea {

/// One kernel section coeff * R(time, .) e_component.
struct Atom {
  double time = 0.0;
  unsigned component = 0;  ///< 0 or 1
  double coeff = 0.0;
};

/// Element of the two-component Cameron-Martin space kept as a finite
/// combination of kernel sections. Atoms with identical (time, component)
/// are merged by exact time match; the element is immutable.
class CMElement {
 public:
  explicit CMElement(HurstParams params, std::vector<Atom> atoms = {});

  static CMElement section(HurstParams params, double time, unsigned component, double coeff = 1.0);

  const HurstParams& params() const noexcept { return params_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  /// Sub-element carrying only the atoms of one component.
  CMElement component(unsigned c) const;

  CMElement operator+(const CMElement& other) const;
  CMElement operator-(const CMElement& other) const;
  CMElement scaled(double c) const;

 private:
  HurstParams params_;
  std::vector<Atom> atoms_;
};

/// <h, k> = sum c_i d_j R(t_i, s_j) over atoms of matching component.
double cm_inner(const CMElement& h, const CMElement& k);
double cm_norm2(const CMElement& h);

/// h(s) per component: sum c_i R(t_i, s).
std::array<double, 2> cm_eval(const CMElement& h, double s);

/// h evaluated on a grid, as a two-component path.
GridPath cm_path(const CMElement& h, std::span<const double> times);

/// S_Pi = sum_i alpha(c_i) [R(t_i, .) - R(t_{i-1}, .)] e_component, the
/// discrete form of int alpha(t) R(dt, .).
CMElement cm_integral(const HurstParams& params, std::span<const double> times,
                      std::span<const double> alpha, unsigned component,
                      Rule rule = Rule::midpoint);

/// Gram norm of cm_integral.
double cm_integral_norm(const HurstParams& params, std::span<const double> times,
                        std::span<const double> alpha, Rule rule = Rule::midpoint);

/// Coefficients of S_Pi on the grid atoms R(t_k, .), k = 0..n-1.
std::vector<double> cm_integral_coefficients(std::span<const double> alpha,
                                             Rule rule = Rule::midpoint);

/// Gram matrix G_ij = R(t_i, t_j) of the kernel sections on a fixed grid,
/// for dense coefficient vectors indexed by grid point.
class GridGram {
 public:
  GridGram(const HurstParams& params, std::span<const double> times);

  const HurstParams& params() const noexcept { return params_; }
  std::span<const double> times() const noexcept { return times_; }
  std::size_t size() const noexcept { return times_.size(); }
  const Eigen::MatrixXd& matrix() const noexcept { return gram_; }

  double inner(std::span<const double> a, std::span<const double> b) const;
  /// Evaluations sum_k c_k R(t_k, t_j) at every grid time t_j.
  std::vector<double> evaluate(std::span<const double> coeffs) const;
  /// Evaluation at the last grid time (T when the grid ends at T).
  double evaluate_terminal(std::span<const double> coeffs) const;

  CMElement to_element(std::span<const double> coeffs, unsigned component) const;

 private:
  HurstParams params_;
  std::vector<double> times_;
  Eigen::MatrixXd gram_;
};

}  // namespace fbmarea
