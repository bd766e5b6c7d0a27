#include "fbmarea/cameron_martin.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "fbmarea/errors.hpp"

namespace fbmarea {
namespace {

void check_same_kernel(const CMElement& h, const CMElement& k) {
  if (!(h.params() == k.params())) {
    throw KernelMismatchError("Cameron-Martin elements built from different kernels");
  }
}

std::vector<Atom> consolidate(std::vector<Atom> atoms, double horizon) {
  for (const auto& a : atoms) {
    if (a.component > 1) throw DimensionError("atom component must be 0 or 1");
    if (!(a.time >= 0.0 && a.time <= horizon)) throw DomainError("atom time outside [0, T]");
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) {
    return std::tie(x.component, x.time) < std::tie(y.component, y.time);
  });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().component == a.component && merged.back().time == a.time) {
      merged.back().coeff += a.coeff;
    } else {
      merged.push_back(a);
    }
  }
  std::erase_if(merged, [](const Atom& a) { return a.coeff == 0.0; });
  return merged;
}

}  // namespace

CMElement::CMElement(HurstParams params, std::vector<Atom> atoms)
    : params_(params), atoms_(consolidate(std::move(atoms), params.horizon())) {}

CMElement CMElement::section(HurstParams params, double time, unsigned component, double coeff) {
  return CMElement(params, {{time, component, coeff}});
}

CMElement CMElement::component(unsigned c) const {
  std::vector<Atom> sub;
  for (const auto& a : atoms_) {
    if (a.component == c) sub.push_back(a);
  }
  return CMElement(params_, std::move(sub));
}

CMElement CMElement::operator+(const CMElement& other) const {
  check_same_kernel(*this, other);
  std::vector<Atom> all(atoms_);
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return CMElement(params_, std::move(all));
}

CMElement CMElement::operator-(const CMElement& other) const { return *this + other.scaled(-1.0); }

CMElement CMElement::scaled(double c) const {
  std::vector<Atom> out(atoms_);
  for (auto& a : out) a.coeff *= c;
  return CMElement(params_, std::move(out));
}

double cm_inner(const CMElement& h, const CMElement& k) {
  check_same_kernel(h, k);
  const CovKernel kernel(h.params());
  double s = 0.0;
  for (const auto& a : h.atoms()) {
    for (const auto& b : k.atoms()) {
      if (a.component == b.component) s += a.coeff * b.coeff * kernel.R_unchecked(a.time, b.time);
    }
  }
  return s;
}

double cm_norm2(const CMElement& h) { return cm_inner(h, h); }

std::array<double, 2> cm_eval(const CMElement& h, double s) {
  const CovKernel kernel(h.params());
  if (!(s >= 0.0 && s <= kernel.horizon())) throw DomainError("evaluation time outside [0, T]");
  std::array<double, 2> out{0.0, 0.0};
  for (const auto& a : h.atoms()) out[a.component] += a.coeff * kernel.R_unchecked(a.time, s);
  return out;
}

GridPath cm_path(const CMElement& h, std::span<const double> times) {
  std::vector<std::vector<double>> vals(2, std::vector<double>(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto v = cm_eval(h, times[k]);
    vals[0][k] = v[0];
    vals[1][k] = v[1];
  }
  return GridPath(std::vector<double>(times.begin(), times.end()), std::move(vals));
}

std::vector<double> cm_integral_coefficients(std::span<const double> alpha, Rule rule) {
  const std::size_t n = alpha.size();
  if (n < 2) throw DomainError("integrand needs at least two grid values");
  // sum_i a_i [R(t_i,.) - R(t_{i-1},.)] regrouped by grid atom.
  std::vector<double> coeffs(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = rule == Rule::left ? alpha[i - 1] : 0.5 * (alpha[i - 1] + alpha[i]);
    coeffs[i] += a;
    coeffs[i - 1] -= a;
  }
  return coeffs;
}

CMElement cm_integral(const HurstParams& params, std::span<const double> times,
                      std::span<const double> alpha, unsigned component, Rule rule) {
  if (times.size() != alpha.size()) throw GridMismatchError("integrand does not match the grid");
  const auto coeffs = cm_integral_coefficients(alpha, rule);
  std::vector<Atom> atoms;
  atoms.reserve(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) atoms.push_back({times[k], component, coeffs[k]});
  return CMElement(params, std::move(atoms));
}

double cm_integral_norm(const HurstParams& params, std::span<const double> times,
                        std::span<const double> alpha, Rule rule) {
  return std::sqrt(std::max(0.0, cm_norm2(cm_integral(params, times, alpha, 0, rule))));
}

GridGram::GridGram(const HurstParams& params, std::span<const double> times)
    : params_(params), times_(times.begin(), times.end()) {
  const CovKernel kernel(params);
  const auto n = static_cast<Eigen::Index>(times_.size());
  gram_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double r = kernel.eval_R(times_[static_cast<std::size_t>(i)], times_[static_cast<std::size_t>(j)]);
      gram_(i, j) = r;
      gram_(j, i) = r;
    }
  }
}

double GridGram::inner(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != times_.size() || b.size() != times_.size()) {
    throw GridMismatchError("coefficient vector does not match the Gram grid");
  }
  const auto n = static_cast<Eigen::Index>(times_.size());
  double s = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double bj = b[static_cast<std::size_t>(j)];
    if (bj == 0.0) continue;
    double col = 0.0;
    const double* g = gram_.col(j).data();
    for (Eigen::Index i = 0; i < n; ++i) col += g[i] * a[static_cast<std::size_t>(i)];
    s += col * bj;
  }
  return s;
}

std::vector<double> GridGram::evaluate(std::span<const double> coeffs) const {
  if (coeffs.size() != times_.size()) throw GridMismatchError("coefficient vector does not match the Gram grid");
  const auto n = static_cast<Eigen::Index>(times_.size());
  std::vector<double> out(times_.size(), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* g = gram_.col(j).data();
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += g[i] * coeffs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(j)] = s;
  }
  return out;
}

double GridGram::evaluate_terminal(std::span<const double> coeffs) const {
  if (coeffs.size() != times_.size()) throw GridMismatchError("coefficient vector does not match the Gram grid");
  const auto n = static_cast<Eigen::Index>(times_.size());
  const double* g = gram_.col(n - 1).data();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += g[i] * coeffs[static_cast<std::size_t>(i)];
  return s;
}

CMElement GridGram::to_element(std::span<const double> coeffs, unsigned component) const {
  if (coeffs.size() != times_.size()) throw GridMismatchError("coefficient vector does not match the Gram grid");
  std::vector<Atom> atoms;
  atoms.reserve(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) atoms.push_back({times_[k], component, coeffs[k]});
  return CMElement(params_, std::move(atoms));
}

}  // namespace fbmarea
