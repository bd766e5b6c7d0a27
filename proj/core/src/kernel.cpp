#include "fbmarea/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "fbmarea/errors.hpp"
#include "fbmarea/numeric.hpp"
#include "fbmarea/rng.hpp"

namespace fbmarea {
namespace {

double normalisation(double h) {
  return std::sqrt(2.0 * h * std::tgamma(1.5 - h) / (std::tgamma(h + 0.5) * std::tgamma(2.0 - 2.0 * h)));
}

void check_time(double t, double horizon, const char* name) {
  if (!(t >= 0.0 && t <= horizon)) {
    throw DomainError(std::string(name) + "=" + std::to_string(t) + " outside [0, T]");
  }
}

}  // namespace

CovKernel::CovKernel(HurstParams params)
    : params_(params), two_h_(params.two_h()), b_h_(normalisation(params.hurst())) {}

double CovKernel::R_unchecked(double s, double t) const noexcept {
  return 0.5 * (pow_nonneg(s, two_h_) + pow_nonneg(t, two_h_) - pow_nonneg(std::fabs(t - s), two_h_));
}

double CovKernel::eval_R(double s, double t) const {
  check_time(s, horizon(), "s");
  check_time(t, horizon(), "t");
  return R_unchecked(s, t);
}

void CovKernel::validate(const Rect& r) const {
  const double T = horizon();
  if (!(r.a >= 0.0 && r.a < r.b && r.b <= T && r.c >= 0.0 && r.c < r.d && r.d <= T)) {
    throw DomainError("invalid rectangle (" + std::to_string(r.a) + "," + std::to_string(r.b) +
                      "]x(" + std::to_string(r.c) + "," + std::to_string(r.d) + "]");
  }
}

double CovKernel::mu_R_unchecked(double a, double b, double c, double d) const noexcept {
  return 0.5 * (pow_nonneg(std::fabs(d - a), two_h_) + pow_nonneg(std::fabs(c - b), two_h_) -
                pow_nonneg(std::fabs(d - b), two_h_) - pow_nonneg(std::fabs(c - a), two_h_));
}

double CovKernel::mu_R(const Rect& rect) const {
  validate(rect);
  return mu_R_unchecked(rect.a, rect.b, rect.c, rect.d);
}

double CovKernel::eval_KH(double t, double s) const {
  if (!(s > 0.0) || !(s < t) || t > horizon()) {
    throw DomainError("K_H(t,s) requires 0 < s < t <= T");
  }
  const double h = hurst();
  const double e = h - 0.5;
  const double first = std::pow(t / s, e) * std::pow(t - s, e);
  if (e == 0.0) return b_h_ * first;

  // int_s^t (u-s)^(H-1/2) u^(H-3/2) du. With x = (u-s)/u it becomes
  // s^(2H-1) int_0^z x^(H-1/2) (1-x)^(-2H) dx, z = 1 - s/t, which is the
  // incomplete beta function B(z; H+1/2, 1-2H).
  const double z = (t - s) / t;
  const double integral = std::pow(s, 2.0 * h - 1.0) * boost::math::beta(h + 0.5, 1.0 - 2.0 * h, z);
  return b_h_ * (first - e * std::pow(s, -e) * integral);
}

RectCase classify(const Rect& r) noexcept {
  if ((r.a <= r.c && r.d <= r.b) || (r.c <= r.a && r.b <= r.d)) return RectCase::nested;
  if (r.b <= r.c || r.d <= r.a) return RectCase::disjoint;
  return RectCase::overlap;
}

const char* to_string(RectCase c) noexcept {
  switch (c) {
    case RectCase::nested:
      return "nested";
    case RectCase::overlap:
      return "overlap";
    case RectCase::disjoint:
      return "disjoint";
  }
  return "unknown";
}

MsrBoundReport verify_msr_bound(const CovKernel& kernel, std::span<const Rect> rects) {
  MsrBoundReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.nested.worst_margin = rep.overlap.worst_margin = rep.disjoint.worst_margin =
      std::numeric_limits<double>::infinity();
  const double two_h = kernel.params().two_h();
  for (const auto& r : rects) {
    const double mu = kernel.mu_R(r);
    const double bound = std::min(pow_nonneg(r.b - r.a, two_h), pow_nonneg(r.d - r.c, two_h));
    const double margin = bound - std::fabs(mu);
    const RectCase kind = classify(r);
    CaseSummary& cs = kind == RectCase::nested    ? rep.nested
                      : kind == RectCase::overlap ? rep.overlap
                                                  : rep.disjoint;
    ++rep.count;
    ++cs.count;
    if (margin < -1e-12) {
      ++rep.violations;
      ++cs.violations;
    }
    cs.worst_margin = std::min(cs.worst_margin, margin);
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_rect = r;
      rep.worst_case = kind;
    }
  }
  return rep;
}

NegativityReport verify_negativity(const CovKernel& kernel, std::span<const Rect> rects) {
  NegativityReport rep;
  rep.worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : rects) {
    if (!(r.b <= r.c)) throw DomainError("negativity check needs a < b <= c < d");
    const double mu = kernel.mu_R(r);
    ++rep.count;
    if (!(mu < 0.0)) ++rep.violations;
    rep.worst = std::max(rep.worst, mu);
  }
  return rep;
}

std::vector<Rect> random_rects(double horizon, std::size_t count, std::uint64_t seed) {
  std::vector<Rect> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RandomStream rng({seed, i, 0x5EC7u});
    double x[4];
    do {
      for (double& v : x) v = horizon * rng.uniform();
    } while (x[0] == x[1] || x[2] == x[3]);
    out.push_back({std::min(x[0], x[1]), std::max(x[0], x[1]), std::min(x[2], x[3]),
                   std::max(x[2], x[3])});
  }
  return out;
}

std::vector<Rect> random_disjoint_rects(double horizon, std::size_t count, std::uint64_t seed) {
  std::vector<Rect> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RandomStream rng({seed, i, 0xD15Cu});
    double x[4];
    do {
      for (double& v : x) v = horizon * rng.uniform();
      std::sort(x, x + 4);
    } while (!(x[0] < x[1] && x[1] < x[2] && x[2] < x[3]));
    out.push_back({x[0], x[1], x[2], x[3]});
  }
  return out;
}

PVar2DResult variation_2d_R(const CovKernel& kernel, std::span<const double> grid,
                            Variation2DMode mode) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != kernel.horizon()) {
    throw DomainError("grid must start at 0 and end at T");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw DomainError("grid must be strictly increasing");
  }
  std::vector<double> g(grid.begin(), grid.end());
  return pvar2d(
      g.size(), g.size(),
      [&kernel, g](std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
        return kernel.mu_R_unchecked(g[i0], g[i1], g[j0], g[j1]);
      },
      kernel.params().r(), mode);
}

double rvar_upper_bound(const HurstParams& params) {
  return std::pow(5.0 * params.horizon(), params.two_h());
}

// int_0^{min(s,t)} K(t,u) K(s,u) du. Both factors blow up like u^{1/2-H}
// at 0 and like (M-u)^{H-1/2} at M = min(s,t); the power substitutions
// below flatten both ends before Gauss-Legendre.
double kh_covariance(const CovKernel& k, double s, double t) {
  if (!(s >= 0.0 && t >= 0.0 && s <= k.horizon() && t <= k.horizon())) {
    throw DomainError("kh_covariance: times must lie in [0, T]");
  }
  const double m = std::min(s, t);
  if (m == 0.0) return 0.0;
  const auto f = [&](double u) { return k.eval_KH(t, u) * k.eval_KH(s, u); };
  constexpr int pieces = 8;
  double total = 0.0;
  for (int side = 0; side < 2; ++side) {
    for (int p = 0; p < pieces; ++p) {
      const double w0 = double(p) / pieces, w1 = double(p + 1) / pieces;
      total += boost::math::quadrature::gauss<double, 30>::integrate(
          [&](double w) {
            const double w7 = std::pow(w, 7);
            const double jac = 0.5 * m * 8.0 * w7;
            const double u = side == 0 ? 0.5 * m * w7 * w : m - 0.5 * m * w7 * w;
            if (u <= 0.0 || u >= m) return 0.0;
            return f(u) * jac;
          },
          w0, w1);
    }
  }
  return total;
}


}  // namespace fbmarea
