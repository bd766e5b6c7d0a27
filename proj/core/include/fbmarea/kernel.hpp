#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fbmarea/hurst.hpp"
#include "fbmarea/variation.hpp"

namespace fbmarea {

/// The rectangle (a, b] x (c, d].
struct Rect {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

/// fBm covariance R(s,t) = (s^2H + t^2H - |t-s|^2H)/2, its rectangle
/// measure, and the Volterra kernel K_H with R(s,t) = int K_H(t,u)K_H(s,u)du.
class CovKernel {
 public:
  explicit CovKernel(HurstParams params);

  const HurstParams& params() const noexcept { return params_; }
  double hurst() const noexcept { return params_.hurst(); }
  double horizon() const noexcept { return params_.horizon(); }

  double eval_R(double s, double t) const;
  /// Unchecked R for hot loops; s, t must lie in [0, T].
  double R_unchecked(double s, double t) const noexcept;

  /// mu_R((a,b] x (c,d]) = Cov(B_b - B_a, B_d - B_c).
  double mu_R(const Rect& rect) const;
  double mu_R_unchecked(double a, double b, double c, double d) const noexcept;

  /// K_H(t, s) for 0 < s < t <= T.
  double eval_KH(double t, double s) const;
  /// Normalisation b_H = (2H G(3/2-H) / (G(H+1/2) G(2-2H)))^(1/2).
  double b_H() const noexcept { return b_h_; }

  void validate(const Rect& rect) const;

 private:
  HurstParams params_;
  double two_h_;
  double b_h_;
};

enum class RectCase { nested, overlap, disjoint };
RectCase classify(const Rect& rect) noexcept;
const char* to_string(RectCase c) noexcept;

struct CaseSummary {
  std::size_t count = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  ///< min over rects of bound - |mu|
};

struct MsrBoundReport {
  std::size_t count = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  Rect worst_rect{};
  RectCase worst_case = RectCase::nested;
  CaseSummary nested, overlap, disjoint;
};

/// Checks |mu_R(rect)| <= min((b-a)^2H, (d-c)^2H) + 1e-12 on every rect.
MsrBoundReport verify_msr_bound(const CovKernel& kernel, std::span<const Rect> rects);

struct NegativityReport {
  std::size_t count = 0;
  std::size_t violations = 0;
  double worst = 0.0;  ///< largest (closest to zero) value of mu_R observed
};

/// Checks mu_R((a,b] x (c,d]) < 0 for disjoint a < b <= c < d.
NegativityReport verify_negativity(const CovKernel& kernel, std::span<const Rect> rects);

/// Random rectangles with independent uniform endpoints in [0, T].
std::vector<Rect> random_rects(double horizon, std::size_t count, std::uint64_t seed);
/// Random sorted quadruples 0 <= a < b < c < d <= T.
std::vector<Rect> random_disjoint_rects(double horizon, std::size_t count, std::uint64_t seed);

/// 2D r-variation (r = 1/2H) of R restricted to subpartitions of `grid`,
/// which must start at 0 and end at T.
PVar2DResult variation_2d_R(const CovKernel& kernel, std::span<const double> grid,
                            Variation2DMode mode);

/// int_0^{min(s,t)} K_H(t,u) K_H(s,u) du by substituted Gauss-Legendre;
/// equals R(s,t) when K_H and b_H are right.
double kh_covariance(const CovKernel& kernel, double s, double t);

/// The bound (5T)^2H on the 2D r-variation of R.
double rvar_upper_bound(const HurstParams& params);

}  // namespace fbmarea
