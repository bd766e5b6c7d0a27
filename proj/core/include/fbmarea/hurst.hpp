#pragma once

#include <optional>
#include <utility>

namespace fbmarea {

enum class HurstMode {
  strict,      ///< 1/3 < H < 1/2
  diagnostic,  ///< 0 < H <= 1/2; H = 1/2 is the Brownian oracle
};

/// Hurst exponent together with the time horizon [0, T].
class HurstParams {
 public:
  HurstParams(double hurst, double horizon, HurstMode mode = HurstMode::strict);

  static HurstParams diagnostic(double hurst, double horizon) {
    return HurstParams(hurst, horizon, HurstMode::diagnostic);
  }

  double hurst() const noexcept { return hurst_; }
  double horizon() const noexcept { return horizon_; }
  HurstMode mode() const noexcept { return mode_; }

  double two_h() const noexcept { return 2.0 * hurst_; }
  /// Variation exponent of the covariance kernel, r = 1/(2H).
  double r() const noexcept { return 1.0 / (2.0 * hurst_); }

  /// The open interval (1/H, 1/(1-2H)) of admissible path-variation
  /// exponents. Empty when H = 1/2.
  std::optional<std::pair<double, double>> p_window() const;

  /// Midpoint of p_window(); falls back to 1/H + 1/2 when the window is
  /// unbounded.
  double default_p() const;

  friend bool operator==(const HurstParams& a, const HurstParams& b) noexcept {
    return a.hurst_ == b.hurst_ && a.horizon_ == b.horizon_;
  }

 private:
  double hurst_;
  double horizon_;
  HurstMode mode_;
};

}  // namespace fbmarea
