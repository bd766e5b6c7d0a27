#pragma once

#include <array>
#include <cstdint>

namespace fbmarea {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
/// Stateless: the output depends only on (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// Stream identifier. Every (root_seed, sample, component) triple owns an
/// independent stream, so draws do not depend on evaluation order.
struct StreamId {
  std::uint64_t root_seed = 0;
  std::uint64_t sample = 0;
  std::uint32_t component = 0;
};

/// Sequential reader over one Philox stream. Each block yields two doubles.
class RandomStream {
 public:
  explicit RandomStream(StreamId id) noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal deviate by inverse-CDF transform.
  double normal() noexcept;

  std::uint64_t blocks_consumed() const noexcept { return block_; }

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  std::uint32_t component_;
  std::uint64_t sample_;
  std::uint64_t block_ = 0;
  std::array<double, 2> buffer_{};
  int position_ = 2;
};

/// Quantile of the standard normal distribution (Wichura, AS 241).
/// Accurate to about 1e-16 relative on (0, 1).
double inverse_normal_cdf(double p) noexcept;

/// Standard normal distribution function.
double normal_cdf(double x) noexcept;

}  // namespace fbmarea
