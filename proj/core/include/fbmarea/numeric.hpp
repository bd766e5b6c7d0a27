#pragma once

#include <cmath>

namespace fbmarea {

/// x^e for x >= 0 and e > 0, with 0^e = 0. Arguments below 1e-300 go
/// through the log domain so that tiny widths do not underflow early.
inline double pow_nonneg(double x, double e) {
  if (x <= 0.0) return 0.0;
  if (x < 1e-300) return std::exp(e * std::log(x));
  return std::pow(x, e);
}

}  // namespace fbmarea
