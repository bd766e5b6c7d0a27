#include "fbmarea/hurst.hpp"

#include <cmath>
#include <string>

#include "fbmarea/errors.hpp"

namespace fbmarea {

HurstParams::HurstParams(double hurst, double horizon, HurstMode mode)
    : hurst_(hurst), horizon_(horizon), mode_(mode) {
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw DomainError("horizon T must be positive and finite, got " + std::to_string(horizon));
  }
  if (!std::isfinite(hurst)) throw DomainError("Hurst parameter must be finite");
  if (mode == HurstMode::strict) {
    if (!(hurst > 1.0 / 3.0 && hurst < 0.5)) {
      throw DomainError("strict mode requires 1/3 < H < 1/2, got H=" + std::to_string(hurst));
    }
  } else if (!(hurst > 0.0 && hurst <= 0.5)) {
    throw DomainError("diagnostic mode requires 0 < H <= 1/2, got H=" + std::to_string(hurst));
  }
}

std::optional<std::pair<double, double>> HurstParams::p_window() const {
  if (hurst_ >= 0.5) return std::nullopt;
  return std::make_pair(1.0 / hurst_, 1.0 / (1.0 - 2.0 * hurst_));
}

double HurstParams::default_p() const {
  if (auto w = p_window()) {
    // For H <= 1/3 the window is empty; stay just above 1/H.
    if (w->second > w->first) return 0.5 * (w->first + w->second);
    return w->first + 0.5;
  }
  return 1.0 / hurst_ + 0.5;
}

}  // namespace fbmarea
