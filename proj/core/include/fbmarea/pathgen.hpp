#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fbmarea/hurst.hpp"
#include "fbmarea/path.hpp"

namespace fbmarea {

enum class SamplerMethod { cholesky, circulant };

const char* to_string(SamplerMethod m) noexcept;
SamplerMethod parse_sampler_method(const std::string& name);

/// Autocovariance of fractional Gaussian noise with step `step`:
/// gamma(k) = step^2H (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2.
double fgn_autocovariance(double hurst, double step, std::size_t lag);

/// Exact sampler of 2D fBm on the dyadic grid D_m. Increments (fGn) are
/// drawn either through a Cholesky factor of their Toeplitz covariance or
/// through circulant embedding; the path is their cumulative sum.
///
/// Each (root_seed, sample, component) owns one Philox stream, so a sample
/// does not depend on which thread produced it or in which order.
class FbmSampler {
 public:
  FbmSampler(HurstParams params, unsigned level, SamplerMethod requested,
             std::size_t dimension = 2);
  ~FbmSampler();
  FbmSampler(FbmSampler&&) noexcept;
  FbmSampler& operator=(FbmSampler&&) noexcept;

  const HurstParams& params() const noexcept;
  unsigned level() const noexcept;
  std::span<const double> times() const noexcept;
  SamplerMethod requested_method() const noexcept;
  SamplerMethod method() const noexcept;  ///< effective method
  bool fell_back() const noexcept;
  const std::string& warning() const noexcept;
  /// Most negative circulant eigenvalue relative to the largest (0 if none).
  double min_relative_eigenvalue() const noexcept;

  GridPath sample(std::uint64_t root_seed, std::uint64_t index) const;
  /// Writes the 2^m fGn increments of one component.
  void sample_increments(std::uint64_t root_seed, std::uint64_t index, std::uint32_t component,
                         std::span<double> out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SampleBatchConfig {
  HurstParams params;
  unsigned level = 8;
  std::size_t count = 1;
  std::uint64_t root_seed = 0;
  SamplerMethod method = SamplerMethod::circulant;
};

struct SampleBatch {
  SampleBatchConfig config;
  SamplerMethod effective_method = SamplerMethod::circulant;
  bool fallback = false;
  std::string warning;
  std::vector<GridPath> paths;
};

SampleBatch sample_fbm(const SampleBatchConfig& config, unsigned threads = 0);

struct SelfSimilarityReport {
  double scale = 1.0;
  double scaling_hurst = 0.0;  ///< exponent used to rescale B_T
  double statistic = 0.0;
  double p_value = 1.0;
  bool passed = false;
};

/// Two-sample KS test between B_{aT} (component 1) and a^H' B_T
/// (component 2, independent of component 1). H' defaults to H.
SelfSimilarityReport self_similarity_check(const HurstParams& params, unsigned level,
                                           std::size_t count, std::uint64_t seed, double scale,
                                           double scaling_hurst = -1.0, unsigned threads = 0);

/// sup over dyadic intervals of every level <= m of |dB| / |dt|^alpha,
/// for a path whose grid is D_m.
double holder_proxy(const GridPath& path, std::size_t component, double alpha);

}  // namespace fbmarea
