#include "fbmarea/pathgen.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fftw3.h>

#include "fbmarea/errors.hpp"
#include "fbmarea/numeric.hpp"
#include "fbmarea/parallel.hpp"
#include "fbmarea/rng.hpp"
#include "fbmarea/stats.hpp"

namespace fbmarea {
namespace {

// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

constexpr double kEigenvalueTolerance = 1e-10;

}  // namespace

const char* to_string(SamplerMethod m) noexcept {
  return m == SamplerMethod::cholesky ? "cholesky" : "circulant";
}

SamplerMethod parse_sampler_method(const std::string& name) {
  if (name == "cholesky") return SamplerMethod::cholesky;
  if (name == "circulant") return SamplerMethod::circulant;
  throw DomainError("unknown sampler method '" + name + "' (expected cholesky|circulant)");
}

double fgn_autocovariance(double hurst, double step, std::size_t lag) {
  const double two_h = 2.0 * hurst;
  const double k = static_cast<double>(lag);
  const double core = pow_nonneg(k + 1.0, two_h) - 2.0 * pow_nonneg(k, two_h) +
                      pow_nonneg(std::fabs(k - 1.0), two_h);
  return 0.5 * pow_nonneg(step, two_h) * core;
}

struct FbmSampler::Impl {
  HurstParams params;
  unsigned level;
  std::size_t dimension;
  std::vector<double> times;
  SamplerMethod requested;
  SamplerMethod method;
  bool fell_back = false;
  std::string warning;
  double min_rel_eig = 0.0;

  Eigen::MatrixXd chol;                 // lower factor, cholesky method
  std::vector<double> sqrt_eig_scaled;  // sqrt(lambda_k / M), circulant method
  fftw_plan plan = nullptr;

  std::size_t n() const { return times.size() - 1; }

  void build_cholesky() {
    const std::size_t m = n();
    const double step = params.horizon() / static_cast<double>(m);
    Eigen::MatrixXd cov(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        cov(i, j) = fgn_autocovariance(params.hurst(), step, i > j ? i - j : j - i);
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw DomainError("fGn covariance is not positive definite");
    }
    chol = llt.matrixL();
  }

  bool build_circulant() {
    const std::size_t m = n();
    const std::size_t big = 2 * m;
    const double step = params.horizon() / static_cast<double>(m);
    FftwBuffer in(big), out(big);
    for (std::size_t k = 0; k < big; ++k) {
      const std::size_t lag = k <= m ? k : big - k;
      in.data[k][0] = fgn_autocovariance(params.hurst(), step, lag);
      in.data[k][1] = 0.0;
    }
    {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_plan eig_plan =
          fftw_plan_dft_1d(static_cast<int>(big), in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
      fftw_execute(eig_plan);
      fftw_destroy_plan(eig_plan);
    }
    double max_eig = 0.0;
    double min_eig = 0.0;
    for (std::size_t k = 0; k < big; ++k) {
      max_eig = std::max(max_eig, out.data[k][0]);
      min_eig = std::min(min_eig, out.data[k][0]);
    }
    min_rel_eig = max_eig > 0.0 ? min_eig / max_eig : -1.0;
    if (min_rel_eig < -kEigenvalueTolerance) return false;
    sqrt_eig_scaled.resize(big);
    for (std::size_t k = 0; k < big; ++k) {
      sqrt_eig_scaled[k] = std::sqrt(std::max(out.data[k][0], 0.0) / static_cast<double>(big));
    }
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(big), in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    return true;
  }

  ~Impl() {
    if (plan) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FbmSampler::FbmSampler(HurstParams params, unsigned level, SamplerMethod requested,
                       std::size_t dimension)
    : impl_(std::make_unique<Impl>(Impl{params, level, dimension, {}, requested, requested})) {
  if (level < 1) throw DomainError("dyadic level must be >= 1");
  if (level > 24) throw SizeError("dyadic level above 24 is not supported");
  if (dimension < 1 || dimension > 2) throw DimensionError("fBm dimension must be 1 or 2");
  impl_->times = dyadic_grid(params.horizon(), level);
  if (requested == SamplerMethod::circulant) {
    if (!impl_->build_circulant()) {
      impl_->fell_back = true;
      impl_->method = SamplerMethod::cholesky;
      impl_->warning = "circulant embedding has a negative eigenvalue (relative " +
                       std::to_string(impl_->min_rel_eig) + "); fell back to cholesky";
    }
  }
  if (impl_->method == SamplerMethod::cholesky) impl_->build_cholesky();
}

FbmSampler::~FbmSampler() = default;
FbmSampler::FbmSampler(FbmSampler&&) noexcept = default;
FbmSampler& FbmSampler::operator=(FbmSampler&&) noexcept = default;

const HurstParams& FbmSampler::params() const noexcept { return impl_->params; }
unsigned FbmSampler::level() const noexcept { return impl_->level; }
std::span<const double> FbmSampler::times() const noexcept { return impl_->times; }
SamplerMethod FbmSampler::requested_method() const noexcept { return impl_->requested; }
SamplerMethod FbmSampler::method() const noexcept { return impl_->method; }
bool FbmSampler::fell_back() const noexcept { return impl_->fell_back; }
const std::string& FbmSampler::warning() const noexcept { return impl_->warning; }
double FbmSampler::min_relative_eigenvalue() const noexcept { return impl_->min_rel_eig; }

void FbmSampler::sample_increments(std::uint64_t root_seed, std::uint64_t index,
                                   std::uint32_t component, std::span<double> out) const {
  const std::size_t m = impl_->n();
  if (out.size() != m) throw DimensionError("increment buffer has the wrong length");
  RandomStream rng({root_seed, index, component});
  if (impl_->method == SamplerMethod::cholesky) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    const auto& L = impl_->chol;
    // Lower-triangular product in a fixed summation order.
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        s += L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
             z[static_cast<Eigen::Index>(j)];
      }
      out[i] = s;
    }
    return;
  }
  const std::size_t big = 2 * m;
  FftwBuffer in(big), freq(big);
  for (std::size_t k = 0; k < big; ++k) {
    const double a = rng.normal();
    const double b = rng.normal();
    in.data[k][0] = impl_->sqrt_eig_scaled[k] * a;
    in.data[k][1] = impl_->sqrt_eig_scaled[k] * b;
  }
  fftw_execute_dft(impl_->plan, in.data, freq.data);
  for (std::size_t k = 0; k < m; ++k) out[k] = freq.data[k][0];
}

GridPath FbmSampler::sample(std::uint64_t root_seed, std::uint64_t index) const {
  const std::size_t m = impl_->n();
  std::vector<std::vector<double>> values(impl_->dimension, std::vector<double>(m + 1, 0.0));
  std::vector<double> inc(m);
  for (std::size_t c = 0; c < impl_->dimension; ++c) {
    sample_increments(root_seed, index, static_cast<std::uint32_t>(c), inc);
    for (std::size_t k = 0; k < m; ++k) values[c][k + 1] = values[c][k] + inc[k];
  }
  return GridPath(impl_->times, std::move(values));
}

SampleBatch sample_fbm(const SampleBatchConfig& config, unsigned threads) {
  if (config.count < 1) throw DomainError("sample count must be >= 1");
  FbmSampler sampler(config.params, config.level, config.method);
  SampleBatch batch{config, sampler.method(), sampler.fell_back(), sampler.warning(), {}};
  std::vector<std::optional<GridPath>> slots(config.count);
  parallel_for(config.count, threads,
               [&](std::size_t i) { slots[i].emplace(sampler.sample(config.root_seed, i)); });
  batch.paths.reserve(config.count);
  for (auto& s : slots) batch.paths.push_back(std::move(*s));
  return batch;
}

SelfSimilarityReport self_similarity_check(const HurstParams& params, unsigned level,
                                           std::size_t count, std::uint64_t seed, double scale,
                                           double scaling_hurst, unsigned threads) {
  if (!(scale > 0.0 && scale <= 1.0)) throw DomainError("scale must lie in (0, 1]");
  const double grid_pos = scale * std::ldexp(1.0, static_cast<int>(level));
  const double rounded = std::round(grid_pos);
  if (std::fabs(grid_pos - rounded) > 1e-9) throw DomainError("a*T is not on the dyadic grid");
  const auto k = static_cast<std::size_t>(rounded);
  const double exponent = scaling_hurst > 0.0 ? scaling_hurst : params.hurst();

  FbmSampler sampler(params, level, SamplerMethod::circulant);
  std::vector<double> at_scale(count), rescaled(count);
  const double factor = std::pow(scale, exponent);
  parallel_for(count, threads, [&](std::size_t i) {
    const GridPath path = sampler.sample(seed, i);
    at_scale[i] = path.value(0, k);
    rescaled[i] = factor * path.terminal(1);
  });
  const auto ks = stats::ks_two_sample(at_scale, rescaled);
  return {scale, exponent, ks.statistic, ks.p_value, ks.p_value > 0.01};
}

double holder_proxy(const GridPath& path, std::size_t component, double alpha) {
  const int level = finest_dyadic_level(path);
  if (level < 1 || path.size() != (std::size_t{1} << level) + 1) {
    throw GridMismatchError("holder proxy needs a path on a dyadic grid");
  }
  const auto values = path.component(component);
  const double T = path.horizon();
  double sup = 0.0;
  for (int j = 1; j <= level; ++j) {
    const std::size_t stride = std::size_t{1} << (level - j);
    const double dt = T * std::ldexp(1.0, -j);
    const double denom = std::pow(dt, alpha);
    for (std::size_t k = 0; k + stride < values.size(); k += stride) {
      sup = std::max(sup, std::fabs(values[k + stride] - values[k]) / denom);
    }
  }
  return sup;
}

}  // namespace fbmarea
