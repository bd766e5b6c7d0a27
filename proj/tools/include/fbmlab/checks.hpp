#pragma once

// Numerical checks shared by `fbmlab verify-all` and the acceptance suite.
// Each returns the measured quantities; `passed` applies the default
// thresholds below, and callers may re-judge the raw numbers.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <fbmarea/hurst.hpp>
#include <fbmarea/malliavin.hpp>
#include <nlohmann/json.hpp>

namespace fbmlab {

/// splitmix64 of (root, tag): independent seeds for the individual checks.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) noexcept;

struct KernelCheck {
  std::size_t negativity_count = 0, negativity_violations = 0;
  double negativity_worst = 0.0;
  std::size_t bound_count = 0, bound_violations = 0;
  double bound_worst_margin = 0.0;
  double variation_2d = 0.0, variation_lower = 0.0, variation_upper = 0.0;
  std::size_t variation_grid_points = 0;
  /// exact values on nested dyadic grids of 2, 3, 5, 9 points; nondecreasing
  std::vector<double> variation_refinement;
  bool refinement_monotone = false;
  double kh_max_rel_error = 0.0;  ///< int K K vs R on a 5 x 5 grid
  bool passed = false;
};
KernelCheck kernel_check(const fbmarea::HurstParams& params, std::size_t quadruples,
                         std::size_t rects, std::size_t grid_points, std::uint64_t seed);
nlohmann::json to_json(const KernelCheck& r);

struct CovarianceCheck {
  unsigned level = 0;
  std::size_t count = 0;
  std::size_t entries = 0, violations = 0;  ///< |z| > 3
  double max_abs_z = 0.0;
  double var_T = 0.0, var_T_error = 0.0, var_T_target = 0.0, var_T_z = 0.0;
  bool passed = false;
};
/// Cholesky sampler, empirical E[B_s B_t] for every pair of grid times.
CovarianceCheck covariance_check(const fbmarea::HurstParams& params, unsigned level,
                                 std::size_t count, std::uint64_t seed, unsigned threads);
nlohmann::json to_json(const CovarianceCheck& r);

struct AreaCheck {
  double square_error = 0.0;
  std::size_t circle_points = 0;
  double circle_error = 0.0;
  unsigned brownian_level = 0;
  std::size_t brownian_count = 0;
  double brownian_var = 0.0, brownian_var_error = 0.0, brownian_target = 0.0, brownian_rel_error = 0.0;
  bool passed = false;
};
AreaCheck area_check(double horizon, unsigned level, std::size_t count, std::uint64_t seed,
                     unsigned threads);
nlohmann::json to_json(const AreaCheck& r);

struct VariationCheck {
  std::size_t random_paths = 0;
  double max_dp_vs_bruteforce = 0.0;  ///< relative
  double monotone_error = 0.0;
  std::size_t projection_paths = 0, projection_violations = 0;
  double projection_max_ratio = 0.0;  ///< ||pi_m x||_p / (3^{p-1} ||x||_p)
  double p = 0.0;
  bool passed = false;
};
VariationCheck variation_check(const fbmarea::HurstParams& params, std::size_t random_paths,
                               std::size_t projection_paths, unsigned level, std::uint64_t seed,
                               unsigned threads);
nlohmann::json to_json(const VariationCheck& r);

struct CameronMartinCheck {
  double reproducing_max_error = 0.0;
  double young_max_rel_error = 0.0;
  std::size_t young_integrands = 0;
  bool passed = false;
};
CameronMartinCheck cameron_martin_check(const fbmarea::HurstParams& params, unsigned level,
                                        std::size_t integrands, std::uint64_t seed);
nlohmann::json to_json(const CameronMartinCheck& r);

struct MalliavinCheck {
  unsigned level = 0;
  std::size_t count = 0, pairs = 0;
  double duality_max_rel_error = 0.0;
  double det_max_rel_error = 0.0;  ///< both determinant routes against Phi
  double min_phi = 0.0;
  double gateaux_max_rel_error = 0.0;
  double bound_max_ratio = 0.0;  ///< |Q omega|^2 / ((T^2H/4 + 2 (5T)^2H) ||omega||_p^2)
  std::size_t bound_violations = 0;
  bool passed = false;
};
MalliavinCheck malliavin_check(const fbmarea::HurstParams& params, unsigned level, std::size_t count,
                               std::size_t pairs, std::uint64_t seed, unsigned threads);
nlohmann::json to_json(const MalliavinCheck& r);

struct TailCheck {
  fbmarea::PhiTailReport report;
  bool passed = false;  ///< slope <= -1 and E[exp(-s Phi)] decreasing
};
TailCheck tail_check(const fbmarea::HurstParams& params, unsigned level, std::size_t count,
                     std::vector<double> s_grid, std::uint64_t seed, unsigned threads);
nlohmann::json to_json(const fbmarea::PhiTailReport& r);
nlohmann::json to_json(const TailCheck& r);

struct SpectralCheck {
  std::vector<fbmarea::SpectralReport> reports;
  bool psd = false;
  bool counts_increasing = false;
  double trace_change = 0.0;  ///< relative, between the last two grids
  bool passed = false;
};
/// PSD within -1e-10, strictly increasing positive counts, trace stable to 10%.
SpectralCheck spectral_check(const fbmarea::HurstParams& params, std::vector<std::size_t> grids);
nlohmann::json to_json(const fbmarea::SpectralReport& r, bool with_eigenvalues);
nlohmann::json to_json(const SpectralCheck& r);

struct DensityCheck {
  std::size_t count = 0, ks_count = 0, grid_n = 0;
  double ks_b1_p = 0.0, ks_b2_p = 0.0, ks_sign_flip_p = 0.0;
  double mass = 0.0;
  bool smooth_finite = false;
  std::size_t high_variance_cells = 0, probed_cells = 0;
  double max_relative_sd = 0.0;
  bool passed = false;
};
DensityCheck density_check(const fbmarea::HurstParams& params, unsigned level, std::size_t count,
                           std::size_t ks_count, std::size_t grid_n, std::uint64_t seed,
                           unsigned threads);
nlohmann::json to_json(const DensityCheck& r);

}  // namespace fbmlab
