#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fbmarea/cameron_martin.hpp"
#include "fbmarea/hurst.hpp"
#include "fbmarea/path.hpp"
#include "fbmarea/pathgen.hpp"

namespace fbmarea {

/// omega~ = (omega^2, -omega^1), rotation by -pi/2.
GridPath rotate(const GridPath& omega);

/// q(h, k) = (1/2)(int h . dk~ + int k . dh~), midpoint rule on the shared grid.
double q_form(const GridPath& h, const GridPath& k);
/// The unsymmetrized form int h . dk~ + (1/2) k(T) . h~(T).
double q_form_alt(const GridPath& h, const GridPath& k);

/// Coefficients of Q omega on the grid atoms R(t_k, .) e_c (k = 0..n, c = 0, 1):
/// Q omega = (1/2) R(T, .) omega~(T) - int omega~(t) R(dt, .), with the
/// integral taken on the grid of omega itself.
std::array<std::vector<double>, 2> q_operator_coefficients(const GridPath& omega);
CMElement q_operator(const HurstParams& params, const GridPath& omega);

/// Directional derivative of the area functional at omega along h:
/// (1/2)(int h . d omega~ + int omega . dh~) = q(omega, h).
double derivative_area(const GridPath& omega, const GridPath& h);

/// det of a 3x3 matrix by cofactor expansion along the first row.
double det3(const Eigen::Matrix3d& m);
/// det [[a I_2, C], [C^t, D]] = a^2 (D - C^t C / a), for a != 0.
double block_determinant(double a, const Eigen::Vector2d& c, double d);

struct MalliavinReport {
  Eigen::Matrix3d gamma = Eigen::Matrix3d::Zero();
  std::array<double, 2> q_omega_T{0.0, 0.0};
  double q_norm2 = 0.0;
  std::array<double, 2> q_norm2_component{0.0, 0.0};
  double phi = 0.0;           ///< T^4H |Q omega|^2 - T^2H |Q omega(T)|^2
  double det_gamma = 0.0;     ///< cofactor expansion of gamma
  double det_blockdet = 0.0;  ///< block-determinant identity
};

/// Requires omega's grid to end at T. The Gram overload reuses a
/// precomputed kernel matrix on omega's grid.
MalliavinReport malliavin_matrix(const HurstParams& params, const GridPath& omega);
MalliavinReport malliavin_matrix(const GridGram& gram, const GridPath& omega);

/// DY k = (k^1(T), k^2(T), <Q omega, k>).
Eigen::Vector3d dy_apply(const HurstParams& params, const GridPath& omega, const CMElement& k);
/// (DY)* x = x_1 R(T, .) e_1 + x_2 R(T, .) e_2 + x_3 Q omega.
CMElement dy_adjoint(const HurstParams& params, const GridPath& omega, const Eigen::Vector3d& x);

/// Phi on the nested dyadic projections of one fine path.
std::vector<double> phi_series(const HurstParams& params, const GridPath& fine,
                               unsigned level_min, unsigned level_max);

struct MalliavinSample {
  std::size_t sample = 0;
  double phi = 0.0;
  double det_gamma = 0.0;
  double det_blockdet = 0.0;
  double q_norm2 = 0.0;
  std::array<double, 2> q_omega_T{0.0, 0.0};
  std::array<double, 2> q_norm2_component{0.0, 0.0};
  double area = 0.0;
};

struct MalliavinBatchConfig {
  HurstParams params;
  unsigned level = 8;
  std::size_t count = 1000;
  std::uint64_t root_seed = 0;
  SamplerMethod method = SamplerMethod::circulant;
};

std::vector<MalliavinSample> malliavin_samples(const MalliavinBatchConfig& config,
                                               unsigned threads = 0);

struct PhiTailReport {
  std::vector<double> s_grid;
  std::vector<double> laplace;      ///< E[exp(-s Phi)] per s (may underflow)
  std::vector<double> log_laplace;  ///< its logarithm, computed without underflow
  double log_slope = 0.0;       ///< fitted slope of log E vs log s
  bool decreasing = false;
  std::array<double, 2> inverse_moment{0.0, 0.0};          ///< E[Phi^-j], j = 1, 2, all samples
  std::array<double, 2> inverse_moment_quarter{0.0, 0.0};  ///< first N/4 samples
  std::array<bool, 2> inverse_moment_stable{false, false}; ///< within 20%
  std::size_t count = 0;
  std::size_t excluded = 0;  ///< Phi < 1e-14 T^4H
  double min_phi = 0.0;
};

PhiTailReport phi_tail_diagnostic(const MalliavinBatchConfig& config, std::span<const double> s_grid,
                                  unsigned threads = 0);
PhiTailReport phi_tail_from_samples(const HurstParams& params, std::span<const double> phi,
                                    std::span<const double> s_grid);

struct SpectralReport {
  std::size_t grid_n = 0;  ///< atoms per component
  std::vector<double> eigenvalues;  ///< ascending
  std::size_t positive_count = 0;   ///< eigenvalues > 1e-10
  double trace = 0.0;
  double min_eigenvalue = 0.0;
};

inline constexpr std::size_t kSpectralMaxGrid = 64;
inline constexpr unsigned kSpectralIntegrationLevel = 10;

/// Phi restricted to span{R(t_i, .) e_c : t_i = i T / n, i = 1..n}, as the
/// generalized eigenproblem M x = lambda G x with G the atom Gram matrix.
SpectralReport spectral_diagnostic(const HurstParams& params, std::size_t grid_n,
                                   unsigned integration_level = kSpectralIntegrationLevel);

struct MomentRow {
  unsigned order = 0;
  double estimate = 0.0;  ///< E|A_T|^j
  double std_error = 0.0;
};

struct MomentReport {
  std::vector<MomentRow> rows;
  double kurtosis_ratio = 0.0;  ///< E|A|^4 / (E|A|^2)^2, when j_max >= 4
  bool stable = false;          ///< every estimate finite with relative error < 0.5
  std::size_t count = 0;
};

inline constexpr unsigned kMomentMaxOrder = 8;

MomentReport moment_diagnostic(const MalliavinBatchConfig& config, unsigned j_max,
                               unsigned threads = 0);
MomentReport moments_from_samples(std::span<const double> area, unsigned j_max);

}  // namespace fbmarea
