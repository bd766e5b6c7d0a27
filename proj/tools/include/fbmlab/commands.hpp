#pragma once

#include <iosfwd>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fbmlab/checks.hpp"
#include "fbmlab/config.hpp"

namespace fbmlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  ///< verify-all check failed, or I/O trouble
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// A result that cannot be trusted (non-finite values and the like).
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, nlohmann::json details)
      : std::runtime_error(what), details_(std::move(details)) {}
  const nlohmann::json& details() const noexcept { return details_; }

 private:
  nlohmann::json details_;
};

/// Problem sizes of the verify-all suite.
struct SuiteSizes {
  std::size_t quadruples, rects, kernel_grid;
  unsigned cov_level;
  std::size_t cov_count;
  unsigned area_level;
  std::size_t area_count;
  std::size_t pvar_random, pvar_projection;
  unsigned pvar_level;
  unsigned cm_level;
  std::size_t cm_integrands;
  unsigned mall_level;
  std::size_t mall_count, mall_pairs;
  unsigned tail_level;
  std::size_t tail_count;
  std::vector<std::size_t> spectral_grids;
  unsigned density_level;
  std::size_t density_count, density_ks_count, density_grid;
};
SuiteSizes suite_sizes(bool quick);

/// Runs one validated experiment. Artifacts go to config.out (stdout when
/// empty); diagnostics to `err`. Returns the process exit code.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fbmlab
