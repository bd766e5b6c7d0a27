#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace fbmlab {

struct ExperimentConfig;

/// Writes to `path` via a sibling temp file and rename. Creates parent directories.
void write_atomic(const std::string& path, std::string_view contents);

/// Shortest-exact, locale-free: 17 significant digits, '.' decimal.
std::string format_double(double x);

/// Accumulates a CSV table in memory; `finish` prepends the metadata lines.
class CsvTable {
 public:
  CsvTable(const ExperimentConfig& config, std::string header);

  CsvTable& cell(double x);
  CsvTable& cell(std::uint64_t x);
  CsvTable& cell(std::string_view s);
  void end_row();

  std::string str() const;

 private:
  std::string meta_;
  std::string body_;
  bool row_started_ = false;
};

/// The configuration as embedded in artifacts. The output path is left out
/// (like the thread count) so that a result does not depend on where it is
/// written; everything needed to recompute it remains.
nlohmann::json config_echo(const ExperimentConfig& config);

/// {"fbmarea_version", "config", "result"}
nlohmann::json wrap_result(const ExperimentConfig& config, nlohmann::json result);

/// 17-significant-digit JSON dump so results round-trip.
std::string dump_json(const nlohmann::json& j);

}  // namespace fbmlab
