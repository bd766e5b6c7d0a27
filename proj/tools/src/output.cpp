#include "fbmlab/output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <fbmarea/version.hpp>

#include "fbmlab/config.hpp"

namespace fbmlab {

namespace fs = std::filesystem;

nlohmann::json config_echo(const ExperimentConfig& config) {
  auto j = to_json(config);
  j.erase("out");
  return j;
}

void write_atomic(const std::string& path, std::string_view contents) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + target.string() + ": " + ec.message());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(const ExperimentConfig& config, std::string header) {
  meta_ = "# fbmarea " + std::string(fbmarea::kVersion) + "\n";
  meta_ += "# config " + config_echo(config).dump() + "\n";
  body_ = std::move(header) + "\n";
}

CsvTable& CsvTable::cell(double x) { return cell(std::string_view(format_double(x))); }

CsvTable& CsvTable::cell(std::uint64_t x) { return cell(std::string_view(std::to_string(x))); }

CsvTable& CsvTable::cell(std::string_view s) {
  if (row_started_) body_ += ',';
  body_ += s;
  row_started_ = true;
  return *this;
}

void CsvTable::end_row() {
  body_ += '\n';
  row_started_ = false;
}

std::string CsvTable::str() const { return meta_ + body_; }

namespace {

// nlohmann prints the shortest representation that round-trips; it would
// turn non-finite values into null, so spell those out instead.
nlohmann::json sanitize(const nlohmann::json& j) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) return format_double(j.get<double>());
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : j.items()) out[k] = sanitize(v);
    return out;
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(sanitize(v));
    return out;
  }
  return j;
}

}  // namespace

nlohmann::json wrap_result(const ExperimentConfig& config, nlohmann::json result) {
  return nlohmann::json{{"fbmarea_version", fbmarea::kVersion},
                        {"config", config_echo(config)},
                        {"result", std::move(result)}};
}

std::string dump_json(const nlohmann::json& j) { return sanitize(j).dump(2) + "\n"; }

}  // namespace fbmlab
