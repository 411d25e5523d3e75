#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace polarlattice::io {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data);
std::string sha256_file(const fs::path& path);

/// 12 significant digits, '.' decimal separator, no negative zero.
std::string format_number(double v);

/// Writes via a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
void write_atomic(const fs::path& path, std::string_view content);

/// CSV text: a '#' comment line carrying the config checksum, a column
/// header, LF line endings.
class CsvTable {
 public:
  CsvTable(std::string config_sha256, std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::string sha_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

struct ManifestFile {
  std::string path;  // relative to the output directory, '/' separated
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Every regular file below `root` except the manifest itself, sorted by path.
std::vector<ManifestFile> scan_outputs(const fs::path& root);

struct RunInfo {
  std::string command;
  nlohmann::json config;
  std::string config_sha256;
  double wall_seconds = 0.0;
  std::map<std::string, double> stage_seconds;
};

inline constexpr const char* manifest_name = "manifest.json";

/// Writes manifest.json listing every file in `root` with its checksum.
nlohmann::json write_manifest(const fs::path& root, const RunInfo& info);

}  // namespace polarlattice::io
