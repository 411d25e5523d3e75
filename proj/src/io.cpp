#include "polarlattice/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "polarlattice/errors.hpp"

#ifndef POLARLATTICE_VERSION
#define POLARLATTICE_VERSION "unknown"
#endif

namespace polarlattice::io {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("cannot initialise SHA-256");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_, data, n) != 1) throw std::runtime_error("SHA-256 update failed");
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, md, &len) != 1) throw std::runtime_error("SHA-256 final failed");
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 0xf];
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_atomic(const fs::path& path, std::string_view content) {
  static std::atomic<unsigned long> counter{0};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ostringstream suffix;
  suffix << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
         << counter++;
  fs::path tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

CsvTable::CsvTable(std::string config_sha256, std::vector<std::string> columns)
    : sha_(std::move(config_sha256)), columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw InvalidArgument("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(columns_.size()));
  }
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  rows_.push_back(std::move(line));
}

std::string CsvTable::str() const {
  std::string out = "# config_sha256=" + sha_ + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& r : rows_) {
    out += r;
    out += '\n';
  }
  return out;
}

std::vector<ManifestFile> scan_outputs(const fs::path& root) {
  std::vector<ManifestFile> files;
  if (!fs::exists(root)) return files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), root).generic_string();
    if (rel == manifest_name) continue;
    files.push_back({rel, sha256_file(entry.path()), entry.file_size()});
  }
  std::sort(files.begin(), files.end(),
            [](const ManifestFile& a, const ManifestFile& b) { return a.path < b.path; });
  return files;
}

nlohmann::json write_manifest(const fs::path& root, const RunInfo& info) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : scan_outputs(root))
    files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  nlohmann::json stages = nlohmann::json::object();
  for (const auto& [name, secs] : info.stage_seconds) stages[name] = secs;
  nlohmann::json m = {{"command", info.command},
                      {"code_version", POLARLATTICE_VERSION},
                      {"config", info.config},
                      {"config_sha256", info.config_sha256},
                      {"wall_seconds", info.wall_seconds},
                      {"stage_seconds", stages},
                      {"files", files}};
  write_atomic(root / manifest_name, m.dump(2) + "\n");
  return m;
}

}  // namespace polarlattice::io
