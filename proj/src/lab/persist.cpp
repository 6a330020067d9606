#include "kglab/lab/persist.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kglab/errors.hpp"

namespace kglab::lab {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_text(const std::string& path, const std::string& content) {
  std::error_code ec;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory for '" + path + "': " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("write to '" + path + "' failed");
}

void write_csv(const std::string& path, const std::vector<Column>& cols) {
  if (cols.empty()) throw IoError("no columns for '" + path + "'");
  const size_t n = cols.front().values.size();
  for (const auto& c : cols)
    if (c.values.size() != n) throw IoError("column '" + c.name + "' length mismatch in '" + path + "'");
  std::string s;
  for (size_t j = 0; j < cols.size(); ++j) s += (j ? "," : "") + cols[j].name;
  s += "\n";
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < cols.size(); ++j) s += (j ? "," : "") + format_double(cols[j].values[i]);
    s += "\n";
  }
  write_text(path, s);
}

void write_json(const std::string& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return sha256_hex(ss.str());
}

void RunManifest::csv(const std::string& rel, const std::vector<Column>& columns) {
  write_csv(path(rel), columns);
  add_file(rel);
}

void RunManifest::json_file(const std::string& rel, const json& doc) {
  write_json(path(rel), doc);
  add_file(rel);
}

void RunManifest::add_file(const std::string& rel) {
  const std::string sum = sha256_file(path(rel));
  for (auto& a : artifacts_)
    if (a.path == rel) {
      a.sha256 = sum;
      return;
    }
  artifacts_.push_back({rel, sum});
}

void RunManifest::check(const std::string& name, bool passed, json measured, bool hard) {
  checks_.push_back({name, passed, std::move(measured), hard});
}

void RunManifest::timing(const std::string& name, double seconds) { timings_.emplace_back(name, seconds); }

bool RunManifest::all_passed() const {
  for (const auto& c : checks_)
    if (c.hard && !c.passed) return false;
  return true;
}

json RunManifest::to_json(const std::map<std::string, std::string>& config) const {
  json j;
  j["config"] = json::object();
  for (const auto& [k, v] : config) j["config"][k] = v;
  j["artifacts"] = json::array();
  for (const auto& a : artifacts_) j["artifacts"].push_back({{"path", a.path}, {"sha256", a.sha256}});
  j["checks"] = json::array();
  for (const auto& c : checks_) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"hard", c.hard}, {"measured", c.measured}});
  j["timings"] = json::object();
  for (const auto& [k, v] : timings_) j["timings"][k] = v;
  return j;
}

void RunManifest::write(const std::map<std::string, std::string>& config) const {
  write_json(path("manifest.json"), to_json(config));
}

}  // namespace kglab::lab
