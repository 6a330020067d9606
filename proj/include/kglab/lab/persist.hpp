#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace kglab::lab {

using json = nlohmann::ordered_json;

struct Column {
  std::string name;
  std::vector<double> values;
};

// All writers create parent directories and throw IoError on failure.
void write_text(const std::string& path, const std::string& content);
// Columns must share one length. Values use shortest round-trip formatting.
void write_csv(const std::string& path, const std::vector<Column>& columns);
void write_json(const std::string& path, const json& doc);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

struct ArtifactEntry {
  std::string path;  // relative to the run directory
  std::string sha256;
};

struct CheckEntry {
  std::string name;
  bool passed = false;
  json measured;
  bool hard = true;  // soft checks are reported but do not fail the run
};

class RunManifest {
 public:
  explicit RunManifest(std::string run_dir) : dir_(std::move(run_dir)) {}

  const std::string& dir() const { return dir_; }
  std::string path(const std::string& rel) const { return dir_ + "/" + rel; }

  // Writers that also register the file with its checksum.
  void csv(const std::string& rel, const std::vector<Column>& columns);
  void json_file(const std::string& rel, const json& doc);
  void add_file(const std::string& rel);

  void check(const std::string& name, bool passed, json measured, bool hard = true);
  void timing(const std::string& name, double seconds);

  // True when every hard check passed.
  bool all_passed() const;
  json to_json(const std::map<std::string, std::string>& config) const;
  // Writes manifest.json next to the artifacts.
  void write(const std::map<std::string, std::string>& config) const;

  const std::vector<ArtifactEntry>& artifacts() const { return artifacts_; }
  const std::vector<CheckEntry>& checks() const { return checks_; }

 private:
  std::string dir_;
  std::vector<ArtifactEntry> artifacts_;
  std::vector<CheckEntry> checks_;
  std::vector<std::pair<std::string, double>> timings_;
};

// Shortest round-trip decimal for v.
std::string format_double(double v);

}  // namespace kglab::lab
