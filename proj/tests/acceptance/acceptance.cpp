// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "kglab/lab/checks.hpp"

using namespace kglab::lab;

namespace {
// Measured failures, documented in the README.
const std::set<int> kKnownFailures{5, 7, 8};

void line(int id, const std::string& name, bool passed, const std::string& note = "") {
  std::string tag = passed ? "PASS" : (kKnownFailures.count(id) ? "FAIL [known]" : "FAIL");
  std::cout << tag << " " << id << " " << name;
  if (!note.empty()) std::cout << " (" << note << ")";
  std::cout << std::endl;
}

json strip_timings(json j) {
  j.erase("timings");
  return j;
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string lab_exe, work = "acceptance_out";
  std::uint64_t seed = 1;
  app.add_option("--lab", lab_exe, "path to the lab executable")->required();
  app.add_option("--work", work, "scratch directory");
  app.add_option("--seed", seed, "check seed");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(work);
  bool unexpected = false;

  CheckOptions opt;
  opt.seed = seed;
  const CheckReport in_process = run_checks(opt);
  for (const auto& c : in_process.criteria) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1fs", c.seconds);
    line(c.id, c.name, c.passed, secs);
    if (!c.passed && !kKnownFailures.count(c.id)) unexpected = true;
  }

  const std::string report = work + "/report.json";
  std::filesystem::remove(report);
  const std::string cmd =
      "\"" + lab_exe + "\" check --quiet --seed " + std::to_string(seed) + " --out \"" + report + "\" > /dev/null 2>&1";
  const auto t0 = std::chrono::steady_clock::now();
  std::system(cmd.c_str());
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool reproducible = false;
  std::ifstream f(report);
  if (f) {
    try {
      reproducible = strip_timings(json::parse(f)) == strip_timings(in_process.to_json());
    } catch (const std::exception&) {
      reproducible = false;
    }
  }
  const bool c10 = reproducible && wall <= 1800.0;
  char note[64];
  std::snprintf(note, sizeof note, "%s, %.0fs", reproducible ? "identical report" : "report differs", wall);
  line(10, criterion_name(10), c10, note);
  if (!c10) unexpected = true;

  return unexpected ? 1 : 0;
}
