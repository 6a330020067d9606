#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "kglab/lab/persist.hpp"

namespace kglab::lab {

struct CheckOptions {
  std::uint64_t seed = 1;
  std::set<int> only;  // empty: all of 1..9
  std::function<void(const std::string&)> progress;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  json detail;
  double seconds = 0.0;
};

struct CheckReport {
  std::uint64_t seed = 1;
  std::vector<CriterionResult> criteria;

  bool all_passed() const;
  const CriterionResult* find(int id) const;
  // Wall-clock values live under "timings" only, so two runs compare equal without it.
  json to_json() const;
};

std::string criterion_name(int id);
CriterionResult run_criterion(int id, const CheckOptions& options);
CheckReport run_checks(const CheckOptions& options);

}  // namespace kglab::lab
