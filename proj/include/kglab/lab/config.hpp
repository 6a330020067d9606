#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kglab/dynamics.hpp"
#include "kglab/grid.hpp"
#include "kglab/manifold.hpp"

namespace kglab::lab {

struct WeightSettings {
  bool from_delta = true;  // A = 1/delta, B = delta^{-1/4} with the run's measured tube radius
  double A = 1000.0;
  double B = 5.0;
  double gamma = 0.05;
};

// Perturbation used by the shoot/decay/virial_audit recipes.
struct PerturbationSettings {
  std::string kind = "random";  // random | zero | y_minus
  double size = 1e-3;
  int count = 1;                // seeds seed, seed+1, ...
};

struct LabConfig {
  ModelParams model;
  IntegratorConfig integrator;
  WeightSettings weights;
  ShootingConfig shooting;
  PerturbationSettings perturbation;
  std::string output_dir = "lab_out";
  std::string experiment = "spectrum";
  std::uint64_t seed = 1;

  int spectrum_count = 4;
  std::vector<double> sweep_alphas{1.25, 1.5, 2.0, 3.0};
  int lipschitz_pairs = 6;
  std::vector<double> lipschitz_deltas{1e-2, 1e-3};

  void validate() const;
};

const std::vector<std::string>& recipe_names();

// key = value lines, '#' comments, dotted section keys. Unknown keys throw ConfigError.
LabConfig parse_config(const std::string& text);
LabConfig load_config(const std::string& path);
// Every key with its current value, sorted; parse_config(render(c)) reproduces c.
std::map<std::string, std::string> snapshot(const LabConfig& config);
std::string render(const LabConfig& config);

}  // namespace kglab::lab
