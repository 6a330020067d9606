#pragma once

#include <stdexcept>
#include <string>

namespace kglab {

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScaleOrderViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BracketFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundaryContamination : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by evolve when |phi1| leaves the configured ceiling.
struct BlowupDetected : std::runtime_error {
  double time;
  BlowupDetected(double t, const std::string& what) : std::runtime_error(what), time(t) {}
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RecipeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kglab
