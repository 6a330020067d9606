#pragma once

#include <string>

#include "kglab/lab/config.hpp"
#include "kglab/lab/persist.hpp"

namespace kglab::lab {

// Runs config.experiment into config.output_dir/<experiment> and writes manifest.json there.
RunManifest run_experiment(const LabConfig& config);

}  // namespace kglab::lab
