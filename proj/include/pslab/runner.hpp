#pragma once

#include <string>
#include <vector>

#include "pslab/config.hpp"

namespace pslab {

// Runs one experiment: computes deterministically, then writes the output
// files plus a manifest.json recording the config hash, seed and artifact
// version. Returns the written paths (manifest last). Throws pslab errors on
// invalid configs or infeasible requests.
std::vector<std::string> run_experiment(const ExperimentConfig& config);

}  // namespace pslab
