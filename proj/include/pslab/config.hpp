#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pslab/field.hpp"
#include "pslab/grid.hpp"
#include "pslab/test_function.hpp"

namespace pslab {

enum class ExperimentKind { sigma_sweep, charfn, count_fit, fkg_check };

const char* to_string(ExperimentKind kind);

// A config file failed validation. `parameter` names the offending field.
struct config_error : std::runtime_error {
    std::string parameter;
    config_error(const std::string& msg, std::string param)
        : std::runtime_error(msg), parameter(std::move(param)) {}
};

// One experiment run, fully determined: rerunning an identical config yields
// byte-identical outputs.
struct ExperimentConfig {
    ExperimentKind experiment;
    FieldSpec spec;
    std::optional<TestFunction> f;
    std::vector<double> t_values;
    std::vector<std::int64_t> n_values;
    std::optional<BoxRegion> box;
    std::int64_t replicates = 10000;
    std::uint64_t master_seed = 0;
    std::string out_dir = "out";
};

// Parses the JSON config file (grammar documented in the README) and checks
// that every field the chosen experiment needs is present and valid.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// Canonical serialization of the effective config (sorted keys, shortest
// round-trip numbers); its FNV-1a hash identifies the run in the manifest.
std::string canonical_config(const ExperimentConfig& config);

}  // namespace pslab
