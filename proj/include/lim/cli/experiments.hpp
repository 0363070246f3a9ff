#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lim/cli/config.hpp"

namespace lim {

struct ExperimentInfo {
    std::string id;
    std::string reproduces;  // table or figure
    std::string summary;
    std::vector<ParamDef> params;  // experiment-specific keys
};

const std::vector<ExperimentInfo>& catalog();
// nullptr for an unknown id.
const ExperimentInfo* find_experiment(const std::string& id);
// Keys shared by every experiment (experiment, seed, output) followed by the experiment's own.
std::vector<ParamDef> full_schema(const ExperimentInfo& e);
void print_catalog(std::ostream& os);
// A commented config file listing every key with its default.
std::string config_template(const ExperimentInfo& e);

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;  // 0 means all cores
    bool paper_scale = false;
    std::optional<std::string> out_dir;
};

struct RunReport {
    std::string id;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::vector<std::string> files;  // data CSVs, then the manifest
    double wall_seconds = 0;
};

// Static checks only: syntax, unknown keys, types, ranges, cross-key rules.
std::vector<Diagnostic> validate_config(const Config& cfg);
std::vector<Diagnostic> validate_config_text(const std::string& text);

// Throws ConfigError when validation fails; errors raised while running are
// rethrown with the experiment id prefixed.
RunReport run_experiment(const Config& cfg, const RunOptions& opt);

// 64-bit FNV-1a, used to derive per-task rng streams from labels.
std::uint64_t stream_tag(const std::string& label);

} // namespace lim
