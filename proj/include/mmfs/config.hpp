#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "mmfs/data.hpp"
#include "mmfs/search.hpp"

namespace mmfs {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scriptable exit codes for batch experiments.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitRuntimeError = 4;

struct ExperimentConfig {
    // Exactly one dataset source: a CSV manifest or a synthetic task.
    std::string manifest;
    bool synthetic = false;
    SyntheticTask task = SyntheticTask::binary;
    std::uint64_t data_seed = 0;

    std::string test_manifest;  // optional held-out set for the final report
    std::filesystem::path out_dir = "out";
    std::string preset;         // "", "paper" or "desk"
    NicheConfig niche;

    void validate() const;
};

/// Named budgets: "paper" is the full published schedule (6 niches, automatic
/// population/generation sizing), "desk" a reduced one (2 niches, pop 50,
/// gen 100) for quick runs and CI.
void apply_preset(ExperimentConfig& cfg, const std::string& name);

/// Flat `section.key = value` text config. Unknown keys and malformed values
/// raise ConfigError naming the key.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
void save_experiment_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

/// Mask files: one line per view, `ViewName: name1,name2,...` with selected
/// feature names. Reading matches by name, so column reordering is harmless.
void write_mask_file(const std::filesystem::path& path, const MultiViewDataset& dataset,
                     const std::vector<std::uint8_t>& global_mask);
std::vector<std::uint8_t> read_mask_file(const std::filesystem::path& path,
                                         const MultiViewDataset& dataset);

}  // namespace mmfs
