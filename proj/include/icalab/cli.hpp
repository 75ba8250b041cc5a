#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icalab/experiments.hpp"

namespace icalab {

inline constexpr const char* kToolVersion = "1.0.0";

// Overrides shared by all commands; unset fields fall back to the config file
// and then to desk-scale defaults.
struct CliCommon {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::optional<std::string> preset;
    bool desk_scale = false;
    bool overwrite = false;
};

// generate: dataset files (binary + CSV) and a manifest.
int cmd_generate(const CliCommon& opts);

// experiment <name>, name in {precision, dimension, diversity, sgd,
// diagnostics, calibrate}: records CSV, fit summary JSON, plot-data, manifest.
int cmd_experiment(const std::string& name, const CliCommon& opts);

// verify: built-in oracle suite; prints one line per check.
int cmd_verify(bool inject_gradient_fault = false);

// plan: wraps plan_sample_size.
int cmd_plan(std::size_t d, double delta, double target_eps);

// FNV-1a 64 content hash (hex) of a file, used by the manifest.
std::string file_hash_hex(const std::string& path);

}  // namespace icalab
