#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "dlas/common.hpp"

namespace dlas {

/// Parsed, validated run configuration. The config is a single JSON document
/// with a versioned schema; unknown fields anywhere are errors.
struct RunConfig {
    int schema_version = 1;
    std::string preset;
    std::uint64_t seed = 1;
    int workers = 1;
    AssertLevel asserts = AssertLevel::invariants;
    double significance = 0.01;
    bool invert_tracer_priority = false;
    std::string out_dir = "out";
    std::string raw; // canonical config text, hashed into the manifest
    std::string preset_json;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> assert_level;
    std::optional<std::string> out_dir;
};

void apply_overrides(RunConfig& cfg, const CliOverrides& o);

/// Executes the configured preset and writes summary.json, replicas.csv,
/// stoploss.tsv, manifest.json to the output directory.
/// Returns the process exit code (0 ok, 2 assertion violation, 3
/// statistical falsification).
int run_preset(const RunConfig& cfg);

/// Direct oracle access: enumerates the configured instance exactly and
/// writes distribution.csv plus summary.json.
int run_enumerate(const RunConfig& cfg);

} // namespace dlas
