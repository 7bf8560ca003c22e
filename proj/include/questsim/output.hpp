#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "questsim/config.hpp"
#include "questsim/scenario.hpp"

namespace qsim::output {

inline constexpr const char* kToolVersion = "0.3.0";

enum class Format { csv, json };

/// Header cells are "name [unit]"; numbers use %.12g; LF line endings.
std::string render_csv(const scenario::Table& t);
std::string render_json(const scenario::Table& t);
std::string render_summary(const scenario::RunOutput& run);

struct FileEntry {
    std::string name;
    std::string sha256;
    std::uint64_t bytes = 0;
};

/// Deterministic: wall-clock timing goes to timing.json, not here.
struct Manifest {
    std::string tool_version;
    std::string subcommand;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string format;
    bool checks_passed = true;
    std::vector<FileEntry> files;
};

std::string render_manifest(const Manifest& m);
Manifest parse_manifest(const std::string& text);
Manifest read_manifest(const std::string& path);

/// Writes every table, summary.json, config.txt, manifest.json and timing.json
/// into dir (created if missing).
Manifest write_run(const scenario::RunOutput& run, const config::ScenarioConfig& cfg, const std::string& dir,
                   Format format, double elapsed_seconds);

}  // namespace qsim::output
