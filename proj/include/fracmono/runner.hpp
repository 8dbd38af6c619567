#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace fracmono {

struct RunOptions {
    std::string command;
    std::string scenario_path;
    std::string out_dir;       // empty: take the scenario's output_dir
    std::string mode_override; // recon-shape only: replaces the scenario's mode
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

// Loads and validates the scenario, dispatches the command, writes the report
// and all CSV artifacts, and maps failures to the documented exit codes:
// 0 success, 1 check failed, 2 configuration, 3 numerical.
int run_command(const RunOptions& opts);

} // namespace fracmono
