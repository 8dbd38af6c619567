#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracmono {

struct CheckOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct FileEntry {
    std::string path; // relative to the output directory
    std::string hash; // fnv1a-64 of the file bytes
};

// One run, one report. Written as report.json into the output directory on
// every exit path that gets past scenario validation, including failures.
struct RunReport {
    std::string command;
    std::string scenario_path;
    std::string scenario_digest;
    std::string simd;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double wall_ms = 0.0;
    std::vector<CheckOutcome> checks;
    std::vector<std::string> warnings;
    std::vector<FileEntry> files;
    int exit_code = 0;
    std::string error;

    void check(const std::string& name, bool pass, const std::string& detail);
    bool all_passed() const;
};

// Registers the file in the manifest (hash of its current bytes) after it was
// written. Path is stored relative to dir.
void record_file(RunReport& report, const std::string& dir, const std::string& name);

void write_report(const RunReport& report, const std::string& dir);

// Two-column curve CSV: header then one "x,value" row per point, %.17g.
void write_curve_csv(const std::string& path, const std::string& x_name,
                     const std::string& y_name, const std::vector<double>& x,
                     const std::vector<double>& y);

// Per-pixel table used by the reconstruction commands. Column names besides
// the first three are caller-chosen; extra holds one row per pixel.
void write_pixel_csv(const std::string& path, const std::vector<std::string>& extra_names,
                     const std::vector<std::pair<std::size_t, std::size_t>>& ranges,
                     const std::vector<std::vector<double>>& extra);

} // namespace fracmono
