#include "fracmono/report.hpp"

#include "fracmono/errors.hpp"
#include "fracmono/scenario.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fracmono {

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot open output file " + path);
    return out;
}

} // namespace

void RunReport::check(const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
}

bool RunReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void record_file(RunReport& report, const std::string& dir, const std::string& name) {
    std::ifstream in(dir + "/" + name, std::ios::binary);
    if (!in) throw ResourceError("emitted file vanished before hashing: " + name);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    report.files.push_back({name, content_hash(bytes.str())});
}

void write_report(const RunReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["command"] = report.command;
    j["scenario"] = report.scenario_path;
    j["scenario_digest"] = report.scenario_digest;
    j["simd"] = report.simd;
    j["seed"] = report.seed;
    j["threads"] = report.threads;
    j["wall_ms"] = report.wall_ms;
    j["exit_code"] = report.exit_code;
    if (!report.error.empty()) j["error"] = report.error;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks)
        j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["warnings"] = report.warnings;
    j["files"] = nlohmann::json::array();
    for (const auto& f : report.files)
        j["files"].push_back({{"path", f.path}, {"hash", f.hash}});

    auto out = open_out(dir + "/report.json");
    out << j.dump(2) << "\n";
}

void write_curve_csv(const std::string& path, const std::string& x_name,
                     const std::string& y_name, const std::vector<double>& x,
                     const std::vector<double>& y) {
    if (x.size() != y.size()) throw ArgumentError("curve columns differ in length");
    auto out = open_out(path);
    out << x_name << "," << y_name << "\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << g17(x[i]) << "," << g17(y[i]) << "\n";
}

void write_pixel_csv(const std::string& path, const std::vector<std::string>& extra_names,
                     const std::vector<std::pair<std::size_t, std::size_t>>& ranges,
                     const std::vector<std::vector<double>>& extra) {
    for (const auto& column : extra)
        if (column.size() != ranges.size())
            throw ArgumentError("pixel table columns differ in length");
    auto out = open_out(path);
    out << "pixel,node_begin,node_end";
    for (const auto& name : extra_names) out << "," << name;
    out << "\n";
    for (std::size_t p = 0; p < ranges.size(); ++p) {
        out << p << "," << ranges[p].first << "," << ranges[p].second;
        for (const auto& column : extra) out << "," << g17(column[p]);
        out << "\n";
    }
}

} // namespace fracmono
