#pragma once

#include "fracmono/discretize.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fracmono {

struct ScenarioTolerances {
    double tol_rel = 1e-9;
    double bisect_tol = 0.0;       // <= 0 selects the bisection default
    double alpha_lo = 0.0;
    double alpha_hi = 8.0;
    double alpha_cap = 0.0;        // <= 0 selects the data-driven cap
    double alpha_threshold = -1.0; // < 0 selects 10 * tol_rel
    std::vector<double> lambda_sweep{1e-1, 1e-3, 1e-5};
};

// Parsed scenario file. Potentials are piecewise constant over [omega_lo, omega_hi];
// q1 is optional (commands that only need a reference potential leave it absent).
struct Scenario {
    int schema_version = 1;
    std::string command;
    GridSpec grid;
    std::vector<std::array<double, 3>> q0_pieces;
    std::vector<std::array<double, 3>> q1_pieces;
    bool has_q1 = false;
    std::size_t pixel_count = 0;
    ScenarioTolerances tol;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string rng = "mt19937_64";
    std::string mode;    // recon-shape: "indefinite" or "definite"
    int sign = 1;        // definite mode: +1 inclusion above q0, -1 below
    bool has_mask = false;
    double mask_lo = 0.0, mask_hi = 0.0; // localize: interval selecting interior nodes
    std::string output_dir = "out";
    double max_rel_error = 0.0;  // recon-potential acceptance bound, 0 = not checked
    double min_final_ratio = 0.0; // localize acceptance bound, 0 = not checked
    std::string digest;           // content hash of the scenario file
    std::string source_path;
};

Scenario load_scenario(const std::string& path);

// Command-specific requirements that go beyond schema shape: presence of q1,
// pixel counts, piece boundaries aligned to pixel boundaries, mode and mask.
void validate_for_command(const Scenario& sc, const std::string& command);

// Interior nodes selected by the scenario's localize mask interval.
std::vector<std::size_t> mask_nodes(const Scenario& sc, const Grid& grid);

// 64-bit FNV-1a over a byte string, rendered as 16 hex digits.
std::string content_hash(const std::string& bytes);

} // namespace fracmono
