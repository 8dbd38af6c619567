#include "fracmono/scenario.hpp"

#include "fracmono/errors.hpp"
#include "fracmono/forward.hpp"
#include "fracmono/reconstruct.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fracmono {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ConfigError(field + ": " + msg);
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "must be a number");
    return v.get<double>();
}

double need_number(const json& obj, const std::string& prefix, const char* key) {
    const json* v = find(obj, key);
    if (!v) fail(prefix + "." + key, "missing required field");
    return as_number(*v, prefix + "." + key);
}

std::array<double, 2> as_interval(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) fail(path, "must be a two-element array [lo, hi]");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

std::vector<std::array<double, 3>> parse_potential(const json& v, const std::string& path,
                                                   const GridSpec& grid) {
    if (v.is_object()) {
        if (const json* c = find(v, "constant")) {
            const double value = as_number(*c, path + ".constant");
            if (value < 0.0) fail(path + ".constant", "potential values must be nonnegative");
            return {{grid.omega_lo, grid.omega_hi, value}};
        }
        if (const json* p = find(v, "pieces")) {
            if (!p->is_array() || p->empty()) fail(path + ".pieces", "must be a nonempty array");
            std::vector<std::array<double, 3>> pieces;
            pieces.reserve(p->size());
            for (std::size_t i = 0; i < p->size(); ++i) {
                const std::string at = path + ".pieces[" + std::to_string(i) + "]";
                const json& row = (*p)[i];
                if (!row.is_array() || row.size() != 3)
                    fail(at, "must be a three-element array [lo, hi, value]");
                std::array<double, 3> piece = {as_number(row[0], at + "[0]"),
                                               as_number(row[1], at + "[1]"),
                                               as_number(row[2], at + "[2]")};
                if (!(piece[0] < piece[1])) fail(at, "piece interval is empty");
                if (piece[2] < 0.0) fail(at, "potential values must be nonnegative");
                pieces.push_back(piece);
            }
            return pieces;
        }
    }
    fail(path, "must be an object with \"constant\" or \"pieces\"");
}

void check_pixel_constant(const PixelPartition& part, const Potential& q,
                          const std::string& field) {
    for (std::size_t p = 0; p < part.count(); ++p) {
        const auto [begin, end] = part.ranges[p];
        for (std::size_t i = begin + 1; i < end; ++i)
            if (q.values[i] != q.values[begin])
                fail(field, "must be constant on every pixel; pixel " + std::to_string(p) +
                                " of the " + std::to_string(part.count()) +
                                "-pixel partition sees two values");
    }
}

} // namespace

std::string content_hash(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("scenario: cannot open file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();

    json root;
    try {
        root = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario: invalid JSON in " + path + ": " + e.what());
    }
    if (!root.is_object()) fail("scenario", "top level must be a JSON object");

    Scenario sc;
    sc.digest = content_hash(bytes);
    sc.source_path = path;

    const json* version = find(root, "schema_version");
    if (!version) fail("schema_version", "missing required field");
    if (!version->is_number_integer() || version->get<int>() != 1)
        fail("schema_version", "unsupported version; this build reads version 1");
    sc.schema_version = 1;

    if (const json* units = find(root, "units")) {
        if (!units->is_string() || units->get<std::string>() != "dimensionless")
            fail("units", "this solver works in dimensionless variables; "
                          "expected \"dimensionless\"");
    }

    if (const json* cmd = find(root, "command")) {
        if (!cmd->is_string()) fail("command", "must be a string");
        sc.command = cmd->get<std::string>();
    }

    const json* grid = find(root, "grid");
    if (!grid || !grid->is_object()) fail("grid", "missing required object");
    {
        const json* omega = find(*grid, "omega");
        if (!omega) fail("grid.omega", "missing required field");
        const auto iv = as_interval(*omega, "grid.omega");
        sc.grid.omega_lo = iv[0];
        sc.grid.omega_hi = iv[1];
        sc.grid.box_radius = need_number(*grid, "grid", "box_radius");
        sc.grid.spacing = need_number(*grid, "grid", "spacing");
        sc.grid.order = need_number(*grid, "grid", "order");
        const json* windows = find(*grid, "windows");
        if (!windows || !windows->is_array() || windows->empty())
            fail("grid.windows", "must be a nonempty array of [lo, hi] intervals");
        sc.grid.windows.clear();
        for (std::size_t w = 0; w < windows->size(); ++w) {
            const auto iv2 =
                as_interval((*windows)[w], "grid.windows[" + std::to_string(w) + "]");
            sc.grid.windows.push_back({iv2[0], iv2[1]});
        }
        if (const json* cap = find(*grid, "max_box_nodes")) {
            if (!cap->is_number_unsigned()) fail("grid.max_box_nodes", "must be a nonnegative integer");
            sc.grid.max_box_nodes = cap->get<std::size_t>();
        }
    }

    const json* q0 = find(root, "q0");
    if (!q0) fail("q0", "missing required field");
    sc.q0_pieces = parse_potential(*q0, "q0", sc.grid);
    if (const json* q1 = find(root, "q1")) {
        sc.q1_pieces = parse_potential(*q1, "q1", sc.grid);
        sc.has_q1 = true;
    }

    if (const json* pixels = find(root, "pixels")) {
        if (!pixels->is_number_unsigned() || pixels->get<std::size_t>() == 0)
            fail("pixels", "must be a positive integer");
        sc.pixel_count = pixels->get<std::size_t>();
    }

    if (const json* tol = find(root, "tolerances")) {
        if (!tol->is_object()) fail("tolerances", "must be an object");
        if (const json* v = find(*tol, "tol_rel")) {
            sc.tol.tol_rel = as_number(*v, "tolerances.tol_rel");
            if (!(sc.tol.tol_rel > 0.0)) fail("tolerances.tol_rel", "must be positive");
        }
        if (const json* v = find(*tol, "bisect_tol"))
            sc.tol.bisect_tol = as_number(*v, "tolerances.bisect_tol");
        if (const json* v = find(*tol, "alpha_range")) {
            const auto iv = as_interval(*v, "tolerances.alpha_range");
            if (!(iv[0] >= 0.0) || !(iv[1] > iv[0]))
                fail("tolerances.alpha_range", "need 0 <= lo < hi");
            sc.tol.alpha_lo = iv[0];
            sc.tol.alpha_hi = iv[1];
        }
        if (const json* v = find(*tol, "alpha_cap")) {
            sc.tol.alpha_cap = as_number(*v, "tolerances.alpha_cap");
            if (!(sc.tol.alpha_cap > 0.0)) fail("tolerances.alpha_cap", "must be positive");
        }
        if (const json* v = find(*tol, "alpha_threshold")) {
            sc.tol.alpha_threshold = as_number(*v, "tolerances.alpha_threshold");
            if (!(sc.tol.alpha_threshold >= 0.0))
                fail("tolerances.alpha_threshold", "must be nonnegative");
        }
        if (const json* v = find(*tol, "lambda_sweep")) {
            if (!v->is_array() || v->empty())
                fail("tolerances.lambda_sweep", "must be a nonempty array");
            sc.tol.lambda_sweep.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                const double lam =
                    as_number((*v)[i], "tolerances.lambda_sweep[" + std::to_string(i) + "]");
                if (!(lam > 0.0)) fail("tolerances.lambda_sweep", "entries must be positive");
                if (!sc.tol.lambda_sweep.empty() && !(lam < sc.tol.lambda_sweep.back()))
                    fail("tolerances.lambda_sweep", "entries must be strictly decreasing");
                sc.tol.lambda_sweep.push_back(lam);
            }
        }
    }

    if (const json* trials = find(root, "trials")) {
        if (!trials->is_number_unsigned() || trials->get<std::size_t>() == 0)
            fail("trials", "must be a positive integer");
        sc.trials = trials->get<std::size_t>();
    }
    if (const json* seed = find(root, "seed")) {
        if (!seed->is_number_unsigned()) fail("seed", "must be a nonnegative integer");
        sc.seed = seed->get<std::uint64_t>();
    }
    if (const json* rng = find(root, "rng")) {
        if (!rng->is_string()) fail("rng", "must be a string");
        sc.rng = rng->get<std::string>();
    }
    if (sc.rng != "mt19937_64")
        fail("rng", "unsupported generator \"" + sc.rng +
                        "\"; trials replay only with \"mt19937_64\"");

    if (const json* mode = find(root, "mode")) {
        if (!mode->is_string()) fail("mode", "must be a string");
        sc.mode = mode->get<std::string>();
        if (sc.mode != "indefinite" && sc.mode != "definite")
            fail("mode", "must be \"indefinite\" or \"definite\", got \"" + sc.mode + "\"");
    }
    if (const json* sign = find(root, "sign")) {
        if (!sign->is_number_integer()) fail("sign", "must be an integer");
        sc.sign = sign->get<int>();
        if (sc.sign != 1 && sc.sign != -1) fail("sign", "must be 1 or -1");
    }

    if (const json* localize = find(root, "localize")) {
        if (!localize->is_object()) fail("localize", "must be an object");
        const json* mask = find(*localize, "mask");
        if (!mask) fail("localize.mask", "missing required field");
        const auto iv = as_interval(*mask, "localize.mask");
        if (!(iv[0] < iv[1])) fail("localize.mask", "interval is empty");
        sc.mask_lo = iv[0];
        sc.mask_hi = iv[1];
        sc.has_mask = true;
    }

    if (const json* out = find(root, "output_dir")) {
        if (!out->is_string()) fail("output_dir", "must be a string");
        sc.output_dir = out->get<std::string>();
    }
    if (const json* v = find(root, "max_rel_error")) {
        sc.max_rel_error = as_number(*v, "max_rel_error");
        if (!(sc.max_rel_error > 0.0)) fail("max_rel_error", "must be positive");
    }
    if (const json* v = find(root, "min_final_ratio")) {
        sc.min_final_ratio = as_number(*v, "min_final_ratio");
        if (!(sc.min_final_ratio > 0.0)) fail("min_final_ratio", "must be positive");
    }
    return sc;
}

std::vector<std::size_t> mask_nodes(const Scenario& sc, const Grid& grid) {
    std::vector<std::size_t> nodes;
    const double tol = 1e-9 * grid.spec.spacing;
    for (const std::size_t i : grid.interior)
        if (grid.x[i] >= sc.mask_lo - tol && grid.x[i] <= sc.mask_hi + tol) nodes.push_back(i);
    return nodes;
}

void validate_for_command(const Scenario& sc, const std::string& command) {
    // Grid problems surface here with their own field-level messages.
    const Grid grid = build_grid(sc.grid);
    const Potential q0 = piecewise_potential(grid, sc.q0_pieces);

    const bool needs_pixels = command == "recon-potential" || command == "recon-shape";
    if (needs_pixels) {
        if (sc.pixel_count == 0) fail("pixels", "required by command " + command);
        if (sc.pixel_count > grid.interior.size())
            fail("pixels", "exceeds the number of interior nodes (" +
                               std::to_string(grid.interior.size()) + ")");
        const PixelPartition part = PixelPartition::uniform(grid.interior.size(), sc.pixel_count);
        check_pixel_constant(part, q0, "q0");
        if (sc.has_q1)
            check_pixel_constant(part, piecewise_potential(grid, sc.q1_pieces), "q1");
    }

    if (command == "recon-shape") {
        if (!sc.has_q1) fail("q1", "required by command recon-shape");
        if (sc.mode.empty())
            fail("mode", "required by command recon-shape (\"indefinite\" or \"definite\")");
    }

    if (command == "localize") {
        if (!sc.has_mask) fail("localize.mask", "required by command localize");
        const std::size_t selected = mask_nodes(sc, grid).size();
        if (selected == 0) fail("localize.mask", "selects no interior nodes");
        if (selected == grid.interior.size())
            fail("localize.mask", "selects the whole interior; the complement is empty");
    }
}

} // namespace fracmono
