#include "fracmono/runner.hpp"

#include "fracmono/dtn.hpp"
#include "fracmono/errors.hpp"
#include "fracmono/forward.hpp"
#include "fracmono/order.hpp"
#include "fracmono/reconstruct.hpp"
#include "fracmono/report.hpp"
#include "fracmono/rng.hpp"
#include "fracmono/scenario.hpp"
#include "fracmono/simd.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace fracmono {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Everything the individual commands share: grid, lattice operator, reference
// potential, measurement nodes.
struct Stage {
    Grid grid;
    FracOperator op;
    Potential q0;
    std::vector<std::size_t> om;
    double h = 0.0;
};

Stage make_stage(const Scenario& sc) {
    Stage st;
    st.grid = build_grid(sc.grid);
    st.op = assemble_operator(st.grid, sc.grid.order, sc.grid.spacing);
    st.q0 = piecewise_potential(st.grid, sc.q0_pieces);
    st.om = st.grid.meas;
    st.h = sc.grid.spacing;
    return st;
}

std::vector<double> random_potential(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> q(n);
    for (double& v : q) v = rng.uniform(lo, hi);
    return q;
}

ExteriorData random_datum(Rng& rng, const Grid& grid, const std::vector<std::size_t>& nodes) {
    std::vector<double> f(nodes.size());
    for (double& v : f) v = rng.uniform(-1.0, 1.0);
    return make_exterior_data(grid, nodes, f);
}

DtnMatrix difference_map(const DtnMatrix& l0, const DtnMatrix& l1) {
    return {l1.m - l0.m, l0.nodes, l0.potential_id + "->" + l1.potential_id, l0.grid_id, 0.0};
}

// Pixels whose node set meets {q0 != q1}; the ground truth for shape commands.
std::vector<std::uint8_t> truth_pixels(const PixelPartition& part, const Potential& q0,
                                       const Potential& q1) {
    std::vector<std::uint8_t> truth(part.count(), 0);
    for (std::size_t p = 0; p < part.count(); ++p)
        for (std::size_t i = part.ranges[p].first; i < part.ranges[p].second; ++i)
            if (q0.values[i] != q1.values[i]) {
                truth[p] = 1;
                break;
            }
    return truth;
}

std::string set_string(const std::vector<std::uint8_t>& flags) {
    std::string out = "{";
    bool first = true;
    for (std::size_t p = 0; p < flags.size(); ++p) {
        if (!flags[p]) continue;
        if (!first) out += ",";
        out += std::to_string(p);
        first = false;
    }
    return out + "}";
}

void run_verify(const Scenario& sc, RunReport& report, const std::string& dir) {
    const Stage st = make_stage(sc);
    const std::size_t ni = st.grid.interior.size();
    Rng rng(report.seed);
    const double tol_rel = sc.tol.tol_rel;

    // Forward monotonicity of the measurement map under q0 <= q1.
    {
        double worst = 0.0;
        std::size_t fails = 0;
        for (std::size_t t = 0; t < sc.trials; ++t) {
            std::vector<double> q0 = random_potential(rng, ni, 0.5, 3.0);
            std::vector<double> q1 = q0;
            for (double& v : q1) v += rng.uniform(0.0, 3.0 - v);
            const SystemMatrix sys0 = assemble_system(st.op, make_potential(st.grid, q0));
            const SystemMatrix sys1 = assemble_system(st.op, make_potential(st.grid, q1));
            const LoewnerVerdict v =
                loewner_leq(dtn_matrix(sys0, st.om), dtn_matrix(sys1, st.om), tol_rel);
            worst = std::min(worst, v.lambda_min);
            if (!v.pass) ++fails;
        }
        report.check("loewner-monotonicity", fails == 0,
                     std::to_string(sc.trials) + " ordered pairs, worst lambda_min " +
                         fmt(worst));
    }

    // The four quadratic inequalities, random unordered pairs, plus exactness
    // at q0 = q1.
    {
        double worst_rel = 0.0;
        std::size_t fails = 0;
        std::vector<double> worst_by_trial;
        worst_by_trial.reserve(sc.trials);
        for (std::size_t t = 0; t < sc.trials; ++t) {
            const SystemMatrix sys0 = assemble_system(
                st.op, make_potential(st.grid, random_potential(rng, ni, 0.5, 3.0)));
            const SystemMatrix sys1 = assemble_system(
                st.op, make_potential(st.grid, random_potential(rng, ni, 0.5, 3.0)));
            const InequalityReport r =
                verify_monotonicity(sys0, sys1, random_datum(rng, st.grid, st.om));
            const double scale = std::max(r.scale, 1e-300);
            double trial_worst = 0.0;
            for (const double sl : r.slack) trial_worst = std::min(trial_worst, sl / scale);
            worst_by_trial.push_back(trial_worst);
            worst_rel = std::min(worst_rel, trial_worst);
            if (trial_worst < -1e-8) ++fails;
        }
        report.check("inequality-slacks", fails == 0,
                     std::to_string(sc.trials) + " random triples, worst relative slack " +
                         fmt(worst_rel));

        std::vector<double> trial_index(worst_by_trial.size());
        for (std::size_t i = 0; i < trial_index.size(); ++i)
            trial_index[i] = static_cast<double>(i);
        write_curve_csv(dir + "/slacks.csv", "trial", "worst_relative_slack", trial_index,
                        worst_by_trial);
        record_file(report, dir, "slacks.csv");

        const Potential q = make_potential(st.grid, random_potential(rng, ni, 0.5, 3.0));
        const SystemMatrix sys = assemble_system(st.op, q);
        const InequalityReport same =
            verify_monotonicity(sys, sys, random_datum(rng, st.grid, st.om));
        double max_abs = 0.0;
        for (const double sl : same.slack) max_abs = std::max(max_abs, std::abs(sl));
        report.check("inequality-slacks-identical-pair", max_abs <= 1e-12,
                     "max |slack| " + fmt(max_abs) + " at q0 = q1");
    }

    // Two-sided derivative bounds on the measurement-map difference.
    {
        double worst = 0.0;
        std::size_t fails = 0;
        const std::size_t trials = std::max<std::size_t>(1, sc.trials / 2);
        for (std::size_t t = 0; t < trials; ++t) {
            std::vector<double> q0 = random_potential(rng, ni, 0.5, 3.0);
            std::vector<double> bump(ni);
            for (double& v : bump) v = rng.uniform(0.0, 1.5);
            std::vector<double> q1 = q0;
            for (std::size_t i = 0; i < ni; ++i) q1[i] += bump[i];

            const SystemMatrix sys0 = assemble_system(st.op, make_potential(st.grid, q0));
            const SystemMatrix sys1 = assemble_system(st.op, make_potential(st.grid, q1));
            const DtnMatrix diff =
                difference_map(dtn_matrix(sys0, st.om), dtn_matrix(sys1, st.om));
            const DtnMatrix hi = frechet_apply(solution_operator(sys0, st.om), bump, st.h);
            const DtnMatrix lo = frechet_apply(solution_operator(sys1, st.om), bump, st.h);
            const LoewnerVerdict upper = loewner_leq(diff, hi, tol_rel);
            const LoewnerVerdict lower = loewner_leq(lo, diff, tol_rel);
            worst = std::min({worst, upper.lambda_min, lower.lambda_min});
            if (!upper.pass || !lower.pass) ++fails;
        }
        report.check("derivative-sandwich", fails == 0,
                     std::to_string(trials) + " trials, worst lambda_min " + fmt(worst));
    }

    // A definite violation on a single pixel must be visible to the linearized
    // test: the derivative in a direction that decreases the potential cannot
    // stay positive semidefinite.
    {
        const SystemMatrix sys = assemble_system(st.op, constant_potential(st.grid, 2.0));
        const SolutionOperator s_op = solution_operator(sys, st.om);
        std::vector<double> down(ni, 0.0);
        const std::size_t lo = ni / 3, hi = std::max(lo + 1, (2 * ni) / 5);
        for (std::size_t i = lo; i < hi; ++i) down[i] = -0.5;
        const DtnMatrix der = frechet_apply(s_op, down, st.h);
        const double lmin = linalg::lambda_min_sym(der.m);
        const double floor = 1e-12 * std::max(linalg::frobenius_norm(der.m), 1e-300);
        report.check("linearized-converse-witness", lmin < -floor,
                     "lambda_min " + fmt(lmin) + " under a single-pixel decrease");
    }

    // Energy doubling between randomly perturbed pairs.
    {
        double worst_margin = std::numeric_limits<double>::infinity();
        std::size_t fails = 0, degenerate = 0;
        std::vector<double> ratios, bounds;
        for (std::size_t t = 0; t < sc.trials; ++t) {
            std::vector<double> q0 = random_potential(rng, ni, 0.5, 3.0);
            std::vector<double> q1 = q0;
            const std::size_t len = 1 + rng.index(std::min<std::size_t>(7, ni));
            const std::size_t start = rng.index(ni - len + 1);
            for (std::size_t i = start; i < start + len; ++i) q1[i] += rng.uniform(0.25, 2.0);

            const SystemMatrix sys0 = assemble_system(st.op, make_potential(st.grid, q0));
            const SystemMatrix sys1 = assemble_system(st.op, make_potential(st.grid, q1));
            const InequalityReport r =
                verify_doubling(sys0, sys1, random_datum(rng, st.grid, st.om));
            if (r.degenerate) {
                ++degenerate;
                continue;
            }
            ratios.push_back(r.ratio);
            bounds.push_back(r.bound);
            const double margin =
                std::min(std::log(r.bound / r.ratio), std::log(r.bound * r.ratio));
            worst_margin = std::min(worst_margin, margin);
            if (!r.within_bound) ++fails;
        }
        write_curve_csv(dir + "/doubling.csv", "ratio", "bound", ratios, bounds);
        record_file(report, dir, "doubling.csv");
        report.check("doubling-bound", fails == 0 && degenerate == 0,
                     std::to_string(sc.trials) + " trials, worst log-margin " +
                         fmt(worst_margin) +
                         (degenerate ? ", " + std::to_string(degenerate) + " degenerate" : ""));
    }
}

void run_forward(const Scenario& sc, RunReport& report, const std::string& dir) {
    const Stage st = make_stage(sc);
    const SystemMatrix sys = assemble_system(st.op, st.q0);
    std::vector<double> ones(st.om.size(), 1.0);
    const ExteriorData f = make_exterior_data(st.grid, st.om, ones);
    const Solution sol = solve_dirichlet(sys, f); // residual-checked internally

    write_curve_csv(dir + "/solution.csv", "x", "u", st.grid.x, sol.u);
    record_file(report, dir, "solution.csv");

    double interior_max = 0.0;
    for (const std::size_t i : st.grid.interior)
        interior_max = std::max(interior_max, std::abs(sol.u[i]));
    report.check("dirichlet-solve", true,
                 "unit window datum, max interior |u| " + fmt(interior_max));
}

void run_dtn(const Scenario& sc, RunReport& report, const std::string& dir) {
    const Stage st = make_stage(sc);
    const SystemMatrix sys0 = assemble_system(st.op, st.q0);
    const DtnMatrix l0 = dtn_matrix(sys0, st.om);

    write_matrix_csv(dir + "/dtn_q0.csv", l0.m);
    record_file(report, dir, "dtn_q0.csv");
    report.check("dtn-symmetry", true, "raw asymmetry " + fmt(l0.raw_asymmetry));

    const double lmin = linalg::lambda_min_sym(l0.m);
    const double tol = sc.tol.tol_rel * std::max(linalg::frobenius_norm(l0.m), 1e-14);
    report.check("dtn-psd", lmin >= -tol,
                 "lambda_min " + fmt(lmin) + " against tolerance " + fmt(tol));

    if (sc.has_q1) {
        const Potential q1 = piecewise_potential(st.grid, sc.q1_pieces);
        const SystemMatrix sys1 = assemble_system(st.op, q1);
        const DtnMatrix l1 = dtn_matrix(sys1, st.om);
        write_matrix_csv(dir + "/dtn_q1.csv", l1.m);
        record_file(report, dir, "dtn_q1.csv");

        bool ordered = true;
        for (std::size_t i = 0; i < st.q0.values.size(); ++i)
            if (st.q0.values[i] > q1.values[i]) ordered = false;
        if (ordered) {
            const LoewnerVerdict v = loewner_leq(l0, l1, sc.tol.tol_rel);
            std::ofstream out(dir + "/order.json", std::ios::binary);
            out << verdict_json(v, l0, l1).dump(2) << "\n";
            out.close();
            record_file(report, dir, "order.json");
            report.check("dtn-monotone-pair", v.pass, "lambda_min " + fmt(v.lambda_min));
        } else {
            report.warnings.push_back(
                "q0 <= q1 fails nodewise; skipping the order verdict on this pair");
        }
    }
}

void run_recon_potential(const Scenario& sc, RunReport& report, const std::string& dir,
                         unsigned threads) {
    const Stage st = make_stage(sc);
    report.warnings.push_back(
        "test potentials alpha*chi_pixel vanish off their pixel, outside the strict "
        "positivity hypothesis of the continuum theory; the discrete system stays "
        "coercive and the sweep is well defined");

    const SystemMatrix truth_sys = assemble_system(st.op, st.q0);
    const DtnMatrix measured = dtn_matrix(truth_sys, st.om);
    const PixelPartition part =
        PixelPartition::uniform(st.grid.interior.size(), sc.pixel_count);

    const PotentialResult rec =
        pixel_sup_reconstruct(measured, part, sc.tol.alpha_lo, sc.tol.alpha_hi,
                              sc.tol.bisect_tol, st.op, sc.tol.tol_rel, threads);

    std::vector<double> truth(part.count()), rel(part.count());
    std::vector<double> alpha_col(part.count()), iter_col(part.count()), clamp_col(part.count());
    double max_rel = 0.0;
    for (std::size_t p = 0; p < part.count(); ++p) {
        truth[p] = st.q0.values[part.ranges[p].first];
        rel[p] = std::abs(rec.alpha[p] - truth[p]) / std::max(std::abs(truth[p]), 1e-12);
        max_rel = std::max(max_rel, rel[p]);
        alpha_col[p] = rec.alpha[p];
        iter_col[p] = static_cast<double>(rec.iterations[p]);
        clamp_col[p] = rec.clamped_high[p] ? 1.0 : (rec.clamped_low[p] ? -1.0 : 0.0);
    }

    write_pixel_csv(dir + "/pixels.csv",
                    {"alpha", "truth", "rel_error", "order_tests", "clamped"}, part.ranges,
                    {alpha_col, truth, rel, iter_col, clamp_col});
    record_file(report, dir, "pixels.csv");

    if (sc.max_rel_error > 0.0) {
        std::string detail = "max relative error " + fmt(max_rel) + " against bound " +
                             fmt(sc.max_rel_error);
        for (std::size_t p = 0; p < part.count(); ++p)
            if (rel[p] > sc.max_rel_error)
                detail += "; pixel " + std::to_string(p) + ": alpha " + fmt(rec.alpha[p]) +
                          " vs " + fmt(truth[p]);
        report.check("pixel-recovery", max_rel <= sc.max_rel_error, detail);
    } else {
        report.check("pixel-sweep-complete", true, "max relative error " + fmt(max_rel));
    }
}

void run_recon_shape(const Scenario& sc, RunReport& report, const std::string& dir,
                     unsigned threads) {
    const Stage st = make_stage(sc);
    const Potential q1 = piecewise_potential(st.grid, sc.q1_pieces);
    const SystemMatrix sys0 = assemble_system(st.op, st.q0);
    const SystemMatrix sys1 = assemble_system(st.op, q1);
    const DtnMatrix delta = difference_map(dtn_matrix(sys0, st.om), dtn_matrix(sys1, st.om));
    const SolutionOperator s0 = solution_operator(sys0, st.om);
    const PixelPartition part =
        PixelPartition::uniform(st.grid.interior.size(), sc.pixel_count);
    const std::vector<std::uint8_t> truth = truth_pixels(part, st.q0, q1);
    const double tol = sc.tol.tol_rel * std::max(1.0, linalg::frobenius_norm(delta.m));

    if (sc.mode == "indefinite") {
        const double cap =
            sc.tol.alpha_cap > 0.0 ? sc.tol.alpha_cap : auto_alpha_cap(delta, s0, st.h);
        const ShapeResult shape =
            support_from_closed_sets(delta, s0, part, cap, tol, st.h, threads);

        std::vector<double> inside_col(part.count()), witness_col(part.count());
        for (std::size_t p = 0; p < part.count(); ++p) {
            inside_col[p] = shape.inside[p];
            witness_col[p] = shape.witness[p];
        }
        write_pixel_csv(dir + "/pixels.csv", {"inside", "witness_lambda_min"}, part.ranges,
                        {inside_col, witness_col});
        record_file(report, dir, "pixels.csv");

        report.check("support-exact", shape.inside == truth,
                     "reconstructed " + set_string(shape.inside) + ", seeded " +
                         set_string(truth) + ", alpha_cap " + fmt(cap));
        return;
    }

    // Definite mode. The per-pixel test only sees sign*(q1 - q0), so the
    // scenario must actually be one-signed.
    for (std::size_t i = 0; i < q1.values.size(); ++i)
        if (sc.sign * (q1.values[i] - st.q0.values[i]) < 0.0)
            throw ConfigError("sign: definite mode needs sign*(q1 - q0) >= 0 on every "
                              "interior node");
    const double cap =
        sc.tol.alpha_cap > 0.0 ? sc.tol.alpha_cap : auto_alpha_cap(delta, s0, st.h);
    const double threshold =
        sc.tol.alpha_threshold >= 0.0 ? sc.tol.alpha_threshold : 10.0 * sc.tol.tol_rel;
    const ShapeResult shape =
        inner_support_definite(delta, sc.sign, s0, part, tol, cap, threshold, st.h, threads);

    std::vector<double> inside_col(part.count()), alpha_col(part.count());
    for (std::size_t p = 0; p < part.count(); ++p) {
        inside_col[p] = shape.inside[p];
        alpha_col[p] = shape.witness[p];
    }
    write_pixel_csv(dir + "/pixels.csv", {"inside", "alpha_star"}, part.ranges,
                    {inside_col, alpha_col});
    record_file(report, dir, "pixels.csv");

    bool on_ok = true, off_ok = true;
    double worst_on = std::numeric_limits<double>::infinity(), worst_off = 0.0;
    for (std::size_t p = 0; p < part.count(); ++p) {
        const auto [begin, end] = part.ranges[p];
        if (truth[p]) {
            double amp = std::numeric_limits<double>::infinity();
            for (std::size_t i = begin; i < end; ++i)
                amp = std::min(amp, sc.sign * (q1.values[i] - st.q0.values[i]));
            const double floor_alpha = 0.8 * (0.5 * amp);
            worst_on = std::min(worst_on, shape.witness[p] - floor_alpha);
            if (shape.witness[p] < floor_alpha) on_ok = false;
        } else {
            worst_off = std::max(worst_off, shape.witness[p]);
            if (shape.witness[p] >= threshold) off_ok = false;
        }
    }
    report.check("inclusion-alpha-floor", on_ok,
                 "worst margin above 0.8*(amplitude/2): " + fmt(worst_on));
    report.check("exterior-below-threshold", off_ok,
                 "largest off-inclusion alpha* " + fmt(worst_off) + " vs threshold " +
                     fmt(threshold));
}

void run_localize(const Scenario& sc, RunReport& report, const std::string& dir) {
    const Stage st = make_stage(sc);
    const SystemMatrix sys = assemble_system(st.op, st.q0);
    const SolutionOperator s0 = solution_operator(sys, st.om);
    const std::vector<std::size_t> mask = mask_nodes(sc, st.grid);

    std::vector<double> lambdas, ratios, masses, rests;
    double worst_residual = 0.0;
    ExteriorData last_datum;
    for (const double lam : sc.tol.lambda_sweep) {
        const auto [datum, lr] = localized_potential(s0, mask, lam, st.grid);
        lambdas.push_back(lam);
        ratios.push_back(lr.ratio);
        masses.push_back(lr.energy_mask);
        rests.push_back(lr.energy_rest);
        worst_residual = std::max(worst_residual, lr.normal_residual);
        last_datum = datum;
    }

    std::ofstream out(dir + "/localize.csv", std::ios::binary);
    if (!out) throw ResourceError("cannot open output file " + dir + "/localize.csv");
    out << "lambda_reg,energy_mask,energy_rest,ratio\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", lambdas[i], masses[i],
                      rests[i], ratios[i]);
        out << buf;
    }
    out.close();
    record_file(report, dir, "localize.csv");

    std::vector<double> xs, fs;
    for (std::size_t k = 0; k < s0.column_nodes.size(); ++k) {
        xs.push_back(st.grid.x[s0.column_nodes[k]]);
        const auto it = std::lower_bound(st.grid.exterior.begin(), st.grid.exterior.end(),
                                         s0.column_nodes[k]);
        fs.push_back(last_datum.values[static_cast<std::size_t>(it - st.grid.exterior.begin())]);
    }
    write_curve_csv(dir + "/datum.csv", "x", "F", xs, fs);
    record_file(report, dir, "datum.csv");

    bool increasing = true;
    for (std::size_t i = 1; i < ratios.size(); ++i)
        if (!(ratios[i] > ratios[i - 1])) increasing = false;
    report.check("ratio-strictly-increasing", increasing,
                 "ratios " + [&] {
                     std::string s;
                     for (std::size_t i = 0; i < ratios.size(); ++i)
                         s += (i ? ", " : "") + fmt(ratios[i]);
                     return s;
                 }());
    report.check("normal-equations-residual", worst_residual <= 1e-10,
                 "worst relative residual " + fmt(worst_residual));
    if (sc.min_final_ratio > 0.0)
        report.check("final-ratio", ratios.back() >= sc.min_final_ratio,
                     fmt(ratios.back()) + " against required " + fmt(sc.min_final_ratio));
}

} // namespace

int run_command(const RunOptions& opts) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();

    RunReport report;
    report.command = opts.command;
    report.scenario_path = opts.scenario_path;
    report.threads = std::max(1u, opts.threads);
    report.simd = simd::kernels().name;

    std::string dir;
    const auto finish = [&](int code) {
        report.exit_code = code;
        report.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
        if (!dir.empty()) {
            try {
                write_report(report, dir);
            } catch (const std::exception& e) {
                std::cerr << "fracmono: failed to write report: " << e.what() << "\n";
            }
        }
        return code;
    };

    try {
        Scenario sc = load_scenario(opts.scenario_path);
        if (!opts.mode_override.empty()) {
            if (opts.mode_override != "indefinite" && opts.mode_override != "definite")
                throw ConfigError("mode: must be \"indefinite\" or \"definite\", got \"" +
                                  opts.mode_override + "\"");
            sc.mode = opts.mode_override;
        }
        validate_for_command(sc, opts.command);
        dir = opts.out_dir.empty() ? sc.output_dir : opts.out_dir;
        std::filesystem::create_directories(dir);
        report.scenario_digest = sc.digest;
        report.seed = opts.seed.value_or(sc.seed);
        if (!sc.command.empty() && sc.command != opts.command)
            report.warnings.push_back("scenario file declares command \"" + sc.command +
                                      "\", running \"" + opts.command + "\"");

        if (opts.command == "verify")
            run_verify(sc, report, dir);
        else if (opts.command == "forward")
            run_forward(sc, report, dir);
        else if (opts.command == "dtn")
            run_dtn(sc, report, dir);
        else if (opts.command == "recon-potential")
            run_recon_potential(sc, report, dir, report.threads);
        else if (opts.command == "recon-shape")
            run_recon_shape(sc, report, dir, report.threads);
        else if (opts.command == "localize")
            run_localize(sc, report, dir);
        else
            throw ArgumentError("unknown command \"" + opts.command + "\"");

        if (!report.all_passed()) {
            for (const auto& c : report.checks)
                if (!c.pass)
                    std::cerr << "fracmono: check failed: " << c.name << " (" << c.detail
                              << ")\n";
            return finish(1);
        }
        return finish(0);
    } catch (const ConfigError& e) {
        std::cerr << "fracmono: configuration error: " << e.what() << "\n";
        report.error = e.what();
        return finish(2);
    } catch (const ArgumentError& e) {
        std::cerr << "fracmono: invalid argument: " << e.what() << "\n";
        report.error = e.what();
        return finish(2);
    } catch (const ResourceError& e) {
        std::cerr << "fracmono: resource error: " << e.what() << "\n";
        report.error = e.what();
        return finish(2);
    } catch (const NumericalError& e) {
        std::cerr << "fracmono: numerical failure: " << e.what() << "\n";
        report.error = e.what();
        return finish(3);
    } catch (const std::exception& e) {
        std::cerr << "fracmono: unexpected failure: " << e.what() << "\n";
        report.error = e.what();
        return finish(3);
    }
}

} // namespace fracmono
