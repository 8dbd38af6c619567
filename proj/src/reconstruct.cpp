#include "fracmono/reconstruct.hpp"

#include "fracmono/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace fracmono {

namespace {

// Runs fn(0..count-1), optionally on a small pool. Each index writes only its
// own output slots, so the result is identical for any thread count.
void run_indexed(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t p = 0; p < count; ++p) fn(p);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t workers = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t p = next.fetch_add(1);
                if (p >= count) return;
                try {
                    fn(p);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void check_partition_matches(const PixelPartition& pixels, std::size_t interior_count) {
    if (pixels.ranges.empty() || pixels.ranges.back().second != interior_count)
        throw ArgumentError("pixel partition does not cover the interior it is applied to");
}

std::vector<std::size_t> nodes_in_range(const std::vector<std::size_t>& interior,
                                        std::size_t begin, std::size_t end) {
    return {interior.begin() + static_cast<std::ptrdiff_t>(begin),
            interior.begin() + static_cast<std::ptrdiff_t>(end)};
}

std::vector<std::size_t> nodes_outside_range(const std::vector<std::size_t>& interior,
                                             std::size_t begin, std::size_t end) {
    std::vector<std::size_t> out;
    out.reserve(interior.size() - (end - begin));
    for (std::size_t i = 0; i < begin; ++i) out.push_back(interior[i]);
    for (std::size_t i = end; i < interior.size(); ++i) out.push_back(interior[i]);
    return out;
}

struct RidgeSolve {
    std::vector<double> datum;    // coefficients on the measurement nodes
    std::vector<double> field;    // S * datum on the interior
    double normal_residual = 0.0; // relative, in the normal equations
};

// Solves (h S^T S + lambda I) F = h S^T t for an interior target t.
RidgeSolve ridge_least_squares(const SolutionOperator& s0, const std::vector<double>& target,
                               double lambda_reg, double h) {
    if (!(lambda_reg > 0.0))
        throw ArgumentError("ridge regularization weight must be positive");
    const linalg::Matrix st = linalg::transpose(s0.S);
    linalg::Matrix gram = st * s0.S;
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j)
            gram(i, j) = h * gram(i, j) + (i == j ? lambda_reg : 0.0);
    std::vector<double> rhs = linalg::matvec(st, target);
    for (double& v : rhs) v *= h;

    RidgeSolve out;
    out.datum = linalg::SpdFactor::factor(gram).solve(rhs);

    std::vector<double> residual = linalg::matvec(gram, out.datum);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= rhs[i];
    out.normal_residual = linalg::norm2(residual) / std::max(linalg::norm2(rhs), 1e-300);
    out.field = linalg::matvec(s0.S, out.datum);
    return out;
}

} // namespace

PixelPartition PixelPartition::uniform(std::size_t interior_count, std::size_t pixel_count) {
    if (pixel_count == 0) throw ArgumentError("pixel count must be positive");
    if (pixel_count > interior_count)
        throw ArgumentError("pixel count exceeds the number of interior nodes");
    PixelPartition part;
    part.ranges.reserve(pixel_count);
    for (std::size_t p = 0; p < pixel_count; ++p)
        part.ranges.emplace_back(p * interior_count / pixel_count,
                                 (p + 1) * interior_count / pixel_count);
    return part;
}

std::vector<std::size_t> PixelPartition::pixel_nodes(const Grid& grid, std::size_t p) const {
    if (p >= ranges.size()) throw ArgumentError("pixel index out of range");
    check_partition_matches(*this, grid.interior.size());
    return nodes_in_range(grid.interior, ranges[p].first, ranges[p].second);
}

std::vector<std::size_t> PixelPartition::complement_nodes(const Grid& grid, std::size_t p) const {
    if (p >= ranges.size()) throw ArgumentError("pixel index out of range");
    check_partition_matches(*this, grid.interior.size());
    return nodes_outside_range(grid.interior, ranges[p].first, ranges[p].second);
}

PotentialResult pixel_sup_reconstruct(const DtnMatrix& measured, const PixelPartition& pixels,
                                      double alpha_lo, double alpha_hi, double bisect_tol,
                                      const FracOperator& op, double tol_rel,
                                      unsigned threads) {
    if (!(alpha_lo >= 0.0)) throw ArgumentError("alpha range must start at a nonnegative value");
    if (!(alpha_hi > alpha_lo)) throw ArgumentError("alpha range is empty");
    if (measured.grid_id != op.grid.id())
        throw ArgumentError("measured map and operator were built on different grids");
    check_partition_matches(pixels, op.grid.interior.size());

    const std::size_t count = pixels.count();
    const double width_goal =
        bisect_tol > 0.0 ? bisect_tol : 1e-3 * (alpha_hi - alpha_lo);

    PotentialResult result;
    result.alpha.assign(count, alpha_lo);
    result.iterations.assign(count, 0);
    result.clamped_low.assign(count, 0);
    result.clamped_high.assign(count, 0);

    run_indexed(count, threads, [&](std::size_t p) {
        int evals = 0;
        const auto [begin, end] = pixels.ranges[p];
        const auto below_measurement = [&](double alpha) {
            ++evals;
            std::vector<double> values(op.grid.interior.size(), 0.0);
            for (std::size_t i = begin; i < end; ++i) values[i] = alpha;
            const SystemMatrix sys = assemble_system(op, make_potential(op.grid, values));
            const DtnMatrix trial = dtn_matrix(sys, measured.nodes);
            return loewner_leq(trial, measured, tol_rel).pass;
        };

        double lo = alpha_lo, hi = alpha_hi;
        if (below_measurement(hi)) {
            result.alpha[p] = hi;
            result.clamped_high[p] = 1;
        } else if (!below_measurement(lo)) {
            result.alpha[p] = lo;
            result.clamped_low[p] = 1;
        } else {
            while (hi - lo > width_goal && evals < 60) {
                const double mid = 0.5 * (lo + hi);
                if (below_measurement(mid))
                    lo = mid;
                else
                    hi = mid;
            }
            result.alpha[p] = lo;
        }
        result.iterations[p] = evals;
    });
    return result;
}

double auto_alpha_cap(const DtnMatrix& delta, const SolutionOperator& s0, double h) {
    const TestOperator whole = testing_operator(s0, s0.row_nodes, h);
    const std::vector<double> spectrum = linalg::eigenvalues_sym(whole.m);
    const double lambda_max = spectrum.back();
    if (!(lambda_max > 0.0))
        throw NumericalError("interior testing operator has no positive spectrum; "
                             "cannot derive an alpha cap from the data");
    const double cutoff = 0.1 * lambda_max;
    double lambda = lambda_max;
    for (double v : spectrum) {
        if (v > cutoff) {
            lambda = v;
            break;
        }
    }
    return std::max(2.0 * linalg::frobenius_norm(delta.m) / lambda, 1e-6);
}

ShapeResult support_from_closed_sets(const DtnMatrix& delta, const SolutionOperator& s0,
                                     const PixelPartition& pixels, double alpha_cap, double tol,
                                     double h, unsigned threads) {
    if (!(alpha_cap > 0.0)) throw ArgumentError("alpha cap must be positive");
    if (!(tol >= 0.0)) throw ArgumentError("tolerance must be nonnegative");
    check_partition_matches(pixels, s0.row_nodes.size());

    const std::size_t count = pixels.count();
    ShapeResult result;
    result.inside.assign(count, 0);
    result.witness.assign(count, 0.0);
    result.alpha_cap = alpha_cap;
    result.tol = tol;

    run_indexed(count, threads, [&](std::size_t p) {
        const auto [begin, end] = pixels.ranges[p];
        const TestOperator comp =
            testing_operator(s0, nodes_outside_range(s0.row_nodes, begin, end), h);
        const linalg::Matrix capped = alpha_cap * comp.m;
        const double lo_minus = linalg::lambda_min_sym(capped - delta.m);
        const double lo_plus = linalg::lambda_min_sym(capped + delta.m);
        result.witness[p] = std::min(lo_minus, lo_plus);
        const bool outside = lo_minus >= -tol && lo_plus >= -tol;
        result.inside[p] = outside ? 0 : 1;
    });
    return result;
}

ShapeResult inner_support_definite(const DtnMatrix& delta, int sign, const SolutionOperator& s0,
                                   const PixelPartition& pixels, double tol, double alpha_cap,
                                   double alpha_threshold, double h, unsigned threads) {
    if (sign != 1 && sign != -1) throw ArgumentError("sign must be +1 or -1");
    if (!(alpha_cap > 0.0)) throw ArgumentError("alpha cap must be positive");
    if (!(alpha_threshold >= 0.0)) throw ArgumentError("alpha threshold must be nonnegative");
    if (!(tol >= 0.0)) throw ArgumentError("tolerance must be nonnegative");
    check_partition_matches(pixels, s0.row_nodes.size());

    const linalg::Matrix signed_delta = sign > 0 ? delta.m : -1.0 * delta.m;
    const std::size_t count = pixels.count();
    const double width_goal = 1e-3 * alpha_cap;

    ShapeResult result;
    result.inside.assign(count, 0);
    result.witness.assign(count, 0.0);
    result.alpha_cap = alpha_cap;
    result.alpha_threshold = alpha_threshold;
    result.tol = tol;

    run_indexed(count, threads, [&](std::size_t p) {
        const auto [begin, end] = pixels.ranges[p];
        const TestOperator tp = testing_operator(s0, nodes_in_range(s0.row_nodes, begin, end), h);
        const auto dominated = [&](double alpha) {
            return linalg::lambda_min_sym(signed_delta - alpha * tp.m) >= -tol;
        };

        double star = 0.0;
        if (dominated(alpha_cap)) {
            star = alpha_cap;
        } else if (dominated(0.0)) {
            double lo = 0.0, hi = alpha_cap;
            int evals = 2;
            while (hi - lo > width_goal && evals < 60) {
                const double mid = 0.5 * (lo + hi);
                if (dominated(mid))
                    lo = mid;
                else
                    hi = mid;
                ++evals;
            }
            star = lo;
        }
        result.witness[p] = star;
        result.inside[p] = star > alpha_threshold ? 1 : 0;
    });
    return result;
}

std::pair<ExteriorData, LocalizeReport> localized_potential(const SolutionOperator& s0,
                                                            const std::vector<std::size_t>& mask,
                                                            double lambda_reg, const Grid& grid) {
    if (mask.empty()) throw ArgumentError("localization mask is empty");
    std::vector<bool> in_mask(s0.row_nodes.size(), false);
    for (std::size_t node : mask) {
        const auto it = std::lower_bound(s0.row_nodes.begin(), s0.row_nodes.end(), node);
        if (it == s0.row_nodes.end() || *it != node)
            throw ArgumentError("localization mask contains a node outside the interior");
        in_mask[static_cast<std::size_t>(it - s0.row_nodes.begin())] = true;
    }
    std::size_t mask_count = 0;
    for (bool b : in_mask) mask_count += b ? 1 : 0;
    if (mask_count == s0.row_nodes.size())
        throw ArgumentError("localization mask covers the whole interior; nothing to separate");

    const double h = grid.spec.spacing;
    std::vector<double> target(s0.row_nodes.size(), 0.0);
    const double level = 1.0 / (h * static_cast<double>(mask_count));
    for (std::size_t i = 0; i < target.size(); ++i)
        if (in_mask[i]) target[i] = level;

    RidgeSolve ridge = ridge_least_squares(s0, target, lambda_reg, h);

    double energy_mask = 0.0, energy_rest = 0.0;
    for (std::size_t i = 0; i < ridge.field.size(); ++i) {
        const double e = h * ridge.field[i] * ridge.field[i];
        (in_mask[i] ? energy_mask : energy_rest) += e;
    }
    if (!(energy_rest > 0.0))
        throw NumericalError("localized potential is degenerate: the field vanishes "
                             "off the mask and the energy ratio is undefined");

    const double root = std::sqrt(energy_rest);
    const double scale = std::sqrt(root); // fourth root of the complement energy
    for (double& v : ridge.datum) v /= scale;

    LocalizeReport report;
    report.energy_mask = energy_mask / root;
    report.energy_rest = energy_rest / root;
    report.ratio = energy_mask / energy_rest;
    report.normal_residual = ridge.normal_residual;
    return {make_exterior_data(grid, s0.column_nodes, ridge.datum), report};
}

std::pair<ExteriorData, double> runge_approximate(const SolutionOperator& s0,
                                                  const std::vector<double>& target,
                                                  double lambda_reg, const Grid& grid) {
    if (target.size() != s0.row_nodes.size())
        throw ArgumentError("target profile must give one value per interior node");
    const double h = grid.spec.spacing;
    const RidgeSolve ridge = ridge_least_squares(s0, target, lambda_reg, h);

    double err_sq = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double d = ridge.field[i] - target[i];
        err_sq += h * d * d;
    }
    return {make_exterior_data(grid, s0.column_nodes, ridge.datum), std::sqrt(err_sq)};
}

} // namespace fracmono
