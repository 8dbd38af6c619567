#include "fracmono/forward.hpp"

#include "fracmono/errors.hpp"
#include "fracmono/simd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <sstream>

namespace fracmono {

namespace {

std::uint64_t fnv1a64(const void* bytes, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    std::uint64_t hash = seed;
    for (std::size_t i = 0; i < n; ++i) {
        hash ^= p[i];
        hash *= 0x100000001b3ull;
    }
    return hash;
}

} // namespace

std::string Potential::id() const {
    const std::uint64_t hash =
        values.empty() ? fnv1a64(nullptr, 0) : fnv1a64(values.data(), values.size() * sizeof(double));
    std::ostringstream os;
    os << "q:" << std::hex << hash;
    return os.str();
}

Potential make_potential(const Grid& grid, std::vector<double> interior_values) {
    if (interior_values.size() != grid.interior.size())
        throw ArgumentError("potential: expected " + std::to_string(grid.interior.size()) +
                            " interior values, got " + std::to_string(interior_values.size()));
    double mn = std::numeric_limits<double>::infinity();
    for (double v : interior_values) {
        if (!std::isfinite(v) || v < 0.0)
            throw ArgumentError("potential: values must be finite and nonnegative");
        mn = std::min(mn, v);
    }
    Potential q;
    q.values = std::move(interior_values);
    q.strict_positive = mn > 0.0;
    return q;
}

Potential constant_potential(const Grid& grid, double value) {
    return make_potential(grid, std::vector<double>(grid.interior.size(), value));
}

Potential piecewise_potential(const Grid& grid, const std::vector<std::array<double, 3>>& pieces) {
    if (pieces.empty()) throw ArgumentError("potential pieces: empty");
    const double tol = 1e-9 * grid.spec.spacing;
    if (std::abs(pieces.front()[0] - grid.spec.omega_lo) > tol ||
        std::abs(pieces.back()[1] - grid.spec.omega_hi) > tol)
        throw ArgumentError("potential pieces: must cover [omega_lo, omega_hi]");
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        if (!(pieces[k][0] < pieces[k][1]))
            throw ArgumentError("potential pieces: piece " + std::to_string(k) + " is empty");
        if (k + 1 < pieces.size() && std::abs(pieces[k][1] - pieces[k + 1][0]) > tol)
            throw ArgumentError("potential pieces: gap or overlap after piece " + std::to_string(k));
    }
    std::vector<double> vals(grid.interior.size());
    for (std::size_t i = 0; i < grid.interior.size(); ++i) {
        const double x = grid.x[grid.interior[i]];
        double v = pieces.back()[2];
        for (const auto& piece : pieces) {
            // half-open pieces [lo, hi); the last one is closed at omega_hi
            if (x >= piece[0] - tol && x < piece[1] - tol) {
                v = piece[2];
                break;
            }
        }
        vals[i] = v;
    }
    return make_potential(grid, std::move(vals));
}

ExteriorData make_exterior_data(const Grid& grid, const std::vector<std::size_t>& support,
                                const std::vector<double>& values_on_support) {
    if (support.size() != values_on_support.size())
        throw ArgumentError("exterior data: support and value counts differ");
    ExteriorData f;
    f.values.assign(grid.exterior.size(), 0.0);
    f.support = support;
    std::sort(f.support.begin(), f.support.end());
    for (std::size_t k = 0; k < support.size(); ++k) {
        const auto it = std::lower_bound(grid.exterior.begin(), grid.exterior.end(), support[k]);
        if (it == grid.exterior.end() || *it != support[k])
            throw ArgumentError("exterior data: node " + std::to_string(support[k]) +
                                " is not an exterior node");
        f.values[static_cast<std::size_t>(it - grid.exterior.begin())] = values_on_support[k];
    }
    return f;
}

SystemMatrix::SystemMatrix(const FracOperator& op, const Potential& q)
    : a_(op.L), op_grid_(op.grid), q_(q), h_(op.h), s_(op.s) {
    const auto& interior = op_grid_.interior;
    if (q_.values.size() != interior.size())
        throw ArgumentError("assemble_system: potential does not match the grid interior");
    for (std::size_t i = 0; i < interior.size(); ++i)
        a_(interior[i], interior[i]) += h_ * q_.values[i];
    // positive definiteness of the interior block is verified by the factorization
    factor_ = linalg::SpdFactor::factor(linalg::take(a_, interior, interior));
}

SystemMatrix assemble_system(const FracOperator& op, const Potential& q) {
    return SystemMatrix(op, q);
}

Solution solve_dirichlet(const SystemMatrix& sys, const ExteriorData& f_exterior,
                         const std::vector<double>& f_interior) {
    const Grid& grid = sys.grid();
    const std::size_t ni = grid.interior.size();
    const std::size_t ne = grid.exterior.size();
    if (f_exterior.values.size() != ne)
        throw ArgumentError("solve_dirichlet: exterior datum has wrong length");
    if (!f_interior.empty() && f_interior.size() != ni)
        throw ArgumentError("solve_dirichlet: interior source has wrong length");

    const auto& k = simd::kernels();
    const linalg::Matrix& a = sys.full();

    // rhs = h f - A_IE F over the interior, using only the supported columns of A_IE
    std::vector<double> rhs(ni, 0.0);
    if (!f_interior.empty())
        for (std::size_t i = 0; i < ni; ++i) rhs[i] = sys.h() * f_interior[i];
    std::vector<std::size_t> sup_cols;
    std::vector<double> sup_vals;
    for (std::size_t e = 0; e < ne; ++e) {
        if (f_exterior.values[e] != 0.0) {
            sup_cols.push_back(grid.exterior[e]);
            sup_vals.push_back(f_exterior.values[e]);
        }
    }
    for (std::size_t i = 0; i < ni; ++i) {
        const double* row = a.row(grid.interior[i]);
        double acc = 0.0;
        for (std::size_t c = 0; c < sup_cols.size(); ++c) acc += row[sup_cols[c]] * sup_vals[c];
        rhs[i] -= acc;
    }

    std::vector<double> ui = sys.interior_factor().solve(rhs);

    // defining-equation residual: A_II u_I - rhs
    const linalg::Matrix aii = linalg::take(a, grid.interior, grid.interior);
    double res2 = 0.0;
    for (std::size_t i = 0; i < ni; ++i) {
        const double r = k.dot(aii.row(i), ui.data(), ni) - rhs[i];
        res2 += r * r;
    }
    const double scale = std::max({linalg::norm2(rhs),
                                   linalg::frobenius_norm(aii) * linalg::norm2(ui), 1e-300});
    if (std::sqrt(res2) > 1e-10 * scale)
        throw NumericalError("solve_dirichlet: residual " + std::to_string(std::sqrt(res2)) +
                             " exceeds 1e-10 of scale " + std::to_string(scale));

    Solution sol;
    sol.u.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < ni; ++i) sol.u[grid.interior[i]] = ui[i];
    for (std::size_t e = 0; e < ne; ++e) sol.u[grid.exterior[e]] = f_exterior.values[e];
    return sol;
}

SolutionOperator solution_operator(const SystemMatrix& sys,
                                   const std::vector<std::size_t>& nodes) {
    if (nodes.empty()) throw ArgumentError("solution_operator: empty node set");
    const Grid& grid = sys.grid();
    SolutionOperator out;
    out.row_nodes = grid.interior;
    out.column_nodes = nodes;
    out.S = linalg::Matrix(grid.interior.size(), nodes.size());
    for (std::size_t c = 0; c < nodes.size(); ++c) {
        const ExteriorData basis = make_exterior_data(grid, {nodes[c]}, {1.0});
        const Solution sol = solve_dirichlet(sys, basis);
        for (std::size_t i = 0; i < grid.interior.size(); ++i)
            out.S(i, c) = sol.u[grid.interior[i]];
    }
    return out;
}

} // namespace fracmono
