#include "fracmono/order.hpp"

#include "fracmono/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracmono {

namespace {

void check_symmetric_input(const DtnMatrix& m, const char* which) {
    if (m.m.rows() != m.m.cols()) throw ArgumentError(std::string(which) + ": matrix not square");
    const double scale = std::max(linalg::frobenius_norm(m.m), 1e-300);
    if (linalg::max_asymmetry(m.m) > 1e-8 * scale)
        throw ArgumentError(std::string(which) + ": matrix is not symmetric");
}

// Shared setup for the inequality verifiers: both solutions plus the quadratic
// form of the measurement-map difference over the datum's support.
struct PairData {
    std::vector<double> u0, u1; // interior values
    double lhs = 0.0;
};

PairData solve_pair(const SystemMatrix& sys0, const SystemMatrix& sys1, const ExteriorData& f) {
    if (f.support.empty()) throw ArgumentError("verify: exterior datum has empty support");
    const Grid& grid = sys0.grid();
    if (sys1.grid().size() != grid.size())
        throw ArgumentError("verify: systems live on different grids");

    const Solution s0 = solve_dirichlet(sys0, f);
    const Solution s1 = solve_dirichlet(sys1, f);
    PairData out;
    out.u0.reserve(grid.interior.size());
    out.u1.reserve(grid.interior.size());
    for (std::size_t node : grid.interior) {
        out.u0.push_back(s0.u[node]);
        out.u1.push_back(s1.u[node]);
    }

    const DtnMatrix l0 = dtn_matrix(sys0, f.support);
    const DtnMatrix l1 = dtn_matrix(sys1, f.support);
    std::vector<double> fs;
    fs.reserve(f.support.size());
    for (std::size_t node : f.support) {
        const auto it = std::lower_bound(grid.exterior.begin(), grid.exterior.end(), node);
        fs.push_back(f.values[static_cast<std::size_t>(it - grid.exterior.begin())]);
    }
    const std::vector<double> dv = linalg::matvec(l1.m - l0.m, fs);
    double lhs = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) lhs += fs[i] * dv[i];
    out.lhs = lhs;
    return out;
}

} // namespace

LoewnerVerdict loewner_leq(const DtnMatrix& a, const DtnMatrix& b, double tol_rel) {
    if (a.m.rows() != b.m.rows() || a.m.cols() != b.m.cols())
        throw ArgumentError("loewner_leq: shape mismatch");
    check_symmetric_input(a, "loewner_leq lhs");
    check_symmetric_input(b, "loewner_leq rhs");
    LoewnerVerdict v;
    v.tolerance = tol_rel * std::max({linalg::frobenius_norm(a.m), linalg::frobenius_norm(b.m),
                                      1e-14});
    v.lambda_min = linalg::lambda_min_sym(b.m - a.m);
    v.pass = v.lambda_min >= -v.tolerance;
    return v;
}

nlohmann::json verdict_json(const LoewnerVerdict& v, const DtnMatrix& a, const DtnMatrix& b) {
    return nlohmann::json{{"pass", v.pass},
                          {"lambda_min", v.lambda_min},
                          {"tolerance", v.tolerance},
                          {"lhs_id", a.potential_id},
                          {"rhs_id", b.potential_id},
                          {"grid_id", a.grid_id}};
}

InequalityReport verify_monotonicity(const SystemMatrix& sys0, const SystemMatrix& sys1,
                                     const ExteriorData& f) {
    const auto& q0 = sys0.potential().values;
    const auto& q1 = sys1.potential().values;
    if (q0.size() != q1.size())
        throw ArgumentError("verify_monotonicity: potentials have different sizes");
    for (std::size_t i = 0; i < q1.size(); ++i)
        if (q1[i] == 0.0)
            throw ArgumentError("verify_monotonicity: inequality 3 divides by q1, which has a "
                                "zero entry");
    for (std::size_t i = 0; i < q0.size(); ++i)
        if (q0[i] == 0.0)
            throw ArgumentError("verify_monotonicity: inequality 4 divides by q0, which has a "
                                "zero entry");

    const PairData p = solve_pair(sys0, sys1, f);
    const double h = sys0.h();
    double i1 = 0.0, i2 = 0.0, i3 = 0.0, i4 = 0.0;
    for (std::size_t j = 0; j < q0.size(); ++j) {
        const double d = q1[j] - q0[j];
        i1 += d * p.u0[j] * p.u0[j];
        i2 += d * p.u1[j] * p.u1[j];
        i3 += (q0[j] / q1[j]) * d * p.u0[j] * p.u0[j];
        i4 += (q1[j] / q0[j]) * d * p.u1[j] * p.u1[j];
    }
    i1 *= h;
    i2 *= h;
    i3 *= h;
    i4 *= h;

    InequalityReport r;
    r.lhs = p.lhs;
    r.slack = {i1 - p.lhs, p.lhs - i2, p.lhs - i3, i4 - p.lhs};
    r.scale = std::abs(p.lhs) +
              std::max({std::abs(i1), std::abs(i2), std::abs(i3), std::abs(i4)});
    return r;
}

InequalityReport verify_doubling(const SystemMatrix& sys0, const SystemMatrix& sys1,
                                 const ExteriorData& f) {
    const auto& q0 = sys0.potential().values;
    const auto& q1 = sys1.potential().values;
    if (q0.size() != q1.size())
        throw ArgumentError("verify_doubling: potentials have different sizes");
    std::vector<std::size_t> d_set;
    for (std::size_t i = 0; i < q0.size(); ++i)
        if (q0[i] != q1[i]) d_set.push_back(i);
    if (d_set.empty())
        throw ArgumentError("verify_doubling: potentials are identical; D is empty");

    const PairData p = solve_pair(sys0, sys1, f);
    double n0 = 0.0, n1 = 0.0, dmax = 0.0;
    for (std::size_t i : d_set) {
        n0 += p.u0[i] * p.u0[i];
        n1 += p.u1[i] * p.u1[i];
        dmax = std::max(dmax, std::abs(q1[i] - q0[i]));
    }
    n0 = std::sqrt(n0);
    n1 = std::sqrt(n1);

    const Grid& grid = sys1.grid();
    const linalg::Matrix a11 =
        linalg::take(sys1.full(), grid.interior, grid.interior);
    const double alpha = linalg::lambda_min_sym(a11);

    InequalityReport r;
    r.lhs = p.lhs;
    r.bound = 1.0 + dmax / alpha;
    if (n1 == 0.0) {
        r.degenerate = true;
        return r;
    }
    r.ratio = n0 / n1;
    r.within_bound = (r.ratio >= 1.0 / r.bound) && (r.ratio <= r.bound);
    return r;
}

} // namespace fracmono
