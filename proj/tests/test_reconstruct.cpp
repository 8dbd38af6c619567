#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracmono/discretize.hpp"
#include "fracmono/dtn.hpp"
#include "fracmono/errors.hpp"
#include "fracmono/forward.hpp"
#include "fracmono/reconstruct.hpp"

#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

using namespace fracmono;

namespace {

struct Stage {
    Grid grid;
    FracOperator op;
    std::vector<std::size_t> meas;
};

Stage make_stage(const GridSpec& spec) {
    Stage st{build_grid(spec), {}, {}};
    st.op = assemble_operator(st.grid, spec.order, spec.spacing);
    st.meas.assign(st.grid.meas.begin(), st.grid.meas.end());
    return st;
}

DtnMatrix dtn_at(const Stage& st, const Potential& q) {
    return dtn_matrix(assemble_system(st.op, q), st.meas);
}

// one 6-node window on the production-size lattice; used by the localization
// and approximation examples
GridSpec one_window_spec() {
    GridSpec spec;
    spec.windows = {{1.05, 1.30}};
    return spec;
}

std::vector<std::size_t> interior_nodes_in(const Grid& grid, double lo, double hi) {
    std::vector<std::size_t> out;
    for (std::size_t node : grid.interior)
        if (grid.x[node] >= lo && grid.x[node] <= hi) out.push_back(node);
    return out;
}

} // namespace

TEST_CASE("uniform pixel partitions cover the interior with balanced runs") {
    const PixelPartition part = PixelPartition::uniform(19, 5);
    REQUIRE(part.count() == 5);
    CHECK(part.ranges.front().first == 0);
    CHECK(part.ranges.back().second == 19);
    std::size_t smallest = 19, largest = 0;
    for (std::size_t p = 0; p < part.count(); ++p) {
        const auto [b, e] = part.ranges[p];
        CHECK(b < e);
        if (p + 1 < part.count()) CHECK(e == part.ranges[p + 1].first);
        smallest = std::min(smallest, e - b);
        largest = std::max(largest, e - b);
    }
    CHECK(largest - smallest <= 1);

    CHECK(PixelPartition::uniform(19, 1).ranges == decltype(part.ranges){{0, 19}});
    CHECK(PixelPartition::uniform(5, 5).count() == 5);
    CHECK_THROWS_WITH_AS(PixelPartition::uniform(19, 0), doctest::Contains("positive"),
                         ArgumentError);
    CHECK_THROWS_WITH_AS(PixelPartition::uniform(19, 20), doctest::Contains("exceeds"),
                         ArgumentError);
}

TEST_CASE("pixel and complement nodes partition the grid interior") {
    const Grid g = build_grid(testsupport::small_spec());
    const PixelPartition part = PixelPartition::uniform(g.interior.size(), 4);
    for (std::size_t p = 0; p < part.count(); ++p) {
        std::vector<std::size_t> merged = part.pixel_nodes(g, p);
        const std::vector<std::size_t> comp = part.complement_nodes(g, p);
        merged.insert(merged.end(), comp.begin(), comp.end());
        std::sort(merged.begin(), merged.end());
        CHECK(merged == g.interior);
    }
    CHECK_THROWS_WITH_AS(part.pixel_nodes(g, 4), doctest::Contains("out of range"),
                         ArgumentError);

    const Grid tiny = build_grid(testsupport::tiny_spec());
    CHECK_THROWS_WITH_AS(part.pixel_nodes(tiny, 0), doctest::Contains("does not cover"),
                         ArgumentError);
}

TEST_CASE("single whole-interior pixel recovers a constant potential exactly") {
    const Stage st = make_stage(testsupport::small_spec());
    const DtnMatrix measured = dtn_at(st, constant_potential(st.grid, 2.0));
    const PixelPartition part = PixelPartition::uniform(st.grid.interior.size(), 1);

    const PotentialResult res =
        pixel_sup_reconstruct(measured, part, 0.0, 8.0, 0.0, st.op, 1e-9);
    REQUIRE(res.alpha.size() == 1);
    // the bisection lands on the dyadic value 2 and keeps it as the passing lo
    CHECK(res.alpha[0] == 2.0);
    CHECK(res.clamped_low[0] == 0);
    CHECK(res.clamped_high[0] == 0);
    CHECK(res.iterations[0] > 2);
    CHECK(res.iterations[0] <= 60);
}

TEST_CASE("sup reconstruction reports clamping against the alpha range") {
    const Stage st = make_stage(testsupport::small_spec());
    const DtnMatrix measured = dtn_at(st, constant_potential(st.grid, 2.0));
    const PixelPartition part = PixelPartition::uniform(st.grid.interior.size(), 1);

    SUBCASE("range entirely below the sup") {
        const PotentialResult res =
            pixel_sup_reconstruct(measured, part, 0.0, 1.5, 0.0, st.op, 1e-9);
        CHECK(res.alpha[0] == 1.5);
        CHECK(res.clamped_high[0] == 1);
        CHECK(res.iterations[0] == 1);
    }

    SUBCASE("range entirely above the sup") {
        const PotentialResult res =
            pixel_sup_reconstruct(measured, part, 3.0, 8.0, 0.0, st.op, 1e-9);
        CHECK(res.alpha[0] == 3.0);
        CHECK(res.clamped_low[0] == 1);
        CHECK(res.iterations[0] == 2);
    }
}

TEST_CASE("sup reconstruction validates its inputs") {
    const Stage st = make_stage(testsupport::small_spec());
    const DtnMatrix measured = dtn_at(st, constant_potential(st.grid, 1.0));
    const PixelPartition part = PixelPartition::uniform(st.grid.interior.size(), 1);

    CHECK_THROWS_WITH_AS(pixel_sup_reconstruct(measured, part, -1.0, 8.0, 0.0, st.op, 1e-9),
                         doctest::Contains("nonnegative"), ArgumentError);
    CHECK_THROWS_WITH_AS(pixel_sup_reconstruct(measured, part, 2.0, 2.0, 0.0, st.op, 1e-9),
                         doctest::Contains("empty"), ArgumentError);

    // same geometry, different fractional order: the grid ids must disagree
    const Stage other = make_stage(testsupport::small_spec(0.75));
    CHECK_THROWS_WITH_AS(pixel_sup_reconstruct(measured, part, 0.0, 8.0, 0.0, other.op, 1e-9),
                         doctest::Contains("different grids"), ArgumentError);

    const PixelPartition wrong = PixelPartition::uniform(7, 2);
    CHECK_THROWS_WITH_AS(pixel_sup_reconstruct(measured, wrong, 0.0, 8.0, 0.0, st.op, 1e-9),
                         doctest::Contains("does not cover"), ArgumentError);
}

TEST_CASE("three-pixel profile is recovered within ten percent") {
    GridSpec spec; // production lattice, 12 measurement nodes
    spec.order = 0.75;
    spec.windows = {{1.05, 1.30}, {-1.30, -1.05}};
    const Stage st = make_stage(spec);
    const Potential truth = piecewise_potential(
        st.grid, {{-1.0, -0.325, 1.0}, {-0.325, 0.325, 3.0}, {0.325, 1.0, 2.0}});
    const DtnMatrix measured = dtn_at(st, truth);
    const PixelPartition part = PixelPartition::uniform(st.grid.interior.size(), 3);

    const PotentialResult res =
        pixel_sup_reconstruct(measured, part, 0.0, 8.0, 1e-4, st.op, 1e-14);
    REQUIRE(res.alpha.size() == 3);
    CHECK(res.alpha[0] == 1.0);
    CHECK(res.alpha[1] == doctest::Approx(3.2057).epsilon(1e-3));
    CHECK(res.alpha[2] == 2.0);
    const double expected[3] = {1.0, 3.0, 2.0};
    for (std::size_t p = 0; p < 3; ++p)
        CHECK(std::abs(res.alpha[p] - expected[p]) <= 0.10 * expected[p]);

    SUBCASE("results are identical for any thread count") {
        const PotentialResult threaded =
            pixel_sup_reconstruct(measured, part, 0.0, 8.0, 1e-4, st.op, 1e-14, 4);
        CHECK(std::memcmp(threaded.alpha.data(), res.alpha.data(), 3 * sizeof(double)) == 0);
        CHECK(threaded.iterations == res.iterations);
        CHECK(threaded.clamped_low == res.clamped_low);
        CHECK(threaded.clamped_high == res.clamped_high);
    }
}

TEST_CASE("data-driven alpha cap") {
    const Stage st = make_stage(testsupport::small_spec());
    const SystemMatrix sys0 = assemble_system(st.op, constant_potential(st.grid, 1.0));
    const SolutionOperator so = solution_operator(sys0, st.meas);
    const DtnMatrix lam0 = dtn_matrix(sys0, st.meas);
    const DtnMatrix lam1 = dtn_at(st, constant_potential(st.grid, 2.0));

    DtnMatrix delta;
    delta.m = lam1.m - lam0.m;
    const double cap = auto_alpha_cap(delta, so, st.op.h);
    CHECK(cap > 1e-6);

    // linear in the Frobenius norm of the difference
    DtnMatrix doubled;
    doubled.m = 2.0 * delta.m;
    CHECK(auto_alpha_cap(doubled, so, st.op.h) == doctest::Approx(2.0 * cap).epsilon(1e-12));

    // a vanishing difference falls back to the floor
    DtnMatrix zero;
    zero.m = linalg::Matrix(st.meas.size(), st.meas.size());
    CHECK(auto_alpha_cap(zero, so, st.op.h) == 1e-6);
}

TEST_CASE("support from the closed-set test") {
    const Stage st = make_stage(testsupport::small_spec());
    const std::size_t ni = st.grid.interior.size();
    const PixelPartition part = PixelPartition::uniform(ni, 5);
    const SystemMatrix sys0 = assemble_system(st.op, constant_potential(st.grid, 1.0));
    const SolutionOperator so = solution_operator(sys0, st.meas);
    const DtnMatrix lam0 = dtn_matrix(sys0, st.meas);

    SUBCASE("a one-pixel bump next to a window is located exactly") {
        // the bump sits on the pixel nearest the left window, where the data
        // are most sensitive; deep-interior bumps of this size fall below the
        // resolution of a 6-column measurement
        std::vector<double> v1(ni, 1.0);
        for (std::size_t i = part.ranges[0].first; i < part.ranges[0].second; ++i) v1[i] += 1.5;
        DtnMatrix delta;
        delta.m = dtn_at(st, make_potential(st.grid, v1)).m - lam0.m;
        const double cap = auto_alpha_cap(delta, so, st.op.h);
        const double tol = 1e-9 * std::max(1.0, linalg::frobenius_norm(delta.m));

        const ShapeResult res = support_from_closed_sets(delta, so, part, cap, tol, st.op.h);
        REQUIRE(res.inside.size() == 5);
        for (std::size_t p = 0; p < 5; ++p) CHECK(res.inside[p] == (p == 0 ? 1 : 0));
        CHECK(res.witness[0] < -tol);
        CHECK(res.alpha_cap == cap);
        CHECK(res.tol == tol);
        // the verdict is stable under a substantially larger cap
        const ShapeResult wide =
            support_from_closed_sets(delta, so, part, 10.0 * cap, tol, st.op.h);
        CHECK(wide.inside == res.inside);
    }

    SUBCASE("a zero difference marks every pixel outside") {
        DtnMatrix zero;
        zero.m = linalg::Matrix(st.meas.size(), st.meas.size());
        const ShapeResult res = support_from_closed_sets(zero, so, part, 1.0, 1e-12, st.op.h);
        for (std::uint8_t b : res.inside) CHECK(b == 0);
    }

    SUBCASE("argument validation") {
        DtnMatrix zero;
        zero.m = linalg::Matrix(st.meas.size(), st.meas.size());
        CHECK_THROWS_WITH_AS(support_from_closed_sets(zero, so, part, 0.0, 1e-12, st.op.h),
                             doctest::Contains("must be positive"), ArgumentError);
        CHECK_THROWS_WITH_AS(support_from_closed_sets(zero, so, part, 1.0, -1.0, st.op.h),
                             doctest::Contains("nonnegative"), ArgumentError);
    }
}

TEST_CASE("definite inner support test") {
    const Stage st = make_stage(testsupport::small_spec());
    const std::size_t ni = st.grid.interior.size();
    const PixelPartition part = PixelPartition::uniform(ni, 5);
    const SystemMatrix sys0 = assemble_system(st.op, constant_potential(st.grid, 1.0));
    const SolutionOperator so = solution_operator(sys0, st.meas);
    const DtnMatrix lam0 = dtn_matrix(sys0, st.meas);

    std::vector<double> v1(ni, 1.0);
    for (std::size_t i = part.ranges[2].first; i < part.ranges[2].second; ++i) v1[i] += 1.0;
    DtnMatrix delta;
    delta.m = dtn_at(st, make_potential(st.grid, v1)).m - lam0.m;
    const double tol = 1e-12 * std::max(1.0, linalg::frobenius_norm(delta.m));

    SUBCASE("the bump pixel clears the threshold, the rest stay below") {
        const ShapeResult res =
            inner_support_definite(delta, 1, so, part, tol, 8.0, 0.05, st.op.h);
        REQUIRE(res.inside.size() == 5);
        for (std::size_t p = 0; p < 5; ++p) CHECK(res.inside[p] == (p == 2 ? 1 : 0));
        CHECK(res.witness[2] > 0.5);
        for (std::size_t p = 0; p < 5; ++p)
            if (p != 2) CHECK(res.witness[p] < 0.05);

        const ShapeResult threaded =
            inner_support_definite(delta, 1, so, part, tol, 8.0, 0.05, st.op.h, 3);
        CHECK(std::memcmp(threaded.witness.data(), res.witness.data(),
                          5 * sizeof(double)) == 0);
    }

    SUBCASE("the wrong sign rejects every pixel") {
        const ShapeResult res =
            inner_support_definite(delta, -1, so, part, tol, 8.0, 0.05, st.op.h);
        for (std::size_t p = 0; p < 5; ++p) {
            CHECK(res.inside[p] == 0);
            CHECK(res.witness[p] == 0.0);
        }
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_WITH_AS(inner_support_definite(delta, 0, so, part, tol, 8.0, 0.05, st.op.h),
                             doctest::Contains("sign"), ArgumentError);
        CHECK_THROWS_AS(inner_support_definite(delta, 1, so, part, tol, 0.0, 0.05, st.op.h),
                        ArgumentError);
        CHECK_THROWS_AS(inner_support_definite(delta, 1, so, part, tol, 8.0, -0.1, st.op.h),
                        ArgumentError);
    }
}

TEST_CASE("localized data concentrate energy on the mask along the sweep") {
    const Stage st = make_stage(one_window_spec());
    const SystemMatrix sys0 = assemble_system(st.op, constant_potential(st.grid, 1.0));
    const SolutionOperator so = solution_operator(sys0, st.meas);
    const std::vector<std::size_t> mask = interior_nodes_in(st.grid, 0.84, 0.96);
    REQUIRE(mask.size() == 3);

    double prev_ratio = 0.0;
    LocalizeReport last;
    ExteriorData last_datum;
    for (const double reg : {1e-1, 1e-3, 1e-5}) {
        auto [datum, report] = localized_potential(so, mask, reg, st.grid);
        CHECK(report.ratio > prev_ratio);
        CHECK(report.normal_residual <= 1e-10);
        CHECK(report.ratio ==
              doctest::Approx(report.energy_mask / report.energy_rest).epsilon(1e-12));
        prev_ratio = report.ratio;
        last = report;
        last_datum = datum;
    }
    CHECK(last.ratio > 5.0);
    CHECK(last.ratio < 9.0);

    // the reported energies describe the returned datum after its rescale
    const Solution sol = solve_dirichlet(sys0, last_datum);
    double e_mask = 0.0, e_rest = 0.0;
    for (std::size_t node : st.grid.interior) {
        const double e = st.op.h * sol.u[node] * sol.u[node];
        if (std::binary_search(mask.begin(), mask.end(), node))
            e_mask += e;
        else
            e_rest += e;
    }
    CHECK(e_mask == doctest::Approx(last.energy_mask).epsilon(1e-9));
    CHECK(e_rest == doctest::Approx(last.energy_rest).epsilon(1e-9));
}

TEST_CASE("localization mask validation") {
    const Stage st = make_stage(testsupport::small_spec());
    const SystemMatrix sys0 = assemble_system(st.op, constant_potential(st.grid, 1.0));
    const SolutionOperator so = solution_operator(sys0, st.meas);

    CHECK_THROWS_WITH_AS(localized_potential(so, {}, 1e-3, st.grid),
                         doctest::Contains("empty"), ArgumentError);
    CHECK_THROWS_WITH_AS(localized_potential(so, st.grid.interior, 1e-3, st.grid),
                         doctest::Contains("whole interior"), ArgumentError);
    CHECK_THROWS_WITH_AS(localized_potential(so, {st.grid.exterior[0]}, 1e-3, st.grid),
                         doctest::Contains("outside the interior"), ArgumentError);
    CHECK_THROWS_WITH_AS(localized_potential(so, {st.grid.interior[0]}, 0.0, st.grid),
                         doctest::Contains("positive"), ArgumentError);
}

TEST_CASE("ridge approximation reaches reachable targets") {
    const Stage st = make_stage(one_window_spec());
    const SystemMatrix sys0 = assemble_system(st.op, constant_potential(st.grid, 1.0));
    const SolutionOperator so = solution_operator(sys0, st.meas);
    const std::size_t ni = st.grid.interior.size();

    SUBCASE("most reachable interior profile") {
        // top eigenvector of S S^T spans the best-approximable direction
        const linalg::Matrix ss = so.S * linalg::transpose(so.S);
        const linalg::EigenSym es = linalg::eigen_sym(ss);
        std::vector<double> target(ni);
        for (std::size_t i = 0; i < ni; ++i) target[i] = es.vectors(i, ni - 1);
        double tnorm = 0.0;
        for (double v : target) tnorm += st.op.h * v * v;
        tnorm = std::sqrt(tnorm);

        double prev = 1e300;
        double final_rel = 0.0;
        for (const double reg : {1e-2, 1e-4, 1e-6}) {
            const auto [datum, dist] = runge_approximate(so, target, reg, st.grid);
            final_rel = dist / tnorm;
            CHECK(final_rel <= prev);
            prev = final_rel;
        }
        CHECK(final_rel <= 5e-4);
    }

    SUBCASE("interior indicator gets steadily closer") {
        std::vector<double> target(ni, 0.0);
        for (std::size_t i = ni / 3; i < ni / 3 + 3; ++i) target[i] = 1.0;
        double prev = 1e300;
        for (const double reg : {1e-2, 1e-4, 1e-6}) {
            const auto [datum, dist] = runge_approximate(so, target, reg, st.grid);
            CHECK(dist < prev);
            prev = dist;
        }
    }

    SUBCASE("target length validation") {
        CHECK_THROWS_WITH_AS(runge_approximate(so, std::vector<double>(ni + 1, 0.0), 1e-3,
                                               st.grid),
                             doctest::Contains("one value per interior node"), ArgumentError);
    }
}
