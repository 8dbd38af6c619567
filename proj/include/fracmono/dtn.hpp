#pragma once

#include "fracmono/forward.hpp"
#include "fracmono/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fracmono {

// Symmetric matrix representing the exterior-data-to-flux map on a measurement
// node set, or a derivative of it. raw_asymmetry records the asymmetry of the
// computed matrix before the final symmetrization; construction fails if it
// exceeds 1e-10 relative.
struct DtnMatrix {
    linalg::Matrix m;
    std::vector<std::size_t> nodes;
    std::string potential_id;
    std::string grid_id;
    double raw_asymmetry = 0.0;
};

// Principal submatrix over `nodes` of the box-exterior Schur complement
// A_EE - A_EI A_II^{-1} A_IE, computed directly as
// A_BB - A_BI A_II^{-1} A_IB for B = nodes.
DtnMatrix dtn_matrix(const SystemMatrix& sys, const std::vector<std::size_t>& nodes);

// Derivative of the measurement map at the operator's base potential, in the
// direction of an interior weight r:
//   out[g][f] = h * sum_{j in I} r_j S[j][g] S[j][f].
// Symmetric by construction and linear in r; positive semidefinite for r >= 0.
DtnMatrix frechet_apply(const SolutionOperator& s_op, const std::vector<double>& r, double h);

// frechet_apply with r = indicator of an interior node mask.
struct TestOperator {
    linalg::Matrix m;
    std::vector<std::size_t> nodes; // measurement nodes
    std::vector<std::size_t> mask;  // interior nodes the indicator was built from
};

TestOperator testing_operator(const SolutionOperator& s_op,
                              const std::vector<std::size_t>& mask, double h);

// Row-major CSV, one matrix row per line, %.17g (round-trip exact).
void write_matrix_csv(const std::string& path, const linalg::Matrix& m);
linalg::Matrix read_matrix_csv(const std::string& path);

} // namespace fracmono
