#pragma once

#include "fracmono/discretize.hpp"
#include "fracmono/linalg.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace fracmono {

// Nodal values of the potential q >= 0 on the interior node set, in ascending
// node order. strict_positive records whether min q > 0; several inequality
// verifiers require it (they divide by q).
struct Potential {
    std::vector<double> values;
    bool strict_positive = false;
    std::string id() const;
};

Potential make_potential(const Grid& grid, std::vector<double> interior_values);
Potential constant_potential(const Grid& grid, double value);

// q from piecewise-constant pieces {lo, hi, value} covering [omega_lo, omega_hi].
Potential piecewise_potential(const Grid& grid,
                              const std::vector<std::array<double, 3>>& pieces);

// Dirichlet datum on the exterior nodes: values aligned with grid.exterior,
// exactly zero off the declared support.
struct ExteriorData {
    std::vector<double> values;
    std::vector<std::size_t> support; // box-node indices, subset of grid.exterior
};

// Builds the datum from values given on the support nodes (same order).
ExteriorData make_exterior_data(const Grid& grid, const std::vector<std::size_t>& support,
                                const std::vector<double>& values_on_support);

// Nodal values on every box node; u restricted to E equals the prescribed datum.
struct Solution {
    std::vector<double> u;
};

// A = L + h diag(q~) with q~ = q on interior nodes and 0 outside. The interior
// principal block is factored once at assembly and reused by every solve, DtN
// assembly and pixel sweep against this potential.
class SystemMatrix {
public:
    SystemMatrix(const FracOperator& op, const Potential& q);

    const linalg::Matrix& full() const { return a_; }
    const Grid& grid() const { return op_grid_; }
    const Potential& potential() const { return q_; }
    const linalg::SpdFactor& interior_factor() const { return factor_; }
    double h() const { return h_; }
    double s() const { return s_; }
    std::string potential_id() const { return q_.id(); }

private:
    linalg::Matrix a_;
    Grid op_grid_;
    Potential q_;
    linalg::SpdFactor factor_;
    double h_ = 0.0, s_ = 0.0;
};

SystemMatrix assemble_system(const FracOperator& op, const Potential& q);

// Solves A_II u_I = h f_I - A_IE F_E and extends by u_E = F_E. The residual is
// checked to 1e-10 relative after every solve. f_interior may be empty (zero source).
Solution solve_dirichlet(const SystemMatrix& sys, const ExteriorData& f_exterior,
                         const std::vector<double>& f_interior = {});

// Interior solution values for unit data at each requested exterior node:
// column k is solve_dirichlet(e_{nodes[k]}, 0) restricted to the interior.
struct SolutionOperator {
    linalg::Matrix S;                      // |I| x |nodes|
    std::vector<std::size_t> row_nodes;    // interior node indices (rows)
    std::vector<std::size_t> column_nodes; // exterior node indices (columns)
};

SolutionOperator solution_operator(const SystemMatrix& sys,
                                   const std::vector<std::size_t>& nodes);

} // namespace fracmono
