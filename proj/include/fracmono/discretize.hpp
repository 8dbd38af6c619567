#pragma once

#include "fracmono/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fracmono {

// Measurement window: a closed interval of x-coordinates, disjoint from the
// closed domain [omega_lo, omega_hi] and contained in the open box (-R, R).
struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct GridSpec {
    double omega_lo = -1.0;
    double omega_hi = 1.0;
    double box_radius = 4.0; // functions are extended by zero outside [-R, R]
    double spacing = 0.05;
    double order = 0.5; // fractional exponent s in (0, 1)
    std::vector<Window> windows;
    std::size_t max_box_nodes = 8192;
};

// Node lattice x_j = j*h for j in [-N, N] with index sets:
//   interior I: nodes strictly inside (omega_lo, omega_hi),
//   exterior E: every other box node, including the two nodes at omega_lo/omega_hi
//               (the domain is open, so boundary nodes carry Dirichlet data),
//   meas Om ⊆ E: nodes covered by the measurement windows.
struct Grid {
    GridSpec spec;
    std::vector<double> x;
    std::vector<std::size_t> interior;
    std::vector<std::size_t> exterior;
    std::vector<std::size_t> meas;

    std::size_t size() const { return x.size(); }
    std::string id() const;
};

// Validates every GridSpec invariant; throws ConfigError naming the offending
// field (lattice alignment, window placement, s range, ...).
Grid build_grid(const GridSpec& spec);

// m-th coefficient of the lattice kernel for the 1D fractional Laplacian:
//   K_s(m) = (4^s Gamma(s+1/2) / (sqrt(pi) |Gamma(-s)|)) * Gamma(m-s) / Gamma(m+1+s).
// Equals the negated m-th Fourier coefficient of theta -> (4 sin^2(theta/2))^s.
// Evaluated through log-gamma differences so large m cannot overflow.
double kernel_weight(double s, std::size_t m);

// Zeroth Fourier coefficient d = Gamma(2s+1) / Gamma(s+1)^2 = sum_{m != 0} K_s(m);
// the diagonal entry of the lattice operator (in units of h^{2s-1}).
double diagonal_weight(double s);

struct FracOperator {
    linalg::Matrix L; // symmetric, dense over all box nodes
    Grid grid;
    double s = 0.0;
    double h = 0.0;
};

// L[j][k] = -h^{1-2s} K_s(|j-k|) off the diagonal and h^{1-2s} d on it.
// The diagonal uses the full-lattice sum, so L is the infinite-lattice operator
// restricted to functions vanishing outside the box. The first call for a given
// s validates d against the truncated kernel sum plus the exact tail and throws
// NumericalError if they disagree beyond 1e-6 relative.
FracOperator assemble_operator(const Grid& grid, double s, double h);

} // namespace fracmono
