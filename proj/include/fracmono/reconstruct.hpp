#pragma once

#include "fracmono/dtn.hpp"
#include "fracmono/forward.hpp"
#include "fracmono/order.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace fracmono {

// Disjoint contiguous runs of interior nodes covering the whole interior.
// Ranges are half-open [begin, end) in interior-local indexing.
struct PixelPartition {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;

    static PixelPartition uniform(std::size_t interior_count, std::size_t pixel_count);
    std::size_t count() const { return ranges.size(); }

    // Box-node indices of pixel p.
    std::vector<std::size_t> pixel_nodes(const Grid& grid, std::size_t p) const;
    // Box-node indices of the interior complement of pixel p.
    std::vector<std::size_t> complement_nodes(const Grid& grid, std::size_t p) const;
};

struct PotentialResult {
    std::vector<double> alpha;
    std::vector<int> iterations;
    std::vector<std::uint8_t> clamped_low;  // no alpha in range passed the order test
    std::vector<std::uint8_t> clamped_high; // the sup hit the top of the range
};

// For each pixel, the largest alpha in [alpha_lo, alpha_hi] whose single-pixel
// test potential alpha*chi_p stays below the measured map in the Loewner order,
// located by bisection (valid because the pass predicate is monotone in alpha:
// the measurement map increases with the potential). bisect_tol <= 0 selects
// the default 1e-3*(alpha_hi - alpha_lo); iteration is capped at 60.
PotentialResult pixel_sup_reconstruct(const DtnMatrix& measured, const PixelPartition& pixels,
                                      double alpha_lo, double alpha_hi, double bisect_tol,
                                      const FracOperator& op, double tol_rel,
                                      unsigned threads = 1);

struct ShapeResult {
    std::vector<std::uint8_t> inside;
    // indefinite test: smaller of the two certificate eigenvalues per pixel;
    // definite test: the maximal admissible alpha* per pixel.
    std::vector<double> witness;
    double alpha_cap = 0.0;
    double alpha_threshold = 0.0;
    double tol = 0.0;
};

// Data-driven cap for the indefinite support test: 2 ||delta||_F / lambda,
// where lambda is the smallest eigenvalue of the whole-interior testing
// operator that still exceeds 0.1 of its largest (the spectrum decays to
// roundoff, so "smallest positive" needs a spectral cutoff). Never below 1e-6.
double auto_alpha_cap(const DtnMatrix& delta, const SolutionOperator& s0, double h);

// Marks pixel p OUTSIDE iff the difference map is sandwiched by alpha_cap times
// the testing operator of the pixel's interior complement:
//   lambda_min(alpha_cap T - delta) >= -tol and lambda_min(alpha_cap T + delta) >= -tol.
// The reconstructed support is the set of pixels not marked outside. Testing at
// alpha = alpha_cap only is valid since both conditions are monotone in alpha.
ShapeResult support_from_closed_sets(const DtnMatrix& delta, const SolutionOperator& s0,
                                     const PixelPartition& pixels, double alpha_cap, double tol,
                                     double h, unsigned threads = 1);

// Definite-sign variant: per pixel, the largest alpha in [0, alpha_cap] with
// lambda_min(sign*delta - alpha T_p) >= -tol (bisection); the pixel is IN when
// alpha* exceeds alpha_threshold. Caller asserts the definite case:
// sign=+1 when q1 >= q0, sign=-1 when q1 <= q0.
ShapeResult inner_support_definite(const DtnMatrix& delta, int sign, const SolutionOperator& s0,
                                   const PixelPartition& pixels, double tol, double alpha_cap,
                                   double alpha_threshold, double h, unsigned threads = 1);

struct LocalizeReport {
    double energy_mask = 0.0;     // h-weighted squared l2 norm of u on the mask
    double energy_rest = 0.0;     // same on the interior complement
    double ratio = 0.0;           // energy_mask / energy_rest
    double normal_residual = 0.0; // residual of the ridge normal equations
};

// Ridge least squares aimed at the normalized indicator t = chi_M / (h |M|):
//   min_F ||S F - t||^2_{l2(I), h-weighted} + lambda_reg ||F||^2,
// followed by rescaling F by the fourth root of the complement energy. The
// ratio is unchanged by the rescale, but it splits the divergence the way the
// localization statement wants it: along a lambda_reg sweep the mask energy
// grows without bound while the complement energy decays. mask must be a
// proper nonempty subset of the interior.
std::pair<ExteriorData, LocalizeReport> localized_potential(const SolutionOperator& s0,
                                                            const std::vector<std::size_t>& mask,
                                                            double lambda_reg, const Grid& grid);

// Same least-squares machinery without the rescaling: returns the datum and the
// h-weighted l2 distance of S F to the target interior profile.
std::pair<ExteriorData, double> runge_approximate(const SolutionOperator& s0,
                                                  const std::vector<double>& target,
                                                  double lambda_reg, const Grid& grid);

} // namespace fracmono
