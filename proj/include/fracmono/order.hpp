#pragma once

#include "fracmono/dtn.hpp"
#include "fracmono/forward.hpp"

#include <json.hpp>

#include <array>

namespace fracmono {

// Outcome of the semidefinite-order test A <= B: pass iff the smallest
// eigenvalue of B - A clears the (negated) tolerance.
struct LoewnerVerdict {
    bool pass = false;
    double lambda_min = 0.0;
    double tolerance = 0.0;
};

// Tests A <= B in the Loewner order. The tolerance is relative to the Frobenius
// scale of the inputs with an absolute floor:
//   tol = tol_rel * max(||A||_F, ||B||_F, 1e-14).
LoewnerVerdict loewner_leq(const DtnMatrix& a, const DtnMatrix& b, double tol_rel);

nlohmann::json verdict_json(const LoewnerVerdict& v, const DtnMatrix& a, const DtnMatrix& b);

// Slack data for the four quadratic monotonicity inequalities and the
// energy-doubling bound between two potentials.
struct InequalityReport {
    std::array<double, 4> slack{}; // each >= 0 up to roundoff when the inequality holds
    double lhs = 0.0;              // F-quadratic form of the measurement-map difference
    double scale = 0.0;            // |lhs| plus the largest quadratic term; sets the
                                   // natural size for relative slack thresholds
    double ratio = 0.0;            // doubling: ||u0||_D / ||u1||_D
    double bound = 0.0;            // doubling constant C
    bool within_bound = false;     // ratio in [1/C, C]
    bool degenerate = false;       // u1 vanished on D; ratio meaningless
};

// Evaluates, for the datum F with LHS = F.((Lam(q1) - Lam(q0)) F) and
// solutions u0, u1 of the two systems, the four slacks
//   s1 = h sum (q1-q0) u0^2          - LHS   >= 0
//   s2 = LHS - h sum (q1-q0) u1^2           >= 0
//   s3 = LHS - h sum (q0/q1)(q1-q0) u0^2    >= 0
//   s4 = h sum (q1/q0)(q1-q0) u1^2   - LHS  >= 0.
// Inequalities 3 and 4 divide by a potential; a zero entry in the divisor
// raises ArgumentError naming the inequality.
InequalityReport verify_monotonicity(const SystemMatrix& sys0, const SystemMatrix& sys1,
                                     const ExteriorData& f);

// Energy-doubling check on D = {nodes where q0 != q1}:
//   ratio = ||u0||_{l2(D)} / ||u1||_{l2(D)} must lie in [1/C, C] with
//   C = 1 + max|q0 - q1| / lambda_min(A_II(q1)).
// F = 0 makes u1 vanish on D; that is reported via the degenerate flag.
InequalityReport verify_doubling(const SystemMatrix& sys0, const SystemMatrix& sys1,
                                 const ExteriorData& f);

} // namespace fracmono
