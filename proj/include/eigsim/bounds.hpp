#pragma once

// Machine-checkable error-bound report for a solved Taylor chain driven by a
// single eigenvector.  Each row carries the measured quantity, the claimed
// bound, and a pass flag; rows whose bound leaves its validity regime are
// marked vacuous instead of silently passing.
//
// Two families of norm-accounting rows are emitted on purpose.  The
// *_residual / *_identity rows implement the published accounting claim
// verbatim (solution mass tracked by exp / the degree-k partial sum with
// first-power coefficients); that claim is provably wrong for nonzero
// eigenvalues — the chain weights each Taylor term by the *square* of its
// coefficient — so those rows fail honestly off lambda = 0.  The *_squared
// rows check the corrected accounting (squared-coefficient partial sum
// S_k(y) = sum_q (y^q/q!)^2 and its continuum limit I0(2y)) and pass to
// machine precision.

#include "eigsim/block_solver.hpp"
#include "eigsim/eigen_system.hpp"
#include "eigsim/encoding.hpp"

#include <string>
#include <vector>

namespace eigsim {

struct BoundRow {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    bool vacuous = false;
};

struct BoundReport {
    EncodingParams params;
    cxd lambda{0.0, 0.0};
    Index eigenvector_index = -1;
    bool preconditions_ok = false;
    std::vector<std::string> precondition_notes;
    std::vector<BoundRow> rows;

    bool all_pass() const;                               // non-vacuous rows only
    const BoundRow& row(const std::string& name) const;  // first row with this name
};

// Per-step truncation budget e/(k+1)!.
double per_step_truncation_budget(Index k);

// Squared-coefficient Taylor mass sum S_k(y) and its k -> infinity limit
// (the order-zero modified Bessel value I0(2y), summed directly).
double squared_taylor_mass(double y, Index k);
double squared_taylor_mass_limit(double y);

BoundReport check_truncation_bounds(const EigenSystem& es, const BlockSolution& sol,
                                    const EncodingParams& params);

}  // namespace eigsim
