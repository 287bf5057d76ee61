#pragma once

// Singular-value estimation on the Hermitian dilation [[0, M], [M*, 0]],
// simulated classically.  The dilation's eigenvectors pair every singular
// triple (sigma, u, v) into two branches w^{+-} = (|0>u +- |1>v)/sqrt(2)
// with eigenvalues +-sigma; sve_simulate decomposes a joint state in that
// basis and attaches to each branch a signed label: sigma rounded to the
// register grid C / 2^{q1}, q1 = ceil(log2(C/eps1)) + 1.  The decomposition
// is an exact orthonormal change of basis, so reconstruct() returns the
// input to machine precision.
//
// phase_rotation_unitary builds the eigenvector phase-negation operator by
// running every standard basis vector through the four functional steps:
// decompose, negate strictly-negative labels, reconstruct, flip the ancilla
// bit.  On normal M its |0>-sector acts as sum_j e^{-2 pi i theta_j}
// |u_j><u_j|.

#include "eigsim/complex_matrix.hpp"
#include "eigsim/types.hpp"

#include <vector>

namespace eigsim {

struct SingularTriple {
    double sigma = 0.0;
    CVector u;
    CVector v;
};

struct SveBranch {
    Index pair = 0;      // singular-triple index
    int sign = 1;        // +1 for w^+, -1 for w^-
    double label = 0.0;  // signed grid-rounded singular value
    cxd coeff{0.0, 0.0};
};

struct SveState {
    Index n = 0;          // order of M (joint states live in dimension 2n)
    double grid = 0.0;    // label rounding pitch
    Index q_bits = 0;     // register width backing the grid
    bool collision_flag = false;  // distinct sigmas shared a rounded label
    std::vector<SingularTriple> triples;
    std::vector<SveBranch> branches;

    CVector reconstruct() const;
    CVector branch_vector(const SveBranch& b) const;  // the w vector itself
};

Index sve_register_bits(double scale_c, double eps1);
double sve_grid(double scale_c, double eps1);

CMatrix dilation_matrix(const ComplexMatrix& m);

// Decompose joint_input (dimension 2n) over the labeled branch basis.
// scale_c must dominate the spectrum: sigma_max <= scale_c / 2.
SveState sve_simulate(const ComplexMatrix& m, const CVector& joint_input, double eps1,
                      double scale_c);

// Mass-weighted dominant |label| of a decomposition; the register-rounded
// singular-value estimate for the state it was built from.
double dominant_sigma(const SveState& state);

CMatrix phase_rotation_unitary(const ComplexMatrix& m, double eps1, double scale_c);

}  // namespace eigsim
