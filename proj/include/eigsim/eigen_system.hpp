#pragma once

// Eigensystem value type plus the seeded factory used to manufacture test
// operators with a prescribed spectrum and eigenvector conditioning.

#include "eigsim/complex_matrix.hpp"
#include "eigsim/types.hpp"

#include <cstdint>
#include <vector>

namespace eigsim {

struct EigenSystem {
    ComplexMatrix matrix;    // M = E diag(eigvals) E^{-1}
    ComplexMatrix eigvecs;   // E with unit-norm columns
    std::vector<cxd> eigvals;
    double cond_e = 1.0;     // condition number of E
    bool is_normal = false;  // measured, not assumed
};

struct InputState {
    CVector amplitudes;  // standard-basis coefficients, unit 2-norm
    double norm = 0.0;   // recomputed 2-norm of amplitudes (must be 1 within 1e-12)
};

// Builds M = E diag(spectrum) E^{-1} where E has unit-norm columns and
// cond(E) lands within 5% of target_cond.  E comes from a seeded pair of
// Haar-random unitaries around a geometric singular-value ramp; because
// column normalization perturbs the conditioning, the ramp strength is found
// by bisection.  target_cond == 1 produces exactly unitary eigenvectors.
EigenSystem make_eigensystem(Index n, const std::vector<cxd>& spectrum, double target_cond,
                             std::uint64_t seed);

// Ground-truth eigensystem of an explicit operator via a dense solve
// (desk-scale only: n <= 64).
EigenSystem eigensystem_from_matrix(const ComplexMatrix& m);

// Cheap invariant check for externally supplied systems: unit columns within
// 1e-12, eigenpair residual within 1e-10 * ||M||, unitary eigvecs within
// 1e-10 when is_normal.  Throws PreconditionError on violation.
void validate_eigensystem(const EigenSystem& es);

// max_j ||M E_j - lambda_j E_j|| / ||M||.
double eigenpair_residual(const EigenSystem& es);

// Operator 2-norm of the commutator M M^* - M^* M.
double normality_defect(const CMatrix& m);
bool is_normal_matrix(const CMatrix& m);

// Mixture sum_j weights_j E_j expressed in the standard basis, normalized.
InputState make_input_state(const EigenSystem& es, const std::vector<cxd>& weights);
InputState uniform_input_state(const EigenSystem& es);
InputState basis_input_state(const EigenSystem& es, Index j);

}  // namespace eigsim
