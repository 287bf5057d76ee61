#pragma once

// Block-matrix encodings of the propagated ODE solution.
//
// build_cmk assembles the truncated-Taylor chain system: a (d+1)n x (d+1)n
// unit-lower-triangular operator (d = m(k+1)) whose solution stacks the
// Taylor partial sums x_{p,q} of m repeated degree-k steps.  Three kinds of
// entries exist: the identity diagonal, -A/q Taylor steps within a segment,
// and the -I summation hops that launch each new segment from the previous
// partial sums.  build_euler assembles the first-order backward-difference
// chain used as an accuracy baseline.  Both accept the *pre-scaled*
// generator A (e.g. 2*pi*i*dt*M) so the encoders stay pure structure.

#include "eigsim/complex_matrix.hpp"
#include "eigsim/types.hpp"

#include <functional>

namespace eigsim {

struct EncodingParams {
    double rho = 1.0;   // spectral-radius budget (>= 1)
    double eps = 1.0 / 64.0;
    double dt = 0.5;    // chain step
    Index m = 64;       // number of steps
    Index k = 8;        // Taylor degree per step
    Index d = 576;      // m * (k + 1)
    bool dt_rho_ok = false;  // true iff 2*pi*dt*rho < 1
};

// Step/degree selection for the real-spectrum pipeline:
// dt = 1/(2 rho), m = ceil(rho/eps), k = ceil(log2(rho/eps)) raised until
// (k+1)! >= m^2/eps.
EncodingParams algorithm1_params(double rho, double eps);

// Complex-spectrum variant: dt = 1/rho and a doubled log degree,
// k = 2*ceil(log2(rho/eps)), with the same factorial floor.
EncodingParams algorithm2_params(double rho, double eps);

// Explicit parameter override; recomputes d and the dt*rho flag.
EncodingParams custom_params(double rho, double eps, double dt, Index m, Index k);

// Degree-k Taylor partial sum of exp at z (Horner form).
cxd taylor_trunc(cxd z, Index k);

// Row cap for assembled systems; reads EIGSIM_DIM_CAP (default 2^20).
Index dimension_cap();

enum class ChainKind { Taylor, Euler };

struct BlockSystem {
    ComplexMatrix matrix;
    CVector rhs;  // zero except the first inner_dim coordinates (input state)
    EncodingParams params;
    Index inner_dim = 0;
    ChainKind kind = ChainKind::Taylor;
    Index block_count = 0;  // d+1 for Taylor chains, m for Euler chains
};

// Assemble the Taylor chain for pre-scaled generator a; x0 (defaults to the
// first basis vector) lands in the leading block of the right-hand side.
BlockSystem build_cmk(const ComplexMatrix& a, const EncodingParams& params,
                      const CVector& x0 = CVector());

// Single entry of the Taylor chain from index arithmetic alone; queries the
// generator oracle at most once and never materializes the operator.
struct EntryOracle {
    Index dim = 0;
    std::function<cxd(Index, Index)> entry;
};
cxd cmk_entry(const EntryOracle& a, Index row, Index col, const EncodingParams& params);

// Backward-difference chain for dx/dt = 2*pi*i*M x: diagonal blocks
// I - 2*pi*i*dt*M, subdiagonal blocks -I, solution blocks x(t_1)..x(t_m).
BlockSystem build_euler(const ComplexMatrix& m, Index steps, double dt,
                        const CVector& x0 = CVector());

}  // namespace eigsim
