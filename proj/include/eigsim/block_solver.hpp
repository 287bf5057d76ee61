#pragma once

// Solving the assembled chain systems and reading the solution back as
// blocks.  Taylor chains are unit-lower-triangular scalar-wise by
// construction, so the default path is exact sparse forward substitution; a
// general sparse LU sits behind the same interface as a cross-check and as
// the required path for the backward-difference chains.

#include "eigsim/encoding.hpp"
#include "eigsim/types.hpp"

#include <vector>

namespace eigsim {

enum class SolveBackend { Auto, ForwardSubstitution, SparseLU };

struct BlockSolution {
    ChainKind kind = ChainKind::Taylor;
    Index inner_dim = 0;
    Index m = 0;
    Index k = 0;
    std::vector<CVector> flat;        // solution blocks in system order
    std::vector<CVector> trajectory;  // the m+1 step states, starting at the input
    double total_norm = 0.0;          // 2-norm of the full solution vector
    double trajectory_norm = 0.0;     // 2-norm over the stacked trajectory
    double residual = 0.0;            // ||C x - b|| at the solved point

    Index block_count() const { return static_cast<Index>(flat.size()); }

    // Taylor chains: x_{p,q} for p < m, q <= k plus the terminal x_{m,0}.
    // Backward-difference chains: block(p) is the state after p steps.
    const CVector& block(Index p, Index q = 0) const;
};

BlockSolution solve_block_system(const BlockSystem& sys,
                                 SolveBackend backend = SolveBackend::Auto);

// The same blocks computed from the defining recurrences (x_{p,q} =
// A x_{p,q-1} / q, segment launch by partial-sum accumulation) without
// touching the assembled matrix.  Agrees with solve_block_system to
// near-machine precision and serves as its independent oracle.
BlockSolution recurrence_oracle(const ComplexMatrix& a, const EncodingParams& params,
                                const CVector& x0 = CVector());

}  // namespace eigsim
