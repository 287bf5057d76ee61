#include "eigsim/block_solver.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace eigsim {

const CVector& BlockSolution::block(Index p, Index q) const {
    if (kind == ChainKind::Taylor) {
        const bool terminal = (p == m && q == 0);
        const bool interior = (p >= 0 && p < m && q >= 0 && q <= k);
        if (!terminal && !interior)
            throw DimensionError("block (" + std::to_string(p) + ", " + std::to_string(q) +
                                 ") outside the chain layout");
        return flat[static_cast<std::size_t>(p * (k + 1) + q)];
    }
    if (q != 0 || p < 0 || p > m)
        throw DimensionError("block (" + std::to_string(p) + ", " + std::to_string(q) +
                             ") outside the chain layout");
    return trajectory[static_cast<std::size_t>(p)];
}

namespace {

CVector forward_substitute(const RowSparseCMatrix& c, const CVector& b) {
    const Index n = c.rows();
    CVector x(n);
    for (Index i = 0; i < n; ++i) {
        cxd sum(0.0, 0.0);
        bool unit_diag = false;
        for (RowSparseCMatrix::InnerIterator it(c, i); it; ++it) {
            if (it.col() < i) {
                sum += it.value() * x(it.col());
            } else if (it.col() == i) {
                if (std::abs(it.value() - cxd(1.0, 0.0)) > 1e-12)
                    throw PreconditionError("forward substitution needs a unit diagonal; row " +
                                            std::to_string(i) + " has " +
                                            std::to_string(std::abs(it.value())));
                unit_diag = true;
            } else {
                throw PreconditionError("forward substitution on a non-lower-triangular system (row " +
                                        std::to_string(i) + ", col " + std::to_string(it.col()) + ")");
            }
        }
        if (!unit_diag)
            throw PreconditionError("forward substitution needs a unit diagonal; row " +
                                    std::to_string(i) + " has none");
        x(i) = b(i) - sum;
    }
    return x;
}

CVector sparse_lu_solve(const RowSparseCMatrix& c, const CVector& b) {
    SparseCMatrix col_major = c;  // SparseLU wants column-major storage
    Eigen::SparseLU<SparseCMatrix> lu;
    lu.analyzePattern(col_major);
    lu.factorize(col_major);
    if (lu.info() != Eigen::Success)
        throw SingularMatrixError("sparse LU factorization failed on the chain system");
    CVector x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw SingularMatrixError("sparse LU solve failed on the chain system");
    return x;
}

BlockSolution package(const BlockSystem& sys, const CVector& x) {
    const Index n = sys.inner_dim;
    BlockSolution sol;
    sol.kind = sys.kind;
    sol.inner_dim = n;
    sol.m = sys.params.m;
    sol.k = sys.params.k;
    sol.flat.reserve(static_cast<std::size_t>(sys.block_count));
    for (Index g = 0; g < sys.block_count; ++g)
        sol.flat.push_back(x.segment(g * n, n));

    sol.trajectory.reserve(static_cast<std::size_t>(sol.m + 1));
    if (sys.kind == ChainKind::Taylor) {
        for (Index p = 0; p < sol.m; ++p)
            sol.trajectory.push_back(sol.flat[static_cast<std::size_t>(p * (sol.k + 1))]);
        sol.trajectory.push_back(sol.flat.back());
    } else {
        sol.trajectory.push_back(sys.rhs.head(n));
        for (const auto& blk : sol.flat) sol.trajectory.push_back(blk);
    }

    sol.total_norm = x.norm();
    double traj_sq = 0.0;
    for (const auto& v : sol.trajectory) traj_sq += v.squaredNorm();
    sol.trajectory_norm = std::sqrt(traj_sq);
    sol.residual = (sys.matrix.sparse() * x - sys.rhs).norm();
    return sol;
}

}  // namespace

BlockSolution solve_block_system(const BlockSystem& sys, SolveBackend backend) {
    if (sys.matrix.rows() != sys.matrix.cols() || sys.matrix.rows() != sys.rhs.size())
        throw DimensionError("chain system shapes disagree");
    if (sys.inner_dim <= 0 || sys.block_count * sys.inner_dim != sys.matrix.rows())
        throw DimensionError("chain system block layout is inconsistent");

    SolveBackend chosen = backend;
    if (chosen == SolveBackend::Auto)
        chosen = (sys.kind == ChainKind::Taylor) ? SolveBackend::ForwardSubstitution
                                                 : SolveBackend::SparseLU;

    const CVector x = (chosen == SolveBackend::ForwardSubstitution)
                          ? forward_substitute(sys.matrix.sparse(), sys.rhs)
                          : sparse_lu_solve(sys.matrix.sparse(), sys.rhs);

    BlockSolution sol = package(sys, x);
    if (sol.residual > 1e-10 * std::max(sol.total_norm, sys.rhs.norm()))
        throw SingularMatrixError("chain solve residual " + std::to_string(sol.residual) +
                                  " exceeds 1e-10 of the solution scale");
    return sol;
}

BlockSolution recurrence_oracle(const ComplexMatrix& a, const EncodingParams& params,
                                const CVector& x0) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw DimensionError("chain generator must be square and non-empty");
    const Index n = a.rows();
    CVector first;
    if (x0.size() == 0) {
        first = CVector::Zero(n);
        first(0) = cxd(1.0, 0.0);
    } else if (x0.size() == n) {
        first = x0;
    } else {
        throw DimensionError("input state has dimension " + std::to_string(x0.size()) +
                             ", operator expects " + std::to_string(n));
    }

    const auto& gen = a.sparse();
    BlockSolution sol;
    sol.kind = ChainKind::Taylor;
    sol.inner_dim = n;
    sol.m = params.m;
    sol.k = params.k;
    sol.flat.reserve(static_cast<std::size_t>(params.d + 1));

    CVector step = first;
    for (Index p = 0; p < params.m; ++p) {
        CVector acc = step;
        CVector cur = step;
        sol.flat.push_back(step);
        for (Index q = 1; q <= params.k; ++q) {
            cur = (gen * cur) / static_cast<double>(q);
            sol.flat.push_back(cur);
            acc += cur;
        }
        step = acc;
    }
    sol.flat.push_back(step);

    for (Index p = 0; p < params.m; ++p)
        sol.trajectory.push_back(sol.flat[static_cast<std::size_t>(p * (params.k + 1))]);
    sol.trajectory.push_back(sol.flat.back());

    double total_sq = 0.0;
    for (const auto& v : sol.flat) total_sq += v.squaredNorm();
    sol.total_norm = std::sqrt(total_sq);
    double traj_sq = 0.0;
    for (const auto& v : sol.trajectory) traj_sq += v.squaredNorm();
    sol.trajectory_norm = std::sqrt(traj_sq);
    sol.residual = 0.0;
    return sol;
}

}  // namespace eigsim
