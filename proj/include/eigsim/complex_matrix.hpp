#pragma once

// ComplexMatrix: one value type for every operator the pipelines touch.
//
// The canonical representation is a compressed row-major sparse matrix with
// entries sorted by (row, col), duplicates summed at construction and exact
// zeros pruned; a storage tag remembers whether the object is conceptually
// dense or sparse so round-trips and kron products preserve provenance.
// Converting dense -> sparse -> dense preserves every coefficient exactly
// (the same doubles come back; pruned entries were exact zeros).

#include "eigsim/types.hpp"

#include <vector>

namespace eigsim {

using RowSparseCMatrix = Eigen::SparseMatrix<cxd, Eigen::RowMajor>;

class ComplexMatrix {
public:
    enum class Storage { Dense, Sparse };

    ComplexMatrix() : sp_(0, 0), storage_(Storage::Dense) {}

    static ComplexMatrix from_dense(const CMatrix& values);
    static ComplexMatrix from_triplets(Index rows, Index cols,
                                       const std::vector<CTriplet>& entries);
    static ComplexMatrix from_sparse(const RowSparseCMatrix& s,
                                     Storage tag = Storage::Sparse);
    static ComplexMatrix identity(Index n, Storage tag = Storage::Sparse);

    Index rows() const { return sp_.rows(); }
    Index cols() const { return sp_.cols(); }
    Index non_zeros() const { return sp_.nonZeros(); }
    Storage storage() const { return storage_; }
    bool is_sparse() const { return storage_ == Storage::Sparse; }

    cxd coeff(Index row, Index col) const { return sp_.coeff(row, col); }
    CMatrix to_dense() const { return CMatrix(sp_); }
    const RowSparseCMatrix& sparse() const { return sp_; }

    // Entries in canonical (row, col) order; never contains an exact zero.
    std::vector<CTriplet> triplets() const;

    ComplexMatrix with_storage(Storage tag) const;
    ComplexMatrix adjoint() const;

    Index max_row_nonzeros() const;
    Index max_col_nonzeros() const;

private:
    RowSparseCMatrix sp_;
    Storage storage_;
};

// Kronecker product; the result is tagged dense only when both factors are.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Elementwise combinations used to assemble chain generators.  Sums and
// differences are tagged dense only when both operands are.
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cxd factor, const ComplexMatrix& m);
ComplexMatrix conjugate(const ComplexMatrix& m);

// Expression-friendly dense kron for scratch math in tests and pipelines.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
    -> DenseMatrix<typename DerivedA::Scalar> {
    using Scalar = typename DerivedA::Scalar;
    DenseMatrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.derived();
    return out;
}

// max(1, largest absolute row sum); an upper bound on the spectral radius
// clamped below by one.  Rejects non-square or empty input.
double gershgorin_bound(const ComplexMatrix& m);
double gershgorin_bound(const CMatrix& m);

// sigma_max / sigma_min from a full SVD; throws SingularMatrixError when
// sigma_min < 1e-14 * sigma_max.
double condition_number(const ComplexMatrix& m);
double condition_number(const CMatrix& m);

// Largest singular value (operator 2-norm).
double spectral_norm(const CMatrix& m);

}  // namespace eigsim
