#include "eigsim/complex_matrix.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace eigsim {

namespace {

void prune_exact_zeros(RowSparseCMatrix& s) {
    s.prune([](const Index&, const Index&, const cxd& v) { return v != cxd(0.0, 0.0); });
    s.makeCompressed();
}

}  // namespace

ComplexMatrix ComplexMatrix::from_dense(const CMatrix& values) {
    ComplexMatrix out;
    out.sp_ = values.sparseView(0.0, 0.0);  // keeps every nonzero exactly
    out.sp_.makeCompressed();
    out.storage_ = Storage::Dense;
    return out;
}

ComplexMatrix ComplexMatrix::from_triplets(Index rows, Index cols,
                                           const std::vector<CTriplet>& entries) {
    if (rows < 0 || cols < 0) throw DimensionError("matrix shape must be non-negative");
    for (const auto& t : entries) {
        if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols)
            throw DimensionError("triplet (" + std::to_string(t.row()) + ", " +
                                 std::to_string(t.col()) + ") outside a " +
                                 std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    }
    ComplexMatrix out;
    out.sp_.resize(rows, cols);
    out.sp_.setFromTriplets(entries.begin(), entries.end());  // duplicates are summed
    prune_exact_zeros(out.sp_);
    out.storage_ = Storage::Sparse;
    return out;
}

ComplexMatrix ComplexMatrix::from_sparse(const RowSparseCMatrix& s, Storage tag) {
    ComplexMatrix out;
    out.sp_ = s;
    prune_exact_zeros(out.sp_);
    out.storage_ = tag;
    return out;
}

ComplexMatrix ComplexMatrix::identity(Index n, Storage tag) {
    if (n < 0) throw DimensionError("identity size must be non-negative");
    RowSparseCMatrix s(n, n);
    s.setIdentity();
    return from_sparse(s, tag);
}

std::vector<CTriplet> ComplexMatrix::triplets() const {
    std::vector<CTriplet> out;
    out.reserve(static_cast<std::size_t>(sp_.nonZeros()));
    for (Index row = 0; row < sp_.outerSize(); ++row)
        for (RowSparseCMatrix::InnerIterator it(sp_, row); it; ++it)
            out.emplace_back(it.row(), it.col(), it.value());
    return out;  // row-major compressed storage is already (row, col) sorted
}

ComplexMatrix ComplexMatrix::with_storage(Storage tag) const {
    ComplexMatrix out = *this;
    out.storage_ = tag;
    return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    RowSparseCMatrix adj = sp_.adjoint();
    return from_sparse(adj, storage_);
}

Index ComplexMatrix::max_row_nonzeros() const {
    Index best = 0;
    for (Index row = 0; row < sp_.outerSize(); ++row) {
        Index count = 0;
        for (RowSparseCMatrix::InnerIterator it(sp_, row); it; ++it) ++count;
        best = std::max(best, count);
    }
    return best;
}

Index ComplexMatrix::max_col_nonzeros() const {
    std::vector<Index> counts(static_cast<std::size_t>(sp_.cols()), 0);
    for (Index row = 0; row < sp_.outerSize(); ++row)
        for (RowSparseCMatrix::InnerIterator it(sp_, row); it; ++it)
            ++counts[static_cast<std::size_t>(it.col())];
    Index best = 0;
    for (Index c : counts) best = std::max(best, c);
    return best;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Index rows = a.rows() * b.rows();
    const Index cols = a.cols() * b.cols();
    std::vector<CTriplet> entries;
    entries.reserve(static_cast<std::size_t>(a.non_zeros() * b.non_zeros()));
    for (const auto& ta : a.triplets())
        for (const auto& tb : b.triplets())
            entries.emplace_back(ta.row() * b.rows() + tb.row(),
                                 ta.col() * b.cols() + tb.col(), ta.value() * tb.value());
    ComplexMatrix out = ComplexMatrix::from_triplets(rows, cols, entries);
    const bool dense = a.storage() == ComplexMatrix::Storage::Dense &&
                       b.storage() == ComplexMatrix::Storage::Dense;
    return dense ? out.with_storage(ComplexMatrix::Storage::Dense) : out;
}

namespace {

ComplexMatrix::Storage combined_tag(const ComplexMatrix& a, const ComplexMatrix& b) {
    const bool dense = a.storage() == ComplexMatrix::Storage::Dense &&
                       b.storage() == ComplexMatrix::Storage::Dense;
    return dense ? ComplexMatrix::Storage::Dense : ComplexMatrix::Storage::Sparse;
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("shape mismatch: " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
}

}  // namespace

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b);
    RowSparseCMatrix s = a.sparse() + b.sparse();
    return ComplexMatrix::from_sparse(s, combined_tag(a, b));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b);
    RowSparseCMatrix s = a.sparse() - b.sparse();
    return ComplexMatrix::from_sparse(s, combined_tag(a, b));
}

ComplexMatrix operator*(cxd factor, const ComplexMatrix& m) {
    RowSparseCMatrix s = factor * m.sparse();
    return ComplexMatrix::from_sparse(s, m.storage());
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
    RowSparseCMatrix s = m.sparse().conjugate();
    return ComplexMatrix::from_sparse(s, m.storage());
}

double gershgorin_bound(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) throw DimensionError("gershgorin bound of an empty matrix");
    if (m.rows() != m.cols())
        throw DimensionError("gershgorin bound needs a square matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    double best = 1.0;
    const auto& s = m.sparse();
    for (Index row = 0; row < s.outerSize(); ++row) {
        double sum = 0.0;
        for (RowSparseCMatrix::InnerIterator it(s, row); it; ++it) sum += std::abs(it.value());
        best = std::max(best, sum);
    }
    return best;
}

double gershgorin_bound(const CMatrix& m) { return gershgorin_bound(ComplexMatrix::from_dense(m)); }

namespace {

RVector singular_values(const CMatrix& m) {
    if (m.rows() > 16 || m.cols() > 16) {
        Eigen::BDCSVD<CMatrix> svd(m);
        return svd.singularValues();
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues();
}

}  // namespace

double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

double condition_number(const CMatrix& m) {
    if (m.size() == 0) throw DimensionError("condition number of an empty matrix");
    const RVector sv = singular_values(m);
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin >= 1e-14 * smax) || smax == 0.0)
        throw SingularMatrixError("matrix is unconditioned: sigma_min " + std::to_string(smin) +
                                  " below 1e-14 * sigma_max " + std::to_string(smax));
    return smax / smin;
}

double condition_number(const ComplexMatrix& m) { return condition_number(m.to_dense()); }

}  // namespace eigsim
