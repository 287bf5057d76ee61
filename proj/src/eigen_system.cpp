#include "eigsim/eigen_system.hpp"

#include "eigsim/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>

namespace eigsim {

namespace {

// Haar-distributed unitary: QR of a complex Ginibre matrix with the R diagonal
// phase absorbed into Q so the factorization is unique.
CMatrix haar_unitary(Index n, Rng& rng) {
    CMatrix g(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) g(i, j) = rng.complex_gaussian();
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const cxd d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a == 0.0) ? cxd(1.0, 0.0) : d / a;
    }
    return q;
}

CMatrix normalized_columns(const CMatrix& e) {
    CMatrix out = e;
    for (Index j = 0; j < out.cols(); ++j) {
        const double nrm = out.col(j).norm();
        if (nrm == 0.0) throw PreconditionError("eigenvector column collapsed to zero");
        out.col(j) /= nrm;
    }
    return out;
}

// Unit-column eigenvector matrix built around a geometric singular-value ramp
// of strength c (sigma_i = c^{-i/(n-1)}); conditioning is measured after the
// normalization that the ramp itself perturbs.
CMatrix ramp_eigvecs(const CMatrix& u, const CMatrix& v, double c) {
    const Index n = u.rows();
    CVector sv(n);
    for (Index i = 0; i < n; ++i)
        sv(i) = std::pow(c, -static_cast<double>(i) / static_cast<double>(n - 1));
    return normalized_columns(u * sv.asDiagonal() * v);
}

}  // namespace

EigenSystem make_eigensystem(Index n, const std::vector<cxd>& spectrum, double target_cond,
                             std::uint64_t seed) {
    if (n <= 0) throw PreconditionError("eigensystem size must be positive");
    if (static_cast<Index>(spectrum.size()) != n)
        throw PreconditionError("spectrum has " + std::to_string(spectrum.size()) +
                                " values for an order-" + std::to_string(n) + " system");
    if (!(target_cond >= 1.0))
        throw PreconditionError("eigenvector condition target must be >= 1, got " +
                                std::to_string(target_cond));

    Rng rng(derive_seed(seed, 0x45494753ULL));

    CMatrix e;
    if (n == 1) {
        e = CMatrix::Identity(1, 1);
    } else if (target_cond == 1.0) {
        e = haar_unitary(n, rng);
    } else {
        const CMatrix u = haar_unitary(n, rng);
        const CMatrix v = haar_unitary(n, rng);
        // Bracket the ramp strength, then bisect until cond(E) is within 2%
        // of target (spec tolerance for the factory is 5%).
        double lo = 1.0, hi = target_cond;
        while (condition_number(ramp_eigvecs(u, v, hi)) < target_cond) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12)
                throw PreconditionError("eigenvector conditioning target unreachable: " +
                                        std::to_string(target_cond));
        }
        double c = hi;
        for (int iter = 0; iter < 200; ++iter) {
            c = 0.5 * (lo + hi);
            const double kappa = condition_number(ramp_eigvecs(u, v, c));
            if (std::abs(kappa - target_cond) <= 0.02 * target_cond) break;
            (kappa < target_cond ? lo : hi) = c;
        }
        e = ramp_eigvecs(u, v, c);
    }

    CVector lambda(n);
    for (Index j = 0; j < n; ++j) lambda(j) = spectrum[static_cast<std::size_t>(j)];
    const CMatrix m = e * lambda.asDiagonal() * e.inverse();

    EigenSystem es;
    es.matrix = ComplexMatrix::from_dense(m);
    es.eigvecs = ComplexMatrix::from_dense(e);
    es.eigvals = spectrum;
    es.cond_e = condition_number(e);
    es.is_normal = is_normal_matrix(m);
    return es;
}

EigenSystem eigensystem_from_matrix(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("eigensystem of a non-square matrix (" + std::to_string(m.rows()) +
                             "x" + std::to_string(m.cols()) + ")");
    if (m.rows() == 0) throw DimensionError("eigensystem of an empty matrix");
    if (m.rows() > 64)
        throw PreconditionError("dense ground-truth eigensolve is desk-scale only (n <= 64), got n = " +
                                std::to_string(m.rows()));
    const CMatrix dense = m.to_dense();
    Eigen::ComplexEigenSolver<CMatrix> solver(dense);
    if (solver.info() != Eigen::Success)
        throw PreconditionError("dense eigensolve did not converge");

    EigenSystem es;
    es.matrix = m;
    es.eigvecs = ComplexMatrix::from_dense(normalized_columns(solver.eigenvectors()));
    es.eigvals.resize(static_cast<std::size_t>(m.rows()));
    for (Index j = 0; j < m.rows(); ++j)
        es.eigvals[static_cast<std::size_t>(j)] = solver.eigenvalues()(j);
    es.cond_e = condition_number(es.eigvecs);
    es.is_normal = is_normal_matrix(dense);
    return es;
}

double eigenpair_residual(const EigenSystem& es) {
    const CMatrix m = es.matrix.to_dense();
    const CMatrix e = es.eigvecs.to_dense();
    const double scale = spectral_norm(m);
    double worst = 0.0;
    for (Index j = 0; j < e.cols(); ++j) {
        const double r = (m * e.col(j) - es.eigvals[static_cast<std::size_t>(j)] * e.col(j)).norm();
        worst = std::max(worst, scale == 0.0 ? r : r / scale);
    }
    return worst;
}

void validate_eigensystem(const EigenSystem& es) {
    const Index n = es.matrix.rows();
    if (es.matrix.cols() != n || es.eigvecs.rows() != n || es.eigvecs.cols() != n)
        throw PreconditionError("eigensystem shapes disagree");
    if (static_cast<Index>(es.eigvals.size()) != n)
        throw PreconditionError("eigensystem has " + std::to_string(es.eigvals.size()) +
                                " eigenvalues for order " + std::to_string(n));
    const CMatrix e = es.eigvecs.to_dense();
    for (Index j = 0; j < n; ++j)
        if (std::abs(e.col(j).norm() - 1.0) > 1e-12)
            throw PreconditionError("eigenvector column " + std::to_string(j) +
                                    " is not unit norm");
    if (eigenpair_residual(es) > 1e-10)
        throw PreconditionError("eigenpair residual exceeds 1e-10 * ||M||");
    if (es.is_normal) {
        const double unitary_defect = spectral_norm(e.adjoint() * e - CMatrix::Identity(n, n));
        if (unitary_defect > 1e-10)
            throw PreconditionError("normal system with non-unitary eigenvectors (defect " +
                                    std::to_string(unitary_defect) + ")");
    }
}

double normality_defect(const CMatrix& m) {
    return spectral_norm(m * m.adjoint() - m.adjoint() * m);
}

bool is_normal_matrix(const CMatrix& m) {
    const double scale = spectral_norm(m);
    return normality_defect(m) <= 1e-10 * std::max(scale * scale, 1e-300);
}

InputState make_input_state(const EigenSystem& es, const std::vector<cxd>& weights) {
    if (static_cast<Index>(weights.size()) != es.eigvecs.cols())
        throw PreconditionError("mixture has " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(es.eigvecs.cols()) +
                                " eigenvectors");
    const CMatrix e = es.eigvecs.to_dense();
    CVector acc = CVector::Zero(e.rows());
    for (Index j = 0; j < e.cols(); ++j) acc += weights[static_cast<std::size_t>(j)] * e.col(j);
    const double nrm = acc.norm();
    if (nrm < 1e-14) throw PreconditionError("requested eigenvector mixture is numerically zero");
    InputState state;
    state.amplitudes = acc / nrm;
    state.norm = state.amplitudes.norm();
    return state;
}

InputState uniform_input_state(const EigenSystem& es) {
    return make_input_state(es, std::vector<cxd>(static_cast<std::size_t>(es.eigvecs.cols()),
                                                 cxd(1.0, 0.0)));
}

InputState basis_input_state(const EigenSystem& es, Index j) {
    if (j < 0 || j >= es.eigvecs.cols())
        throw PreconditionError("eigenvector index " + std::to_string(j) + " out of range");
    std::vector<cxd> w(static_cast<std::size_t>(es.eigvecs.cols()), cxd(0.0, 0.0));
    w[static_cast<std::size_t>(j)] = cxd(1.0, 0.0);
    return make_input_state(es, w);
}

}  // namespace eigsim
