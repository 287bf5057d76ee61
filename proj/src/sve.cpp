#include "eigsim/sve.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <map>

namespace eigsim {

Index sve_register_bits(double scale_c, double eps1) {
    if (!(scale_c > 0.0)) throw PreconditionError("spectral scale must be positive");
    if (!(eps1 > 0.0 && eps1 < 1.0))
        throw PreconditionError("singular-value resolution eps1 must lie in (0, 1)");
    return static_cast<Index>(std::ceil(std::log2(scale_c / eps1))) + 1;
}

double sve_grid(double scale_c, double eps1) {
    return scale_c / static_cast<double>(Index(1) << sve_register_bits(scale_c, eps1));
}

CMatrix dilation_matrix(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("dilation of a non-square matrix (" + std::to_string(m.rows()) +
                             "x" + std::to_string(m.cols()) + ")");
    const Index n = m.rows();
    const CMatrix dense = m.to_dense();
    CMatrix out = CMatrix::Zero(2 * n, 2 * n);
    out.topRightCorner(n, n) = dense;
    out.bottomLeftCorner(n, n) = dense.adjoint();
    return out;
}

SveState sve_simulate(const ComplexMatrix& m, const CVector& joint_input, double eps1,
                      double scale_c) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError("singular-value estimation needs a square non-empty matrix");
    const Index n = m.rows();
    if (joint_input.size() != 2 * n)
        throw DimensionError("joint state has dimension " + std::to_string(joint_input.size()) +
                             ", dilation expects " + std::to_string(2 * n));

    const Index q_bits = sve_register_bits(scale_c, eps1);
    if (q_bits > 48)
        throw PreconditionError("singular-value register of " + std::to_string(q_bits) +
                                " bits is beyond the simulable range");
    const double grid = scale_c / static_cast<double>(Index(1) << q_bits);

    Eigen::JacobiSVD<CMatrix> svd(m.to_dense(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double sigma_max = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (sigma_max > 0.5 * scale_c * (1.0 + 1e-12))
        throw PreconditionError("spectral scale " + std::to_string(scale_c) +
                                " does not dominate sigma_max = " + std::to_string(sigma_max));

    SveState state;
    state.n = n;
    state.grid = grid;
    state.q_bits = q_bits;
    state.triples.reserve(static_cast<std::size_t>(n));
    state.branches.reserve(static_cast<std::size_t>(2 * n));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::map<long long, double> seen;  // rounded register value -> a sigma it came from
    for (Index j = 0; j < n; ++j) {
        SingularTriple t;
        t.sigma = svd.singularValues()(j);
        t.u = svd.matrixU().col(j);
        t.v = svd.matrixV().col(j);

        const long long cell = static_cast<long long>(std::llround(t.sigma / grid));
        const double label = static_cast<double>(cell) * grid;
        auto [it, inserted] = seen.try_emplace(cell, t.sigma);
        if (!inserted && std::abs(it->second - t.sigma) > 1e-12 * scale_c)
            state.collision_flag = true;

        for (int sign : {+1, -1}) {
            SveBranch b;
            b.pair = j;
            b.sign = sign;
            b.label = sign > 0 ? label : -label;
            const CVector upper = joint_input.head(n);
            const CVector lower = joint_input.tail(n);
            b.coeff = inv_sqrt2 * (t.u.dot(upper) + static_cast<double>(sign) * t.v.dot(lower));
            state.branches.push_back(std::move(b));
        }
        state.triples.push_back(std::move(t));
    }
    return state;
}

CVector SveState::branch_vector(const SveBranch& b) const {
    const SingularTriple& t = triples[static_cast<std::size_t>(b.pair)];
    CVector w(2 * n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    w.head(n) = inv_sqrt2 * t.u;
    w.tail(n) = static_cast<double>(b.sign) * inv_sqrt2 * t.v;
    return w;
}

CVector SveState::reconstruct() const {
    CVector acc = CVector::Zero(2 * n);
    for (const auto& b : branches) acc += b.coeff * branch_vector(b);
    return acc;
}

double dominant_sigma(const SveState& state) {
    std::map<long long, double> mass_by_cell;
    double grid = state.grid;
    for (const auto& b : state.branches) {
        const long long cell = static_cast<long long>(std::llround(std::abs(b.label) / grid));
        mass_by_cell[cell] += std::norm(b.coeff);
    }
    long long best_cell = 0;
    double best_mass = -1.0;
    for (const auto& [cell, mass] : mass_by_cell) {
        if (mass > best_mass) {  // ties resolve toward the smaller label
            best_mass = mass;
            best_cell = cell;
        }
    }
    if (best_mass <= 0.0) throw PreconditionError("decomposition carries no mass");
    return static_cast<double>(best_cell) * grid;
}

CMatrix phase_rotation_unitary(const ComplexMatrix& m, double eps1, double scale_c) {
    const Index n = m.rows();
    if (n != m.cols() || n == 0)
        throw DimensionError("phase rotation needs a square non-empty matrix");

    CMatrix w_op(2 * n, 2 * n);
    for (Index i = 0; i < 2 * n; ++i) {
        CVector basis = CVector::Zero(2 * n);
        basis(i) = cxd(1.0, 0.0);

        SveState state = sve_simulate(m, basis, eps1, scale_c);  // decompose
        for (auto& b : state.branches)
            if (b.label < 0.0) b.coeff = -b.coeff;  // negate strictly-negative labels
        const CVector rebuilt = state.reconstruct();  // back to the computational basis

        CVector flipped(2 * n);  // ancilla bit flip
        flipped.head(n) = rebuilt.tail(n);
        flipped.tail(n) = rebuilt.head(n);
        w_op.col(i) = flipped;
    }
    return w_op;
}

}  // namespace eigsim
