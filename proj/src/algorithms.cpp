#include "eigsim/algorithms.hpp"

#include "eigsim/qpe.hpp"
#include "eigsim/sve.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>

namespace eigsim {

namespace {

double resolve_rho(const ComplexMatrix& m, const std::optional<double>& rho) {
    if (rho.has_value()) {
        if (!(*rho >= 1.0))
            throw PreconditionError("spectral budget rho must be >= 1, got " +
                                    std::to_string(*rho));
        return *rho;
    }
    return gershgorin_bound(m);
}

double mod1(double x) {
    const double y = x - std::floor(x);
    return y == 1.0 ? 0.0 : y;
}

// Largest step-state norm relative to the initial state.  The paired-state
// chains are only meaningful while this stays small; growth means amplified
// cross-eigenvector rounding noise, not signal.
double trajectory_growth(const BlockSolution& sol) {
    const double base = std::max(sol.trajectory.front().norm(), 1e-300);
    double worst = 0.0;
    for (const CVector& x : sol.trajectory) worst = std::max(worst, x.norm());
    return worst / base;
}

constexpr double kGrowthGuard = 1e8;

}  // namespace

RealSpectrumResult algorithm1_real(const ComplexMatrix& m, const InputState& input, double eps,
                                   std::optional<double> rho,
                                   const std::optional<EncodingParams>& params_override) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError("pipeline operator must be square and non-empty");
    if (input.amplitudes.size() != m.rows())
        throw DimensionError("input state dimension " + std::to_string(input.amplitudes.size()) +
                             " does not match operator order " + std::to_string(m.rows()));
    if (std::abs(input.amplitudes.norm() - 1.0) > 1e-12)
        throw PreconditionError("input state must have unit norm");

    RealSpectrumResult result;
    result.params =
        params_override ? *params_override : algorithm1_params(resolve_rho(m, rho), eps);

    const ComplexMatrix generator = cxd(0.0, kTwoPi * result.params.dt) * m;
    const BlockSystem sys = build_cmk(generator, result.params, input.amplitudes);
    const BlockSolution sol = solve_block_system(sys);

    result.distribution = inverse_fourier_decode(sol.trajectory);
    const double retained = sol.trajectory_norm / sol.total_norm;
    result.ancilla_zero_mass = retained * retained;
    result.post_select_prob = result.ancilla_zero_mass;
    result.distribution.post_select_prob = result.post_select_prob;
    result.amplification_rounds_model =
        static_cast<Index>(std::ceil(1.0 / std::sqrt(result.post_select_prob)));
    result.estimates = decode_estimate(result.distribution, result.params.dt, m.rows());
    return result;
}

RealSpectrumResult algorithm1_real(const EigenSystem& es, const InputState& input, double eps,
                                   std::optional<double> rho,
                                   const std::optional<EncodingParams>& params_override) {
    validate_eigensystem(es);
    double max_abs = 0.0;
    for (std::size_t j = 0; j < es.eigvals.size(); ++j) {
        const cxd lambda = es.eigvals[j];
        if (std::abs(lambda.imag()) > 1e-10 * std::max(1.0, std::abs(lambda.real()))) {
            throw PreconditionError("spectral-reality violation: eigenvalue " + std::to_string(j) +
                                    " has imaginary part " + std::to_string(lambda.imag()));
        }
        max_abs = std::max(max_abs, std::abs(lambda));
    }
    if (rho.has_value() && *rho < max_abs) {
        throw PreconditionError("invalid spectral bound: rho=" + std::to_string(*rho) +
                                " is below max |eigenvalue|=" + std::to_string(max_abs));
    }
    return algorithm1_real(es.matrix, input, eps, rho, params_override);
}

namespace {

// Window-aggregated stage-two decoding state for one stage-one peak.
struct StageTwoAccumulator {
    RVector mass;
    double weight = 0.0;
};

}  // namespace

ComplexSpectrumResult algorithm2_complex(const EigenSystem& es, double eps,
                                         std::optional<double> rho,
                                         const std::optional<EncodingParams>& params_override) {
    validate_eigensystem(es);
    const ComplexMatrix& m = es.matrix;
    const Index n = m.rows();

    ComplexSpectrumResult result;
    result.cond_e = es.cond_e;
    result.params =
        params_override ? *params_override : algorithm2_params(resolve_rho(m, rho), eps);
    const double dt = result.params.dt;

    // Paired initial state: sum_j E_j (x) conj(E_j), normalized.
    const CMatrix evec = es.eigvecs.to_dense();
    CVector paired = CVector::Zero(n * n);
    for (Index j = 0; j < n; ++j) {
        const CVector ej = evec.col(j);
        const CVector cj = ej.conjugate();
        for (Index r = 0; r < n; ++r) paired.segment(r * n, n) += ej(r) * cj;
    }
    const double paired_norm = paired.norm();
    if (paired_norm < 1e-14)
        throw PreconditionError("paired eigenvector mixture is numerically zero");
    paired /= paired_norm;

    const ComplexMatrix eye = ComplexMatrix::identity(n);
    const ComplexMatrix sum_gen =
        cxd(0.0, kPi * dt) * (kron(m, eye) + kron(eye, conjugate(m)));
    const ComplexMatrix diff_gen =
        cxd(kPi * dt, 0.0) * (kron(m, eye) - kron(eye, conjugate(m)));

    // Stage one: modes rotate with the real parts.
    const BlockSystem sys1 = build_cmk(sum_gen, result.params, paired);
    const BlockSolution sol1 = solve_block_system(sys1);
    result.stage1_growth = trajectory_growth(sol1);
    if (result.stage1_growth > kGrowthGuard)
        throw PreconditionError(
            "stage-one chain amplified cross-eigenvector rounding noise by a factor of " +
            std::to_string(result.stage1_growth) +
            "; the spectrum's imaginary-part spread is too large for a clean classical solve "
            "at this step count");
    result.stage1_distribution = inverse_fourier_decode(sol1.trajectory, true);
    const double retained1 = sol1.trajectory_norm / sol1.total_norm;
    result.stage1_mass = retained1 * retained1;
    result.stage1_distribution.post_select_prob = result.stage1_mass;
    result.stage1_estimates = decode_estimate(result.stage1_distribution, dt, n);

    // Stage two: every populated stage-one bin re-enters the second chain.
    const Index bins = result.stage1_distribution.register_size;
    std::vector<RVector> stage2_mass(static_cast<std::size_t>(bins));
    std::vector<double> stage2_weight(static_cast<std::size_t>(bins), 0.0);  // m1_k * t2_k
    double retention_acc = 0.0;
    double mass_acc = 0.0;
    for (Index kk = 0; kk < bins; ++kk) {
        const double m1 = result.stage1_distribution.mass(kk);
        if (m1 < 1e-14) continue;
        const CVector& psi = result.stage1_distribution.conditioned[static_cast<std::size_t>(kk)];
        const BlockSystem sys2 = build_cmk(diff_gen, result.params, psi / psi.norm());
        const BlockSolution sol2 = solve_block_system(sys2);
        result.stage2_growth = std::max(result.stage2_growth, trajectory_growth(sol2));
        if (result.stage2_growth > kGrowthGuard)
            throw PreconditionError(
                "stage-two chain amplified cross-eigenvector rounding noise by a factor of " +
                std::to_string(result.stage2_growth) +
                "; the spectrum's real-part spread is too large for a clean classical solve "
                "at this step count");
        const PhaseDistribution dist2 = inverse_fourier_decode(sol2.trajectory);
        const double t2 = sol2.trajectory_norm / sol2.total_norm;
        stage2_mass[static_cast<std::size_t>(kk)] = dist2.mass;
        stage2_weight[static_cast<std::size_t>(kk)] = m1 * (t2 * t2);
        retention_acc += m1 * (t2 * t2);
        mass_acc += m1;
    }
    if (mass_acc <= 0.0) throw PreconditionError("stage-one register carries no mass");
    result.stage2_mass = retention_acc / mass_acc;
    result.two_stage_mass = result.stage1_mass * result.stage2_mass;

    // Pair each stage-one peak with the peaks of its window-aggregated
    // stage-two distribution (bins are orthogonal measurement sectors, so
    // weighted distributions add).
    for (const auto& est1 : result.stage1_estimates) {
        RVector agg = RVector::Zero(bins);
        double total_weight = 0.0;
        for (Index off = -1; off <= 1; ++off) {
            const Index kk = (est1.register_index + off + bins) % bins;
            const double w = stage2_weight[static_cast<std::size_t>(kk)];
            if (w <= 0.0) continue;
            agg += w * stage2_mass[static_cast<std::size_t>(kk)];
            total_weight += w;
        }
        if (total_weight <= 0.0) continue;
        PhaseDistribution window_dist;
        window_dist.register_size = bins;
        window_dist.mass = agg / total_weight;
        window_dist.post_select_prob = total_weight;
        for (const auto& est2 : decode_estimate(window_dist, dt, n)) {
            ComplexEstimate ce;
            ce.re = est1.value;
            ce.im = est2.value;
            ce.mass = est1.mass * est2.mass;
            ce.stage1_index = est1.register_index;
            ce.stage2_index = est2.register_index;
            result.estimates.push_back(ce);
        }
    }
    return result;
}

ComplexSpectrumResult algorithm2_complex(const ComplexMatrix& m, double eps,
                                         std::optional<double> rho,
                                         const std::optional<EncodingParams>& params_override) {
    return algorithm2_complex(eigensystem_from_matrix(m), eps, rho, params_override);
}

NormalSpectrumResult algorithm3_normal(const ComplexMatrix& m, const InputState& input,
                                       double eps1, double eps2) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError("pipeline operator must be square and non-empty");
    const Index n = m.rows();
    if (input.amplitudes.size() != n)
        throw DimensionError("input state dimension " + std::to_string(input.amplitudes.size()) +
                             " does not match operator order " + std::to_string(n));
    if (!(eps1 > 0.0 && eps1 < 1.0 && eps2 > 0.0 && eps2 < 1.0))
        throw PreconditionError("resolutions eps1, eps2 must lie in (0, 1)");

    const CMatrix dense = m.to_dense();
    const double defect = normality_defect(dense);
    const double scale = spectral_norm(dense);
    NormalSpectrumResult result;
    result.normality_defect_value = defect;
    if (defect > 1e-10 * std::max(scale * scale, 1e-300))
        throw PreconditionError("operator is not normal: commutator norm " +
                                std::to_string(defect) + " exceeds 1e-10 * ||M||^2 = " +
                                std::to_string(1e-10 * scale * scale));

    result.scale_c = 2.0 * gershgorin_bound(m);
    result.sigma_grid = sve_grid(result.scale_c, eps1);
    const CMatrix w_op = phase_rotation_unitary(m, eps1, result.scale_c);
    result.w_unitarity_error =
        spectral_norm(w_op.adjoint() * w_op - CMatrix::Identity(2 * n, 2 * n));

    // Ground-truth eigenpairs of the normal operator for the phase check.
    Eigen::ComplexSchur<CMatrix> schur(dense);
    if (schur.info() != Eigen::Success)
        throw PreconditionError("Schur decomposition did not converge");
    const CMatrix q = schur.matrixU();
    for (Index j = 0; j < n; ++j) {
        const cxd lam = schur.matrixT()(j, j);
        const double sigma = std::abs(lam);
        if (sigma < 0.5 * result.sigma_grid) {
            result.zero_sigma_flag = true;  // angle of a zero mode is undefined
            continue;
        }
        const double theta = mod1(std::arg(lam) / kTwoPi);
        CVector joint = CVector::Zero(2 * n);
        joint.head(n) = q.col(j);
        const CVector expected = std::exp(cxd(0.0, -kTwoPi * theta)) * joint;
        result.w_phase_error = std::max(result.w_phase_error, (w_op * joint - expected).norm());
    }

    // Phase estimation on the rotation unitary with the ancilla held at 0.
    result.q_bits = qpe_register_bits(eps2, 0.5);
    CVector joint_input = CVector::Zero(2 * n);
    joint_input.head(n) = input.amplitudes;
    const auto action = [&w_op](const CVector& v) -> CVector { return w_op * v; };
    result.distribution = qpe_simulate(action, joint_input, result.q_bits, true);

    const Index big_q = result.distribution.register_size;
    for (const auto& est : decode_estimate(result.distribution, 1.0, n)) {
        NormalEstimate ne;
        ne.theta = mod1(-est.value);  // the unitary rotates by e^{-2 pi i theta}
        ne.mass = est.mass;

        // Attach the magnitude: decompose the window's conditioned states
        // over the labeled branches and take the dominant |label|.
        std::map<long long, double> mass_by_cell;
        for (Index off = -1; off <= 1; ++off) {
            const Index s = (est.register_index + off + big_q) % big_q;
            const CVector& cond = result.distribution.conditioned[static_cast<std::size_t>(s)];
            if (cond.squaredNorm() < 1e-24) continue;
            const SveState dec = sve_simulate(m, cond, eps1, result.scale_c);
            const Index reg_size = Index(1) << dec.q_bits;
            for (const auto& b : dec.branches) {
                // Signed grid cells live on a 2^q register; fold the sign away
                // exactly as the magnitude readout does.
                Index reg = static_cast<Index>(std::llround(b.label / dec.grid)) % reg_size;
                if (reg < 0) reg += reg_size;
                const long long cell = static_cast<long long>(abs_oracle(reg, reg_size));
                mass_by_cell[cell] += std::norm(b.coeff);
            }
        }
        long long best_cell = 0;
        double best_mass = -1.0;
        for (const auto& [cell, cell_mass] : mass_by_cell) {
            if (cell_mass > best_mass) {
                best_mass = cell_mass;
                best_cell = cell;
            }
        }
        ne.sigma = static_cast<double>(best_cell) * result.sigma_grid;
        result.estimates.push_back(ne);
    }
    return result;
}

}  // namespace eigsim
