#pragma once

// The three end-to-end estimation pipelines.
//
// algorithm1_real: propagate the input through the Taylor chain of
// 2*pi*i*dt*M, keep the step-state blocks, inverse-DFT the step register and
// decode signed eigenvalue estimates.
//
// algorithm2_complex: two chained runs.  Stage one propagates the paired
// state sum_j E_j (x) conj(E_j) under pi*i*dt*(M (x) I + I (x) conj(M)),
// whose modes rotate with the *real* parts; each stage-one register bin then
// re-enters a second chain under pi*dt*(M (x) I - I (x) conj(M)), whose
// modes rotate with the *imaginary* parts.  Estimates pair a stage-one peak
// with the peaks of its window-aggregated stage-two distribution.
//
// Classical stability caveat: the paired generators also own cross modes
// E_j (x) conj(E_k), j != k, which grow like e^{pi (Im lg_k - Im lg_j) dt}
// per step in stage one (real-part differences in stage two).  The paired
// state carries none of them, but floating-point noise does, and m steps
// amplify it by e^{pi * spread * dt * m}.  Both stages therefore watch the
// step-state norms and reject the run when the growth passes 1e8 -- beyond
// that the register is rounding noise, not signal.  Spectra whose
// imaginary (and real) spreads stay near pi^-1 * eps * |ln eps_mach| are
// safe; diagonal operators never couple and are immune.
//
// algorithm3_normal: for normal operators, read phase and magnitude off the
// eigenvector phase-rotation unitary: phase estimation recovers the
// eigenvalue angle, and each conditioned register state is decomposed over
// the labeled singular-triple branches to attach the rounded magnitude.

#include "eigsim/block_solver.hpp"
#include "eigsim/complex_matrix.hpp"
#include "eigsim/eigen_system.hpp"
#include "eigsim/encoding.hpp"
#include "eigsim/phase_decode.hpp"

#include <optional>
#include <vector>

namespace eigsim {

struct RealSpectrumResult {
    std::vector<SpectralEstimate> estimates;
    double post_select_prob = 0.0;   // modeled selection probability
    double ancilla_zero_mass = 0.0;  // measured step-state mass fraction of the chain solution
    Index amplification_rounds_model = 0;  // ceil(1 / sqrt(post_select_prob))
    EncodingParams params;
    PhaseDistribution distribution;
};

// The optional trailing params argument replaces the computed encoder
// parameters wholesale (harness --m/--k/--dt overrides).  An EigenSystem
// argument enables the ground-truth guards: non-real spectra and explicit
// rho below max |lambda| are rejected; raw-matrix calls are trusted.
RealSpectrumResult algorithm1_real(
    const ComplexMatrix& m, const InputState& input, double eps,
    std::optional<double> rho = std::nullopt,
    const std::optional<EncodingParams>& params_override = std::nullopt);
RealSpectrumResult algorithm1_real(
    const EigenSystem& es, const InputState& input, double eps,
    std::optional<double> rho = std::nullopt,
    const std::optional<EncodingParams>& params_override = std::nullopt);

struct ComplexEstimate {
    double re = 0.0;
    double im = 0.0;
    double mass = 0.0;  // joint window mass across the two registers
    Index stage1_index = 0;
    Index stage2_index = 0;
};

struct ComplexSpectrumResult {
    std::vector<ComplexEstimate> estimates;
    std::vector<SpectralEstimate> stage1_estimates;
    double stage1_mass = 0.0;     // step-state retention of the first chain
    double stage2_mass = 0.0;     // bin-averaged retention of the second chain
    double two_stage_mass = 0.0;  // product accounting for both selections
    double stage1_growth = 1.0;   // max step-state norm over the initial norm
    double stage2_growth = 1.0;   // worst growth across the per-bin chains
    double cond_e = 1.0;          // eigenvector conditioning used in the mass floors
    EncodingParams params;
    PhaseDistribution stage1_distribution;
};

ComplexSpectrumResult algorithm2_complex(
    const ComplexMatrix& m, double eps, std::optional<double> rho = std::nullopt,
    const std::optional<EncodingParams>& params_override = std::nullopt);
ComplexSpectrumResult algorithm2_complex(
    const EigenSystem& es, double eps, std::optional<double> rho = std::nullopt,
    const std::optional<EncodingParams>& params_override = std::nullopt);

struct NormalEstimate {
    double sigma = 0.0;  // grid-rounded magnitude
    double theta = 0.0;  // angle in turns, [0, 1)
    double mass = 0.0;
};

struct NormalSpectrumResult {
    std::vector<NormalEstimate> estimates;
    double w_unitarity_error = 0.0;    // ||W* W - I||
    double w_phase_error = 0.0;        // worst phase action error over eigenvectors
    double normality_defect_value = 0.0;
    double scale_c = 0.0;              // magnitude register scale
    double sigma_grid = 0.0;           // magnitude rounding pitch
    Index q_bits = 0;                  // angle register width
    bool zero_sigma_flag = false;      // some magnitude rounded to zero: its angle is undefined
    PhaseDistribution distribution;
};

NormalSpectrumResult algorithm3_normal(const ComplexMatrix& m, const InputState& input,
                                       double eps1, double eps2);

}  // namespace eigsim
