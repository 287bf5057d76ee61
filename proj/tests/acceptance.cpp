// Acceptance gate.  Each invocation runs one numbered end-to-end criterion
// against its stated tolerance and wall-clock budget, prints supporting
// detail, and ends with a single labeled PASS/FAIL line:
//
//   acceptance <criterion 1..11> [--cli <path>]
//
// The CLI path is only needed by criterion 11 (report determinism).

#include "eigsim/algorithms.hpp"
#include "eigsim/block_solver.hpp"
#include "eigsim/bounds.hpp"
#include "eigsim/complex_matrix.hpp"
#include "eigsim/eigen_system.hpp"
#include "eigsim/encoding.hpp"
#include "eigsim/leakage.hpp"
#include "eigsim/phase_decode.hpp"
#include "eigsim/rng.hpp"
#include "eigsim/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace eigsim;

namespace {

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[768];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

struct Check {
    int checks = 0;
    int failures = 0;
    std::vector<std::string> messages;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++failures;
        if (messages.size() < 12) messages.push_back(what);
    }
    void note(const std::string& line) { messages.push_back(line); }
};

double circular_turn_distance(double x) {
    x -= std::floor(x);
    return std::min(x, 1.0 - x);
}

CMatrix random_dense(Index rows, Index cols, std::uint64_t seed) {
    Rng rng(seed);
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
    return m;
}

CVector random_state(Index n, std::uint64_t seed) {
    Rng rng(seed);
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
    return v / v.norm();
}

// n values along a jittered chain: consecutive gaps gap_lo + gap_jitter * u,
// the whole chain centered at zero and floated uniformly inside [-half, half].
std::vector<double> jittered_chain(Rng& rng, Index n, double gap_lo, double gap_jitter,
                                   double half) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (Index j = 1; j < n; ++j)
        v[static_cast<std::size_t>(j)] =
            v[static_cast<std::size_t>(j - 1)] + gap_lo + gap_jitter * rng.uniform();
    const double span = v.back();
    const double room = half - span / 2.0;
    const double offset = -span / 2.0 + (2.0 * rng.uniform() - 1.0) * std::max(0.0, room);
    for (double& x : v) x += offset;
    return v;
}

double stacked_relative_distance(const BlockSolution& a, const BlockSolution& b) {
    double sq = 0.0;
    for (Index p = 0; p < a.block_count(); ++p)
        sq += (a.flat[static_cast<std::size_t>(p)] - b.flat[static_cast<std::size_t>(p)])
                  .squaredNorm();
    return std::sqrt(sq) / std::max(1.0, b.total_norm);
}

// --- criterion 1: chain operator structure at m = 2, k = 2 -------------------

void criterion_structure(Check& ck) {
    const Index n = 3;
    const ComplexMatrix a = ComplexMatrix::from_dense(random_dense(n, n, 101));
    const EncodingParams params = custom_params(1.0, 1.0 / 64.0, 0.5, 2, 2);
    const BlockSystem sys = build_cmk(a, params);

    ck.expect(sys.matrix.rows() == 7 * n, "system should stack seven block rows");
    const CMatrix dense = sys.matrix.to_dense();
    const CMatrix ad = a.to_dense();
    const CMatrix eye = CMatrix::Identity(n, n);
    const auto block = [&](Index i, Index j) { return dense.block(i * n, j * n, n, n); };
    const auto is_exactly = [&](Index i, Index j, const CMatrix& want, const char* label) {
        ck.expect((block(i, j) - want).cwiseAbs().maxCoeff() == 0.0,
                  fmt("block (%ld, %ld) should equal %s exactly", i, j, label));
    };

    for (Index i = 0; i < 7; ++i) is_exactly(i, i, eye, "I");
    is_exactly(1, 0, -ad, "-A");            // first segment: Taylor steps
    is_exactly(2, 1, -ad / 2.0, "-A/2");
    is_exactly(3, 0, -eye, "-I");           // first segment launch row
    is_exactly(3, 1, -eye, "-I");
    is_exactly(3, 2, -eye, "-I");
    is_exactly(4, 3, -ad, "-A");            // second segment
    is_exactly(5, 4, -ad / 2.0, "-A/2");
    is_exactly(6, 3, -eye, "-I");           // second segment launch row
    is_exactly(6, 4, -eye, "-I");
    is_exactly(6, 5, -eye, "-I");

    const CMatrix zero = CMatrix::Zero(n, n);
    int off_pattern = 0;
    for (Index i = 0; i < 7; ++i) {
        for (Index j = 0; j < 7; ++j) {
            const bool named = (i == j) || (i == 1 && j == 0) || (i == 2 && j == 1) ||
                               (i == 3 && j <= 2) || (i == 4 && j == 3) || (i == 5 && j == 4) ||
                               (i == 6 && j >= 3 && j <= 5);
            if (!named && (block(i, j) - zero).cwiseAbs().maxCoeff() != 0.0) ++off_pattern;
        }
    }
    ck.expect(off_pattern == 0, fmt("%d unnamed blocks are nonzero", off_pattern));
    ck.expect(sys.rhs.head(n).cwiseAbs().maxCoeff() > 0.0 &&
                  sys.rhs.tail(6 * n).cwiseAbs().maxCoeff() == 0.0,
              "input state should occupy exactly the leading block of the right-hand side");
    ck.note("all 49 blocks of the m=2, k=2 operator match the displayed pattern exactly");
}

// --- criterion 2: block solve equals the defining recurrences ----------------

void criterion_recurrence(Check& ck) {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Index n = 1 + static_cast<Index>(s % 4);
        const Index m = 1 + static_cast<Index>((s / 2) % 8);
        const Index k = 1 + static_cast<Index>((s / 4) % 4);
        CMatrix raw = random_dense(n, n, 200 + s);
        raw *= 0.9 / raw.norm();
        const ComplexMatrix a = ComplexMatrix::from_dense(raw);
        const EncodingParams params = custom_params(1.0, 1.0 / 64.0, 0.5, m, k);
        const CVector x0 = random_state(n, 300 + s);

        const BlockSolution solved = solve_block_system(build_cmk(a, params, x0));
        const BlockSolution oracle = recurrence_oracle(a, params, x0);
        ck.expect(solved.block_count() == oracle.block_count(),
                  fmt("instance %llu: block counts differ", static_cast<unsigned long long>(s)));
        const double rel = stacked_relative_distance(solved, oracle);
        worst = std::max(worst, rel);
        ck.expect(rel <= 1e-10,
                  fmt("instance %llu (n=%ld m=%ld k=%ld): relative distance %.3e exceeds 1e-10",
                      static_cast<unsigned long long>(s), n, m, k, rel));
    }
    ck.note(fmt("worst relative distance across 50 instances: %.3e", worst));
}

// --- criterion 3: single-eigenvector bound suite ------------------------------

void criterion_bound_suite(Check& ck) {
    const int kInstances = 20;
    int step_rows_checked = 0, step_rows_passed = 0;
    int superposition_checked = 0, superposition_passed = 0;
    int residual_failures = 0, identity_failures = 0, squared_passes = 0;
    double worst_residual = 0.0, residual_bound = 0.0;
    double worst_identity = 0.0, identity_bound = 0.0;

    for (int inst = 0; inst < kInstances; ++inst) {
        Rng rng(derive_seed(400, static_cast<std::uint64_t>(inst)));
        const Index n = 2 + static_cast<Index>(inst % 3);
        std::vector<cxd> spectrum;
        for (Index j = 0; j < n; ++j)
            spectrum.emplace_back(0.6 * rng.uniform() - 0.3, 0.0);  // 2 pi dt |lambda| < 1
        const double cond = (inst % 2 == 0) ? 1.0 : 2.0;
        const EigenSystem es =
            make_eigensystem(n, spectrum, cond, derive_seed(401, static_cast<std::uint64_t>(inst)));
        const EncodingParams params = algorithm1_params(1.0, (inst % 2 == 0) ? 1.0 / 32.0 : 1.0 / 64.0);
        const Index j = static_cast<Index>(inst) % n;

        const ComplexMatrix gen =
            cxd(0.0, kTwoPi * params.dt) * es.matrix;
        const BlockSolution sol =
            solve_block_system(build_cmk(gen, params, basis_input_state(es, j).amplitudes));
        const BoundReport rep = check_truncation_bounds(es, sol, params);
        ck.expect(rep.preconditions_ok,
                  fmt("instance %d: preconditions unexpectedly violated", inst));

        for (const BoundRow& row : rep.rows) {
            const bool step_row = row.name.rfind("step_state_error", 0) == 0 ||
                                  row.name.rfind("step_norm_drift", 0) == 0;
            if (step_row) {
                ++step_rows_checked;
                step_rows_passed += row.pass ? 1 : 0;
                ck.expect(row.pass, fmt("instance %d: row %s measured %.3e exceeds bound %.3e",
                                        inst, row.name.c_str(), row.measured, row.bound));
            }
            if (row.name == "superposition_deviation" && !row.vacuous) {
                ++superposition_checked;
                superposition_passed += row.pass ? 1 : 0;
                ck.expect(row.pass, fmt("instance %d: superposition row measured %.3e > %.3e",
                                        inst, row.measured, row.bound));
            }
        }

        const BoundRow& residual = rep.row("norm_accounting_residual");
        ck.expect(residual.pass, fmt("instance %d: accounting residual %.3e exceeds e/(k+1)! = %.3e",
                                     inst, residual.measured, residual.bound));
        if (!residual.pass) {
            ++residual_failures;
            if (residual.measured > worst_residual) {
                worst_residual = residual.measured;
                residual_bound = residual.bound;
            }
        }
        const BoundRow& identity = rep.row("norm_accounting_identity");
        ck.expect(identity.pass, fmt("instance %d: accounting identity off by %.3e (tolerance %.1e)",
                                     inst, identity.measured, identity.bound));
        if (!identity.pass) {
            ++identity_failures;
            if (identity.measured > worst_identity) {
                worst_identity = identity.measured;
                identity_bound = identity.bound;
            }
        }
        if (rep.row("norm_accounting_identity_squared").pass &&
            rep.row("norm_accounting_residual_squared").pass)
            ++squared_passes;
    }

    ck.note(fmt("step-error rows: %d/%d pass; non-vacuous superposition rows: %d/%d pass",
                step_rows_passed, step_rows_checked, superposition_passed,
                superposition_checked));
    if (residual_failures || identity_failures) {
        ck.note(fmt("first-power accounting rows fail on %d/%d (residual) and %d/%d (identity) "
                    "instances; worst residual %.3e vs bound %.3e, worst identity gap %.3e vs %.1e",
                    residual_failures, kInstances, identity_failures, kInstances, worst_residual,
                    residual_bound, worst_identity, identity_bound));
        ck.note(fmt("the squared-coefficient accounting rows pass on %d/%d instances: the chain "
                    "weights Taylor term q of each step by (y^q/q!)^2, so the first-power tally "
                    "checked here can only hold at lambda = 0",
                    squared_passes, kInstances));
    }
}

// --- criterion 4: real-spectrum estimation end-to-end -------------------------

void criterion_real_end_to_end(Check& ck) {
    const double eps = 1.0 / 64.0;
    double worst_delta = 0.0, worst_margin = 1e300;
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(derive_seed(500, s));
        const Index n = std::vector<Index>{2, 4, 8}[s % 3];
        const double cond = std::vector<double>{1.0, 2.0, 5.0, 10.0}[s % 4];
        double gap_lo = 0.15, gap_jitter = 0.55;
        if (n == 4) { gap_lo = 0.12; gap_jitter = 0.14; }
        if (n == 8) { gap_lo = 0.108; gap_jitter = 0.018; }
        const std::vector<double> chain = jittered_chain(rng, n, gap_lo, gap_jitter, 0.45);
        std::vector<cxd> spectrum;
        for (double x : chain) spectrum.emplace_back(x, 0.0);
        // Repeat an eigenvalue on some larger instances (n = 2 would collapse
        // to a multiple of the identity, which rejects a skewed eigenbasis).
        if (s % 5 == 4 && n > 2) spectrum.back() = spectrum.front();

        const EigenSystem es = make_eigensystem(n, spectrum, cond, derive_seed(501, s));
        const RealSpectrumResult res =
            algorithm1_real(es, uniform_input_state(es), eps, 1.0);

        std::vector<double> distinct;
        for (const cxd& lambda : spectrum) {
            bool seen = false;
            for (double d : distinct) seen = seen || std::abs(d - lambda.real()) < 1e-15;
            if (!seen) distinct.push_back(lambda.real());
        }
        for (double truth : distinct) {
            double best = 1e300;
            for (const SpectralEstimate& e : res.estimates)
                best = std::min(best, std::abs(e.value - truth));
            worst_delta = std::max(worst_delta, best);
            ck.expect(best <= eps,
                      fmt("instance %llu (n=%ld cond %.0f): eigenvalue %.4f missed by %.4e",
                          static_cast<unsigned long long>(s), n, cond, truth, best));
        }
        const double floor = 1.0 / std::pow(3.0 * es.cond_e *
                                                std::sqrt(static_cast<double>(res.params.k)) *
                                                static_cast<double>(res.params.m),
                                            2.0);
        worst_margin = std::min(worst_margin, res.ancilla_zero_mass / floor);
        ck.expect(res.ancilla_zero_mass >= floor,
                  fmt("instance %llu: ancilla mass %.3e under floor %.3e",
                      static_cast<unsigned long long>(s), res.ancilla_zero_mass, floor));
    }
    ck.note(fmt("50 instances: worst eigenvalue error %.3e (tolerance %.3e), smallest "
                "mass/floor ratio %.3g",
                worst_delta, eps, worst_margin));
}

// --- criterion 5: complex-spectrum estimation end-to-end ----------------------

void criterion_complex_end_to_end(Check& ck) {
    const double eps = 1.0 / 32.0;
    double worst_re = 0.0, worst_im = 0.0, worst_margin = 1e300;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(derive_seed(600, s));
        const Index n = (s % 2 == 0) ? 2 : 4;
        // Real parts must stay resolvable (>= ~3 register cells apart) while the
        // real and imaginary spreads and the eigenbasis conditioning stay small
        // enough that the paired chains' cross modes cannot amplify rounding
        // noise into the signal (the noise floor scales like
        // cond^2 * e^{pi * spread / eps} * eps_machine).
        const double cond = std::vector<double>{1.0, 1.2, 1.5, 2.0}[s % 4];
        const std::vector<double> re =
            (n == 2) ? jittered_chain(rng, 2, 0.14, 0.13, 0.15)
                     : jittered_chain(rng, 4, 0.090, 0.004, 0.15);
        std::vector<cxd> spectrum;
        for (double x : re) spectrum.emplace_back(x, -0.14 + 0.28 * rng.uniform());

        const EigenSystem es = make_eigensystem(n, spectrum, cond, derive_seed(601, s));
        const ComplexSpectrumResult res = algorithm2_complex(es, eps, 1.0);

        for (const cxd& truth : spectrum) {
            double best_re = 1e300, best_im = 1e300;
            for (const ComplexEstimate& e : res.estimates) {
                const double dre = std::abs(e.re - truth.real());
                const double dim = std::abs(e.im - truth.imag());
                if (std::max(dre, dim) < std::max(best_re, best_im)) {
                    best_re = dre;
                    best_im = dim;
                }
            }
            worst_re = std::max(worst_re, best_re);
            worst_im = std::max(worst_im, best_im);
            ck.expect(best_re <= eps && best_im <= eps,
                      fmt("instance %llu (n=%ld cond %.1f): %.3f%+.3fi missed (re off %.4e, "
                          "im off %.4e)",
                          static_cast<unsigned long long>(s), n, cond, truth.real(), truth.imag(),
                          best_re, best_im));
        }
        const double kappa = res.cond_e;
        const double floor =
            1.0 / std::pow(9.0 * std::pow(kappa, 4.0) * static_cast<double>(res.params.k) *
                               static_cast<double>(res.params.m) *
                               static_cast<double>(res.params.m),
                           2.0);
        worst_margin = std::min({worst_margin, res.stage1_mass / floor, res.stage2_mass / floor});
        ck.expect(res.stage1_mass >= floor && res.stage2_mass >= floor,
                  fmt("instance %llu: stage masses %.3e / %.3e under floor %.3e",
                      static_cast<unsigned long long>(s), res.stage1_mass, res.stage2_mass,
                      floor));
    }
    ck.note(fmt("20 instances: worst re error %.3e, worst im error %.3e (tolerance %.3e), "
                "smallest stage-mass/floor ratio %.3g",
                worst_re, worst_im, eps, worst_margin));
}

// --- criterion 6: normal-operator magnitude/angle readout ---------------------

void criterion_normal_end_to_end(Check& ck) {
    const double eps1 = 1.0 / 64.0, eps2 = 1.0 / 64.0;
    double worst_sigma = 0.0, worst_theta = 0.0, worst_unitarity = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(derive_seed(700, s));
        const Index n = std::vector<Index>{2, 4, 8}[s % 3];

        std::vector<double> sigma(static_cast<std::size_t>(n), 0.0);
        sigma[0] = 0.15 + 0.05 * rng.uniform();
        for (Index j = 1; j < n; ++j)
            sigma[static_cast<std::size_t>(j)] =
                sigma[static_cast<std::size_t>(j - 1)] + 0.07 + 0.04 * rng.uniform();
        const double theta_offset = rng.uniform();
        std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
        for (Index j = 0; j < n; ++j) {
            const double base =
                (static_cast<double>(j) + 0.3 + 0.4 * rng.uniform()) / static_cast<double>(n);
            theta[static_cast<std::size_t>(j)] = base + theta_offset - std::floor(base + theta_offset);
        }
        // Decorrelate the magnitude and angle orderings with a coprime stride.
        const Index stride = (n == 8) ? 3 : 1;
        std::vector<cxd> spectrum;
        for (Index j = 0; j < n; ++j)
            spectrum.push_back(std::polar(sigma[static_cast<std::size_t>(j)],
                                          kTwoPi * theta[static_cast<std::size_t>((j * stride) % n)]));

        const EigenSystem es = make_eigensystem(n, spectrum, 1.0, derive_seed(701, s));
        const NormalSpectrumResult res =
            algorithm3_normal(es.matrix, uniform_input_state(es), eps1, eps2);

        worst_unitarity = std::max({worst_unitarity, res.w_unitarity_error, res.w_phase_error});
        ck.expect(res.w_unitarity_error <= 1e-10,
                  fmt("instance %llu: ||W*W - I|| = %.3e exceeds 1e-10",
                      static_cast<unsigned long long>(s), res.w_unitarity_error));
        ck.expect(res.w_phase_error <= 1e-10,
                  fmt("instance %llu: eigenvector phase action off by %.3e",
                      static_cast<unsigned long long>(s), res.w_phase_error));
        ck.expect(!res.zero_sigma_flag, fmt("instance %llu: unexpected zero-magnitude flag",
                                            static_cast<unsigned long long>(s)));

        for (const cxd& lambda : spectrum) {
            const double sig = std::abs(lambda);
            const double th = std::arg(lambda) / kTwoPi - std::floor(std::arg(lambda) / kTwoPi);
            double best_sig = 1e300, best_th = 1e300;
            for (const NormalEstimate& e : res.estimates) {
                const double ds = std::abs(e.sigma - sig);
                const double dth = circular_turn_distance(e.theta - th);
                if (std::max(ds / eps1, dth / eps2) < std::max(best_sig / eps1, best_th / eps2)) {
                    best_sig = ds;
                    best_th = dth;
                }
            }
            worst_sigma = std::max(worst_sigma, best_sig);
            worst_theta = std::max(worst_theta, best_th);
            ck.expect(best_sig <= eps1 && best_th <= eps2,
                      fmt("instance %llu: mode (%.3f, %.3f) missed (sigma off %.4e, theta off "
                          "%.4e)",
                          static_cast<unsigned long long>(s), sig, th, best_sig, best_th));
        }
    }
    ck.note(fmt("20 instances: worst magnitude error %.3e, worst angle error %.3e, worst "
                "operator defect %.3e",
                worst_sigma, worst_theta, worst_unitarity));
}

// --- criterion 7: damped-mode leakage closed form ------------------------------

std::vector<CVector> scalar_trajectory(cxd lambda, double dt, Index bins) {
    std::vector<CVector> traj;
    for (Index l = 0; l < bins; ++l) {
        CVector v(1);
        v(0) = std::exp(cxd(0.0, kTwoPi * dt * static_cast<double>(l)) * lambda);
        traj.push_back(v);
    }
    return traj;
}

void criterion_leakage(Check& ck) {
    double worst_pointwise = 0.0, worst_kernel = 0.0;
    for (double big_c : {1.0, 4.0, 16.0}) {
        for (Index r : {Index(4), Index(8)}) {
            for (Index m : {Index(31), Index(63)}) {
                for (double lambda_re : {0.137, 0.31}) {
                    const double lambda_im = big_c / static_cast<double>(m + 1);
                    const auto rep = leakage_analysis(lambda_re, lambda_im, 1.0, m, r);
                    const auto dist = inverse_fourier_decode(
                        scalar_trajectory(cxd(lambda_re, lambda_im), 1.0, m + 1));

                    double total = 0.0, pointwise = 0.0;
                    for (Index s = rep.s_min; s <= rep.s_max; ++s) {
                        const Index bin = ((rep.q_star + s) % (m + 1) + (m + 1)) % (m + 1);
                        pointwise = std::max(pointwise,
                                             std::abs(rep.probability(s) - dist.mass(bin)));
                        total += rep.probability(s);
                    }
                    worst_pointwise = std::max(worst_pointwise, pointwise);
                    ck.expect(pointwise <= 1e-8,
                              fmt("C=%.0f r=%ld m=%ld re=%.3f: closed form off the register "
                                  "by %.3e",
                                  big_c, r, m, lambda_re, pointwise));
                    ck.expect(std::abs(total - 1.0) <= 1e-10,
                              fmt("C=%.0f r=%ld m=%ld: probabilities sum to %.12f", big_c, r, m,
                                  total));
                    ck.expect(rep.tail_measured <= std::min(1.0, rep.tail_bound),
                              fmt("C=%.0f r=%ld m=%ld: tail %.3e exceeds min(1, %.3e)", big_c, r,
                                  m, rep.tail_measured, rep.tail_bound));
                }
            }
        }
    }

    // Vanishing damping must reproduce the sharp phase-estimation kernel.
    for (double lambda_re : {0.137, 0.3}) {
        const Index m = 63;
        const auto rep = leakage_analysis(lambda_re, 1e-9, 1.0, m, 8);
        const double bins = static_cast<double>(m + 1);
        for (Index s = rep.s_min; s <= rep.s_max; ++s) {
            const double atil = rep.a - static_cast<double>(s) / bins;
            const double kernel =
                std::pow(std::sin(kPi * bins * atil) / (bins * std::sin(kPi * atil)), 2);
            worst_kernel = std::max(worst_kernel, std::abs(rep.probability(s) - kernel));
        }
    }
    ck.expect(worst_kernel <= 1e-6,
              fmt("weak-damping limit misses the sharp kernel by %.3e", worst_kernel));
    ck.note(fmt("24-point grid: worst pointwise gap %.3e; weak-damping kernel gap %.3e",
                worst_pointwise, worst_kernel));
}

// --- criterion 8: coverage sampling plan ---------------------------------------

void criterion_sampling(Check& ck) {
    RVector probs(4);
    probs << 0.25, 0.25, 0.25, 0.25;
    const SampleCoverage cov = plan_and_sample(probs, 0.01, 1, 2000, 1);
    ck.expect(cov.plan.sample_count == 24,
              fmt("uniform n=4, delta=0.01 should plan exactly 24 samples, planned %ld",
                  cov.plan.sample_count));
    ck.expect(cov.coverage >= 0.97,
              fmt("coverage %.4f below 0.97 over 2000 trials", cov.coverage));
    ck.expect(cov.coverage_bound_met, "coverage bound flag should be set");
    ck.note(fmt("plan %ld samples; %ld/%ld trials covered the support (%.4f)",
                cov.plan.sample_count, cov.covered, cov.trials, cov.coverage));
}

// --- criterion 9: Kronecker conditioning law -----------------------------------

void criterion_kron_conditioning(Check& ck) {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Index n = 2 + static_cast<Index>(s % 5);
        CMatrix p;
        double kappa = 0.0;
        for (std::uint64_t bump = 0;; ++bump) {  // keep kappa^2 well inside double precision
            p = random_dense(n, n, derive_seed(900 + bump, s));
            kappa = condition_number(p);
            if (kappa <= 50.0) break;
        }
        const CMatrix paired = kron(p, p.conjugate());
        const double measured = condition_number(paired);
        const double rel = std::abs(measured - kappa * kappa) / (kappa * kappa);
        worst = std::max(worst, rel);
        ck.expect(rel <= 1e-8,
                  fmt("instance %llu (n=%ld): cond %.6g squares to %.6g but the pair measures "
                      "%.6g (rel %.3e)",
                      static_cast<unsigned long long>(s), n, kappa, kappa * kappa, measured, rel));
    }
    ck.note(fmt("20 instances up to 6x6: worst relative deviation %.3e", worst));
}

// --- criterion 10: chain sparsity ceiling ---------------------------------------

void criterion_sparsity(Check& ck) {
    const Index n = 5;
    for (Index s : {Index(1), Index(2), Index(4)}) {
        for (Index k : {Index(2), Index(4), Index(8)}) {
            for (Index m : {Index(4), Index(16)}) {
                Rng rng(derive_seed(1000, static_cast<std::uint64_t>(s * 100 + k * 10 + m)));
                std::vector<CTriplet> ts;
                for (Index i = 0; i < n; ++i)
                    for (Index j = 0; j < s; ++j)
                        ts.emplace_back(i, (i + j) % n, rng.complex_gaussian());
                const ComplexMatrix a = ComplexMatrix::from_triplets(n, n, ts);
                const BlockSystem sys =
                    build_cmk(a, custom_params(1.0, 1.0 / 64.0, 0.5, m, k));
                const Index cap = s + k + 2;
                ck.expect(sys.matrix.max_row_nonzeros() <= cap,
                          fmt("s=%ld k=%ld m=%ld: max row nonzeros %ld exceeds %ld", s, k, m,
                              sys.matrix.max_row_nonzeros(), cap));
                ck.expect(sys.matrix.max_col_nonzeros() <= cap,
                          fmt("s=%ld k=%ld m=%ld: max col nonzeros %ld exceeds %ld", s, k, m,
                              sys.matrix.max_col_nonzeros(), cap));
            }
        }
    }
    ck.note("row/column occupation stayed within s + k + 2 across the whole sweep");
}

// --- criterion 11: report determinism through the CLI ---------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string strip_wall_time(const std::string& report) {
    std::istringstream in(report);
    std::string out, line;
    while (std::getline(in, line))
        if (line.find("\"wall_time_ms\"") == std::string::npos) out += line + "\n";
    return out;
}

void criterion_determinism(Check& ck, const std::string& cli) {
    if (cli.empty()) {
        ck.expect(false, "criterion 11 needs --cli <path to the command-line tool>");
        return;
    }
    namespace fs = std::filesystem;
    const std::string json_out = (fs::temp_directory_path() / "acceptance_report.json").string();
    const std::string csv_out = (fs::temp_directory_path() / "acceptance_report.csv").string();
    const std::string flags =
        " spectrum real --spectrum 0.25,-0.25 --cond 2 --seed 7 --eps 0.03125 --rho 1";

    const auto run = [&](const std::string& extra) {
        const std::string cmd = "\"" + cli + "\"" + flags + extra + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };

    ck.expect(run(" --out \"" + json_out + "\"") == 0, "first run failed");
    const std::string first = slurp(json_out);
    ck.expect(run(" --out \"" + json_out + "\"") == 0, "second run failed");
    const std::string second = slurp(json_out);

    ck.expect(!first.empty() && first.find("wall_time_ms") != std::string::npos,
              "report should be non-empty and carry a wall-time field");
    ck.expect(strip_wall_time(first) == strip_wall_time(second),
              "identical config+seed produced different reports outside the wall-time line");

    ck.expect(run(" --emit csv --out \"" + csv_out + "\"") == 0, "first csv run failed");
    const std::string csv_first = slurp(csv_out);
    ck.expect(run(" --emit csv --out \"" + csv_out + "\"") == 0, "second csv run failed");
    const std::string csv_second = slurp(csv_out);
    ck.expect(!csv_first.empty() && csv_first == csv_second,
              "csv emission is not byte-identical across identical runs");

    fs::remove(json_out);
    fs::remove(csv_out);
    ck.note(fmt("json reports byte-identical after dropping the wall-time line (%zu bytes); "
                "csv byte-identical (%zu bytes)",
                strip_wall_time(first).size(), csv_first.size()));
}

struct CriterionSpec {
    const char* title;
    double limit_seconds;
};

constexpr CriterionSpec kCriteria[] = {
    {"chain operator structure at m=2, k=2", 1.0},
    {"block solve equals the defining recurrences", 10.0},
    {"single-eigenvector bound suite", 30.0},
    {"real-spectrum estimation end-to-end", 300.0},
    {"complex-spectrum estimation end-to-end", 600.0},
    {"normal-operator magnitude/angle readout", 60.0},
    {"damped-mode leakage closed form", 60.0},
    {"coverage sampling plan", 30.0},
    {"Kronecker conditioning law", 5.0},
    {"chain sparsity ceiling", 5.0},
    {"report determinism through the CLI", 10.0},
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..11> [--cli <path>]\n");
        return 2;
    }
    const int criterion = std::atoi(argv[1]);
    if (criterion < 1 || criterion > 11) {
        std::fprintf(stderr, "criterion must be 1..11, got '%s'\n", argv[1]);
        return 2;
    }
    std::string cli;
    for (int i = 2; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--cli") == 0) cli = argv[i + 1];

    Check ck;
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (criterion) {
            case 1: criterion_structure(ck); break;
            case 2: criterion_recurrence(ck); break;
            case 3: criterion_bound_suite(ck); break;
            case 4: criterion_real_end_to_end(ck); break;
            case 5: criterion_complex_end_to_end(ck); break;
            case 6: criterion_normal_end_to_end(ck); break;
            case 7: criterion_leakage(ck); break;
            case 8: criterion_sampling(ck); break;
            case 9: criterion_kron_conditioning(ck); break;
            case 10: criterion_sparsity(ck); break;
            case 11: criterion_determinism(ck, cli); break;
        }
    } catch (const std::exception& e) {
        ck.expect(false, fmt("unexpected exception: %s", e.what()));
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const CriterionSpec& spec = kCriteria[criterion - 1];
    for (const std::string& line : ck.messages)
        if (!line.empty()) std::printf("  %s\n", line.c_str());
    const bool in_time = seconds < spec.limit_seconds;
    if (!in_time)
        std::printf("  time budget exceeded: %.2f s >= %.0f s\n", seconds, spec.limit_seconds);

    const bool pass = ck.failures == 0 && in_time;
    std::printf("ACCEPTANCE CRITERION %d: %s — %s [%d checks, %d failed, %.2f s, limit %.0f s]\n",
                criterion, pass ? "PASS" : "FAIL", spec.title, ck.checks, ck.failures, seconds,
                spec.limit_seconds);
    return pass ? 0 : 1;
}
