#include "eigsim/leakage.hpp"

#include <cmath>

namespace eigsim {

double ComplexLeakageReport::probability(Index s) const {
    if (s < s_min || s > s_max)
        throw DimensionError("offset " + std::to_string(s) + " outside the register window [" +
                             std::to_string(s_min) + ", " + std::to_string(s_max) + "]");
    return p_s(s - s_min);
}

ComplexLeakageReport leakage_analysis(double lambda_re, double lambda_im, double dt, Index m,
                                      Index r) {
    if (!(dt > 0.0)) throw PreconditionError("step dt must be positive");
    if (m < 1) throw PreconditionError("register needs at least two bins (m >= 1)");
    if (r <= 1)
        throw PreconditionError("window half-width r must be at least 2, got " + std::to_string(r));
    if (!(lambda_im > 0.0))
        throw PreconditionError("leakage analysis needs a decaying mode (imaginary part > 0)");
    const double b = -lambda_im * dt;
    if (b < -1.0)
        throw PreconditionError("per-step damping exponent b = " + std::to_string(b) +
                                " below -1; shrink dt");

    ComplexLeakageReport rep;
    rep.lambda_re = lambda_re;
    rep.lambda_im = lambda_im;
    rep.dt = dt;
    rep.m = m;
    rep.r = r;
    rep.b = b;

    const double bins = static_cast<double>(m + 1);
    rep.big_c = -b * bins;

    // Base cell: the integer q with minimal positive  lambda_re*dt - q/(m+1),
    // so the fractional offset a lands in (0, 1/(m+1)].
    const double u = lambda_re * dt * bins;
    const double q_real = std::ceil(u) - 1.0;
    rep.a = (u - q_real) / bins;
    const long long q_mod = static_cast<long long>(q_real) % static_cast<long long>(m + 1);
    rep.q_star = static_cast<Index>(q_mod < 0 ? q_mod + (m + 1) : q_mod);

    // expm1-based pieces of the closed form; em1_* = e^x - 1 flavors.
    const double em1_4b = std::expm1(4.0 * kPi * b);               // e^{4 pi b} - 1
    const double em1_4bm = std::expm1(4.0 * kPi * b * bins);       // e^{4 pi b (m+1)} - 1
    const double em1_2b = std::expm1(2.0 * kPi * b);               // e^{2 pi b} - 1
    const double em1_2bm = std::expm1(2.0 * kPi * b * bins);       // e^{2 pi b (m+1)} - 1
    const double e_2b = em1_2b + 1.0;
    const double e_2bm = em1_2bm + 1.0;

    rep.z_squared = em1_4bm / em1_4b;  // sum of e^{4 pi b l}, geometric
    const double prefactor = (-em1_4b) / ((-em1_4bm) * bins);

    rep.s_min = -((m + 2) / 2) + 1;  // -ceil((m+1)/2) + 1
    rep.s_max = (m + 1) / 2;         // floor((m+1)/2)
    rep.p_s = RVector::Zero(m + 1);

    double total = 0.0, tail = 0.0;
    for (Index s = rep.s_min; s <= rep.s_max; ++s) {
        const double atil = rep.a - static_cast<double>(s) / bins;
        const double sin_wide = std::sin(kPi * bins * atil);
        const double sin_cell = std::sin(kPi * atil);
        const double num = em1_2bm * em1_2bm + 4.0 * e_2bm * sin_wide * sin_wide;
        const double den = em1_2b * em1_2b + 4.0 * e_2b * sin_cell * sin_cell;
        const double p = prefactor * num / den;
        rep.p_s(s - rep.s_min) = p;
        total += p;
        if (s > r || s < -r) tail += p;
    }

    if (std::abs(total - 1.0) > 1e-10)
        throw PreconditionError("register probabilities sum to " + std::to_string(total) +
                                ", not 1; parameters are outside the stable regime");

    rep.tail_measured = tail;
    rep.tail_bound = std::exp(2.0 * kPi) / (8.0 * static_cast<double>(r - 1)) * (-em1_4b) * bins /
                     (-em1_4bm);
    rep.tail_bound_theta = std::exp(2.0 * kPi) / (8.0 * static_cast<double>(r - 1)) * 4.0 * kPi *
                           rep.big_c / (-std::expm1(-4.0 * kPi));
    return rep;
}

}  // namespace eigsim
