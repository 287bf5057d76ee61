#pragma once

// Register-leakage profile of a damped mode.  A mode with eigenvalue
// lambda_re + i*lambda_im (lambda_im > 0) feeds the step register a
// geometrically damped phase pattern; the inverse DFT then spreads its mass
// across every bin instead of concentrating near the frequency cell.  This
// module evaluates the closed-form bin probabilities P_s (offset s from the
// base cell q_star), the measured mass escaping a +-r window, and the
// analytic tail bound with its simplified Theta(C/r) form.  All
// exponentials go through expm1 so the weak-damping limit stays stable.

#include "eigsim/types.hpp"

namespace eigsim {

struct ComplexLeakageReport {
    double lambda_re = 0.0;
    double lambda_im = 0.0;
    double dt = 0.0;
    Index m = 0;  // register size is m + 1

    double a = 0.0;      // fractional frequency offset, in (0, 1/(m+1)]
    double b = 0.0;      // -lambda_im * dt, in [-1, 0)
    double big_c = 0.0;  // -b * (m+1), total damping across the register
    Index r = 0;         // window half-width
    Index q_star = 0;    // base register cell (mod m+1)
    Index s_min = 0;     // window of offsets covering each bin exactly once
    Index s_max = 0;
    RVector p_s;  // P_s for s = s_min..s_max; sums to 1 within 1e-10

    double z_squared = 0.0;       // squared norm of the damped register state
    double tail_measured = 0.0;   // mass at offsets |s| > r
    double tail_bound = 0.0;      // analytic bound on the tail
    double tail_bound_theta = 0.0;  // simplified Theta(C/r) form

    double probability(Index s) const;  // P_s lookup by offset
};

ComplexLeakageReport leakage_analysis(double lambda_re, double lambda_im, double dt, Index m,
                                      Index r);

}  // namespace eigsim
