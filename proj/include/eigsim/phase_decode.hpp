#pragma once

// Frequency-register decoding: exact unitary inverse DFT over the step
// register followed by peak extraction.
//
// decode_estimate finds plateau-aware local maxima, merges peaks closer than
// one grid cell, and reads each surviving peak through a windowed circular
// centroid (peak bin plus immediate neighbours).  The centroid refines the
// estimate within a bin while reproducing the plain bin decode exactly on
// one-hot distributions.  Frequencies phi <= 1/2 decode as positive values
// phi/dt, the upper half wraps to -(1-phi)/dt.

#include "eigsim/types.hpp"

#include <vector>

namespace eigsim {

struct PhaseDistribution {
    Index register_size = 0;
    RVector mass;                      // sums to 1 within 1e-10
    double post_select_prob = 1.0;     // mass retained by whatever selection produced this
    std::vector<CVector> conditioned;  // optional unnormalized per-bin residual states
};

// Unitary inverse DFT of a stacked step register (no padding: the register
// size is exactly trajectory.size()).  Bin s accumulates phase pattern
// e^{-2 pi i l s / N}, so a trajectory rotating as e^{2 pi i l phi} peaks at
// s = N phi.
PhaseDistribution inverse_fourier_decode(const std::vector<CVector>& trajectory,
                                         bool keep_conditioned = false);

struct SpectralEstimate {
    double value = 0.0;
    Index register_index = 0;
    int sign = 1;
    double mass = 0.0;
};

// Extract value estimates from a register distribution.  Peaks must carry
// window mass at least 1/(2 * n_expected_peaks) (or threshold_override when
// positive); a flat register yields no estimates; ties break toward the
// lower index.
std::vector<SpectralEstimate> decode_estimate(const PhaseDistribution& dist, double dt,
                                              Index n_expected_peaks = 1,
                                              double threshold_override = -1.0);

// Register magnitude map: l for l <= N/2, otherwise N - l.
Index abs_oracle(Index l, Index register_size);

}  // namespace eigsim
