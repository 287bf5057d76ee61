#pragma once

// Textbook phase-estimation readout, simulated exactly: build the joint
// register (1/sqrt(Q)) sum_j |j> U^j |b> by repeated application of the
// operator action, then decode the step register with the unitary inverse
// DFT.  The action must preserve norms to 1e-10 or the run is rejected.

#include "eigsim/phase_decode.hpp"
#include "eigsim/types.hpp"

#include <functional>

namespace eigsim {

using UnitaryAction = std::function<CVector(const CVector&)>;

PhaseDistribution qpe_simulate(const UnitaryAction& u, const CVector& input, Index q_bits,
                               bool keep_conditioned = false);

// Register width for a target resolution eps and confidence slack delta:
// ceil(log2(1/eps)) + ceil(log2(2 + 1/(2 delta))).
Index qpe_register_bits(double eps, double delta);

}  // namespace eigsim
