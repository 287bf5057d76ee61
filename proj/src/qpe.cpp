#include "eigsim/qpe.hpp"

#include "eigsim/encoding.hpp"

#include <cmath>
#include <vector>

namespace eigsim {

Index qpe_register_bits(double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("resolution eps must lie in (0, 1)");
    if (!(delta > 0.0)) throw PreconditionError("confidence slack delta must be positive");
    const double resolution = std::ceil(std::log2(1.0 / eps));
    const double slack = std::ceil(std::log2(2.0 + 1.0 / (2.0 * delta)));
    return static_cast<Index>(resolution + slack);
}

PhaseDistribution qpe_simulate(const UnitaryAction& u, const CVector& input, Index q_bits,
                               bool keep_conditioned) {
    if (!u) throw PreconditionError("phase estimation needs an operator action");
    if (input.size() == 0) throw DimensionError("phase estimation input is empty");
    if (q_bits < 1 || q_bits > 24)
        throw PreconditionError("register width " + std::to_string(q_bits) +
                                " outside the simulable range [1, 24]");
    const Index big_q = Index(1) << q_bits;
    if (big_q * input.size() > dimension_cap())
        throw DimensionCapError("joint register has " + std::to_string(big_q * input.size()) +
                                " amplitudes, above the configured cap");

    const double in_norm = input.norm();
    if (in_norm == 0.0) throw PreconditionError("phase estimation input is zero");

    std::vector<CVector> trajectory;
    trajectory.reserve(static_cast<std::size_t>(big_q));
    trajectory.push_back(input / in_norm);
    for (Index j = 1; j < big_q; ++j) {
        CVector next = u(trajectory.back());
        if (next.size() != input.size())
            throw DimensionError("operator action changed the state dimension");
        const double drift = std::abs(next.norm() - trajectory.back().norm());
        if (drift > 1e-10)
            throw NonUnitaryError("operator action drifted the norm by " + std::to_string(drift) +
                                  " at power " + std::to_string(j));
        trajectory.push_back(std::move(next));
    }
    return inverse_fourier_decode(trajectory, keep_conditioned);
}

}  // namespace eigsim
