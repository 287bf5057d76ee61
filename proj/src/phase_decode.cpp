#include "eigsim/phase_decode.hpp"

#include <algorithm>
#include <cmath>

namespace eigsim {

PhaseDistribution inverse_fourier_decode(const std::vector<CVector>& trajectory,
                                         bool keep_conditioned) {
    const Index big_n = static_cast<Index>(trajectory.size());
    if (big_n == 0) throw DimensionError("cannot decode an empty register");
    const Index n = trajectory.front().size();
    double stack_sq = 0.0;
    for (const auto& v : trajectory) {
        if (v.size() != n) throw DimensionError("register blocks have mixed dimensions");
        stack_sq += v.squaredNorm();
    }
    if (stack_sq == 0.0) throw PreconditionError("cannot decode a zero register state");
    const double inv_stack = 1.0 / std::sqrt(stack_sq);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(big_n));

    PhaseDistribution dist;
    dist.register_size = big_n;
    dist.mass = RVector::Zero(big_n);
    if (keep_conditioned) dist.conditioned.resize(static_cast<std::size_t>(big_n));

    for (Index s = 0; s < big_n; ++s) {
        CVector acc = CVector::Zero(n);
        for (Index l = 0; l < big_n; ++l) {
            const double angle = -kTwoPi * static_cast<double>(l) * static_cast<double>(s) /
                                 static_cast<double>(big_n);
            acc += std::exp(cxd(0.0, angle)) * trajectory[static_cast<std::size_t>(l)];
        }
        acc *= inv_sqrt_n * inv_stack;
        dist.mass(s) = acc.squaredNorm();
        if (keep_conditioned) dist.conditioned[static_cast<std::size_t>(s)] = std::move(acc);
    }
    dist.post_select_prob = 1.0;
    return dist;
}

namespace {

struct Cluster {
    Index first = 0;  // arc start (circular)
    Index len = 0;    // arc length in bins
};

// Maximal runs of adjacent plateau-aware local maxima on the circle.
std::vector<Cluster> peak_clusters(const RVector& mass) {
    const Index n = mass.size();
    const double scale = mass.maxCoeff();
    const double tie_tol = 1e-12 * std::max(scale, 1e-300);

    std::vector<bool> is_peak(static_cast<std::size_t>(n), false);
    bool any_flat = false;
    for (Index s = 0; s < n; ++s) {
        const double left = mass((s + n - 1) % n);
        const double right = mass((s + 1) % n);
        is_peak[static_cast<std::size_t>(s)] =
            mass(s) >= left - tie_tol && mass(s) >= right - tie_tol;
        if (!is_peak[static_cast<std::size_t>(s)]) any_flat = true;
    }
    if (!any_flat) return {};  // flat register: nothing stands out

    std::vector<Cluster> clusters;
    Index start = 0;
    while (is_peak[static_cast<std::size_t>(start)]) ++start;  // begin off-peak
    Index s = start;
    do {
        if (is_peak[static_cast<std::size_t>(s)]) {
            Cluster c;
            c.first = s;
            while (is_peak[static_cast<std::size_t>(s)]) {
                ++c.len;
                s = (s + 1) % n;
            }
            clusters.push_back(c);
        } else {
            s = (s + 1) % n;
        }
    } while (s != start);
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.first < b.first; });
    return clusters;
}

}  // namespace

std::vector<SpectralEstimate> decode_estimate(const PhaseDistribution& dist, double dt,
                                              Index n_expected_peaks, double threshold_override) {
    if (dist.register_size <= 0 || dist.mass.size() != dist.register_size)
        throw DimensionError("phase distribution register is inconsistent");
    if (!(dt > 0.0)) throw PreconditionError("decode step dt must be positive");
    if (n_expected_peaks < 1)
        throw PreconditionError("expected peak count must be at least 1");
    if (std::abs(dist.mass.sum() - 1.0) > 1e-10)
        throw PreconditionError("register mass sums to " + std::to_string(dist.mass.sum()) +
                                ", not 1");

    const Index n = dist.register_size;
    const double threshold = threshold_override > 0.0
                                 ? threshold_override
                                 : 1.0 / (2.0 * static_cast<double>(n_expected_peaks));

    std::vector<SpectralEstimate> out;
    for (const Cluster& c : peak_clusters(dist.mass)) {
        // Window: the cluster arc dilated by one bin on each side (clipped to
        // the full circle for very wide clusters).
        const Index win_first = (c.first + n - 1) % n;
        const Index win_len = std::min<Index>(n, c.len + 2);

        double window_mass = 0.0;
        for (Index off = 0; off < win_len; ++off) window_mass += dist.mass((win_first + off) % n);
        if (window_mass < threshold) continue;

        // Head bin: largest mass in the cluster, ties toward the lower index.
        Index head = c.first;
        double head_mass = dist.mass(c.first);
        for (Index off = 1; off < c.len; ++off) {
            const Index s = (c.first + off) % n;
            if (dist.mass(s) > head_mass || (dist.mass(s) == head_mass && s < head)) {
                head = s;
                head_mass = dist.mass(s);
            }
        }

        // Circular centroid of the window, measured in bins relative to head.
        const Index head_off = (head + n - win_first) % n;
        double centroid = 0.0;
        for (Index off = 0; off < win_len; ++off)
            centroid += static_cast<double>(off - head_off) * dist.mass((win_first + off) % n);
        centroid /= window_mass;

        double phi = (static_cast<double>(head) + centroid) / static_cast<double>(n);
        phi -= std::floor(phi);  // wrap into [0, 1)

        SpectralEstimate est;
        est.register_index = head;
        est.mass = window_mass;
        if (phi <= 0.5 + 1e-12) {
            est.sign = 1;
            est.value = phi / dt;
        } else {
            est.sign = -1;
            est.value = -(1.0 - phi) / dt;
        }
        out.push_back(est);
    }

    std::sort(out.begin(), out.end(), [](const SpectralEstimate& a, const SpectralEstimate& b) {
        return a.register_index < b.register_index;
    });
    return out;
}

Index abs_oracle(Index l, Index register_size) {
    if (register_size <= 0 || l < 0 || l >= register_size)
        throw DimensionError("register value " + std::to_string(l) + " outside a size-" +
                             std::to_string(register_size) + " register");
    return (2 * l <= register_size) ? l : register_size - l;
}

}  // namespace eigsim
