#pragma once

// Deterministic randomness helpers.  The standard <random> distributions are
// implementation-defined (two standard libraries may consume engine output
// differently), so every draw here is derived from raw mt19937_64 words with
// fixed arithmetic.  Reports produced from the same seed are byte-identical
// on any platform.

#include "eigsim/types.hpp"

#include <cstdint>
#include <random>

namespace eigsim {

// splitmix64: cheap, well-mixed stream splitter.  Used to derive independent
// per-trial / per-object seeds from one user-facing seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller on explicit uniforms.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        do {
            u = uniform();
        } while (u <= 0.0);
        const double v = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u));
        spare_ = radius * std::sin(kTwoPi * v);
        have_spare_ = true;
        return radius * std::cos(kTwoPi * v);
    }

    cxd complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return cxd(re, im);
    }

    std::uint64_t word() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace eigsim
