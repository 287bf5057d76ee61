#pragma once

// Measurement-budget planning: how many shots until every outcome of a
// distribution has been seen at least once, and a Monte-Carlo check of how
// often the planned budget actually covers the support.  Sampling uses a
// fixed inverse-CDF transform over raw engine words with per-trial derived
// seeds, so results are identical for any thread count.

#include "eigsim/types.hpp"

#include <cstdint>

namespace eigsim {

struct SamplePlan {
    RVector probs;
    double p_max = 0.0;
    double delta = 0.0;
    Index sample_count = 0;  // ceil(ln(n/delta) / p_max)
};

struct SampleCoverage {
    SamplePlan plan;
    Index trials = 0;
    Index covered = 0;        // trials in which every supported outcome appeared
    double coverage = 0.0;    // covered / trials
    bool coverage_bound_met = false;  // coverage >= 1 - delta - 0.02 (sampling slack)
};

SamplePlan make_sample_plan(const RVector& probs, double delta);

SampleCoverage plan_and_sample(const RVector& probs, double delta, std::uint64_t seed,
                               Index trials, int par = 1);

}  // namespace eigsim
