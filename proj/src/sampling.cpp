#include "eigsim/sampling.hpp"

#include "eigsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace eigsim {

SamplePlan make_sample_plan(const RVector& probs, double delta) {
    if (probs.size() == 0) throw PreconditionError("sampling plan needs a distribution");
    if (!(delta > 0.0 && delta < 1.0))
        throw PreconditionError("failure budget delta must lie in (0, 1), got " +
                                std::to_string(delta));
    for (Index j = 0; j < probs.size(); ++j)
        if (!(probs(j) >= 0.0))
            throw PreconditionError("probability " + std::to_string(j) + " is negative");
    if (std::abs(probs.sum() - 1.0) > 1e-10)
        throw PreconditionError("probabilities sum to " + std::to_string(probs.sum()) +
                                ", not 1");

    SamplePlan plan;
    plan.probs = probs;
    plan.delta = delta;
    plan.p_max = probs.maxCoeff();
    if (!(plan.p_max > 0.0)) throw PreconditionError("distribution has empty support");
    plan.sample_count = static_cast<Index>(
        std::ceil(std::log(static_cast<double>(probs.size()) / delta) / plan.p_max));
    return plan;
}

namespace {

// One coverage trial: does a run of `shots` inverse-CDF draws hit every
// supported outcome?
bool trial_covers(const RVector& cumulative, const std::vector<Index>& support, Index shots,
                  std::uint64_t trial_seed) {
    Rng rng(trial_seed);
    std::vector<bool> seen(static_cast<std::size_t>(cumulative.size()), false);
    for (Index s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        Index lo = 0, hi = cumulative.size() - 1;
        while (lo < hi) {  // first bin with cumulative > u
            const Index mid = (lo + hi) / 2;
            if (cumulative(mid) > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        seen[static_cast<std::size_t>(lo)] = true;
    }
    for (Index j : support)
        if (!seen[static_cast<std::size_t>(j)]) return false;
    return true;
}

}  // namespace

SampleCoverage plan_and_sample(const RVector& probs, double delta, std::uint64_t seed,
                               Index trials, int par) {
    SampleCoverage result;
    result.plan = make_sample_plan(probs, delta);
    if (trials < 1) throw PreconditionError("coverage estimate needs at least one trial");
    if (par < 1) throw PreconditionError("worker count must be at least 1");
    result.trials = trials;

    RVector cumulative(probs.size());
    double acc = 0.0;
    std::vector<Index> support;
    for (Index j = 0; j < probs.size(); ++j) {
        acc += probs(j);
        cumulative(j) = acc;
        if (probs(j) > 0.0) support.push_back(j);
    }
    cumulative(probs.size() - 1) = 1.0;  // guard the top bin against round-off

    const Index shots = result.plan.sample_count;
    const int workers = static_cast<int>(std::min<Index>(par, trials));
    std::vector<Index> covered_per_worker(static_cast<std::size_t>(workers), 0);
    auto run_slice = [&](int w) {
        Index covered = 0;
        for (Index t = w; t < trials; t += workers)
            if (trial_covers(cumulative, support, shots, derive_seed(seed, static_cast<std::uint64_t>(t))))
                ++covered;
        covered_per_worker[static_cast<std::size_t>(w)] = covered;
    };

    if (workers == 1) {
        run_slice(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_slice, w);
        for (auto& th : pool) th.join();
    }

    for (Index c : covered_per_worker) result.covered += c;
    result.coverage = static_cast<double>(result.covered) / static_cast<double>(trials);
    result.coverage_bound_met = result.coverage >= 1.0 - delta - 0.02;  // sampling slack
    return result;
}

}  // namespace eigsim
