#pragma once

#include <cstdint>
#include <string>

#include "shapnn/game.hpp"

namespace shapnn {

enum class SamplingMethod { Subset, Permutation };

std::string to_string(SamplingMethod method);
SamplingMethod sampling_method_from_string(const std::string& name);

/// How to approximate Shapley values: which estimator, how many samples
/// (r permutations, or |R| subsets per player) and the seed.
/// `exhaustive` switches to enumerate-all test mode, which degenerates to
/// the corresponding exact definition.
struct SamplingPlan {
    SamplingMethod method = SamplingMethod::Permutation;
    int samples = 500;
    std::uint64_t seed = 0;
    bool exhaustive = false;
};

/// Estimates plus evaluation-cost accounting. payoff_evaluations counts
/// distinct oracle calls; payoff_evaluations + cache_hits equals the total
/// number of coalition lookups issued.
struct EstimateReport {
    ShapleyVector estimates;
    SamplingMethod method = SamplingMethod::Permutation;
    int samples_used = 0;
    std::uint64_t seed = 0;
    long payoff_evaluations = 0;
    long cache_hits = 0;

    std::string to_json() const;
};

/// Random-subset approximation: for each player, draws `samples` coalitions
/// from the powerset of U\{i} (each other player included with probability
/// one half) and returns the omega-weighted average marginal.
EstimateReport estimate_subsets(const CoalitionalGame& game, const SamplingPlan& plan);

/// Random-permutation approximation: draws `samples` orderings and walks
/// each one once, so a permutation costs n+1 coalition lookups before caching.
EstimateReport estimate_permutations(const CoalitionalGame& game, const SamplingPlan& plan);

/// Dispatch on plan.method.
EstimateReport estimate_shapley(const CoalitionalGame& game, const SamplingPlan& plan);

} // namespace shapnn
