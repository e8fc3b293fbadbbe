#include "shapnn/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "shapnn/rng.hpp"

namespace shapnn {

namespace {

constexpr std::uint64_t kSubsetTag = 0x73756273ULL;
constexpr std::uint64_t kPermutationTag = 0x7065726dULL;

void validate(const CoalitionalGame& game, const SamplingPlan& plan, SamplingMethod expected) {
    if (game.player_count < 1) throw DomainError("estimate: empty game");
    if (plan.method != expected)
        throw DomainError("estimate: plan method does not match estimator");
    if (!plan.exhaustive && plan.samples < 1)
        throw DomainError("estimate: need at least one sample");
}

// omega_S / n! in log space; any common scale cancels in the ratio but this
// one keeps weights in (0, 1] for every player count.
double normalized_weight(int s, int n) {
    return std::exp(log_subset_weight(s, n) - std::lgamma(static_cast<double>(n) + 1.0));
}

} // namespace

std::string to_string(SamplingMethod method) {
    return method == SamplingMethod::Subset ? "subset" : "permutation";
}

SamplingMethod sampling_method_from_string(const std::string& name) {
    if (name == "subset") return SamplingMethod::Subset;
    if (name == "permutation") return SamplingMethod::Permutation;
    throw DomainError("unknown sampling method '" + name + "'");
}

EstimateReport estimate_subsets(const CoalitionalGame& game, const SamplingPlan& plan) {
    validate(game, plan, SamplingMethod::Subset);
    const int n = game.player_count;
    if (plan.exhaustive && n > kDefaultSubsetLimit)
        throw DomainError("estimate_subsets: exhaustive mode limited to " +
                          std::to_string(kDefaultSubsetLimit) + " players");

    PayoffCache cache(game);
    ShapleyVector phi(static_cast<std::size_t>(n), 0.0);
    int samples_used = 0;

    for (int i = 0; i < n; ++i) {
        double num = 0.0;
        double den = 0.0;
        if (plan.exhaustive) {
            // every S subseteq U \ {i}; degenerates to the exact subset form
            const std::uint64_t rest = ((n == 64 ? ~0ULL : (1ULL << n) - 1)) & ~(1ULL << i);
            std::uint64_t sub = rest;
            int count = 0;
            for (;;) {
                Coalition s = Coalition::from_mask(sub, n);
                const double w = normalized_weight(s.cardinality(), n);
                num += w * (cache.value(s.with(i)) - cache.value(s));
                den += w;
                ++count;
                if (sub == 0) break;
                sub = (sub - 1) & rest;
            }
            samples_used = count;
        } else {
            for (int t = 0; t < plan.samples; ++t) {
                Rng rng(derive_seed(plan.seed, kSubsetTag ^ static_cast<std::uint64_t>(i),
                                    static_cast<std::uint64_t>(t)));
                Coalition s(n);
                for (int j = 0; j < n; ++j)
                    if (j != i && (rng.next_u64() & 1ULL)) s.set(j);
                const double w = normalized_weight(s.cardinality(), n);
                num += w * (cache.value(s.with(i)) - cache.value(s));
                den += w;
            }
            samples_used = plan.samples;
        }
        phi[static_cast<std::size_t>(i)] = num / den;
    }

    EstimateReport report;
    report.estimates = std::move(phi);
    report.method = SamplingMethod::Subset;
    report.samples_used = samples_used;
    report.seed = plan.seed;
    report.payoff_evaluations = cache.evaluations();
    report.cache_hits = cache.hits();
    return report;
}

EstimateReport estimate_permutations(const CoalitionalGame& game, const SamplingPlan& plan) {
    validate(game, plan, SamplingMethod::Permutation);
    const int n = game.player_count;
    if (plan.exhaustive && n > kDefaultPermutationLimit)
        throw DomainError("estimate_permutations: exhaustive mode limited to " +
                          std::to_string(kDefaultPermutationLimit) + " players");

    PayoffCache cache(game);
    ShapleyVector sums(static_cast<std::size_t>(n), 0.0);
    long permutations = 0;

    auto walk = [&](const std::vector<int>& order) {
        Coalition prefix(n);
        double previous = cache.value(prefix);
        for (int player : order) {
            prefix.set(player);
            const double current = cache.value(prefix);
            sums[static_cast<std::size_t>(player)] += current - previous;
            previous = current;
        }
        ++permutations;
    };

    if (plan.exhaustive) {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        do {
            walk(order);
        } while (std::next_permutation(order.begin(), order.end()));
    } else {
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int t = 0; t < plan.samples; ++t) {
            Rng rng(derive_seed(plan.seed, kPermutationTag, static_cast<std::uint64_t>(t)));
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order);
            walk(order);
        }
    }

    for (double& x : sums) x /= static_cast<double>(permutations);

    EstimateReport report;
    report.estimates = std::move(sums);
    report.method = SamplingMethod::Permutation;
    report.samples_used = static_cast<int>(permutations);
    report.seed = plan.seed;
    report.payoff_evaluations = cache.evaluations();
    report.cache_hits = cache.hits();
    return report;
}

EstimateReport estimate_shapley(const CoalitionalGame& game, const SamplingPlan& plan) {
    return plan.method == SamplingMethod::Subset ? estimate_subsets(game, plan)
                                                 : estimate_permutations(game, plan);
}

std::string EstimateReport::to_json() const {
    nlohmann::json doc{
        {"method", shapnn::to_string(method)},
        {"samples", samples_used},
        {"seed", seed},
        {"estimates", estimates},
        {"payoff_evaluations", payoff_evaluations},
        {"cache_hits", cache_hits},
    };
    return doc.dump(2);
}

} // namespace shapnn
