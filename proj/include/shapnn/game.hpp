#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "shapnn/coalition.hpp"

namespace shapnn {

/// Per-player contribution values, in payoff units.
using ShapleyVector = std::vector<double>;

/// A coalitional game: a player count and a payoff oracle.
/// The oracle must be a pure function of the coalition.
struct CoalitionalGame {
    int player_count = 0;
    std::function<double(const Coalition&)> payoff;
};

/// Explicit characteristic function: one payoff per coalition, keyed by
/// the coalition bitset. Total by construction (2^n entries).
class PayoffTable {
public:
    PayoffTable(int player_count, std::vector<double> values);

    int player_count() const { return n_; }
    double value(const Coalition& c) const { return values_[c.to_mask()]; }
    double value(std::uint64_t mask) const;
    const std::vector<double>& values() const { return values_; }

    CoalitionalGame to_game() const;

    /// Schema: {"n": 3, "payoffs": {"0": 0.0, "1": 1.0, ...}} with decimal
    /// bitset keys. Every coalition must be present.
    static PayoffTable load_json(const std::string& path);
    void save_json(const std::string& path) const;

private:
    int n_;
    std::vector<double> values_; // indexed by coalition mask
};

/// Memoizing oracle wrapper with evaluation-cost accounting.
class PayoffCache {
public:
    explicit PayoffCache(const CoalitionalGame& game) : game_(&game) {}

    double value(const Coalition& c);

    long evaluations() const { return evaluations_; } // distinct oracle calls
    long hits() const { return hits_; }

private:
    const CoalitionalGame* game_;
    std::unordered_map<Coalition, double, CoalitionHash> cache_;
    long evaluations_ = 0;
    long hits_ = 0;
};

inline constexpr int kDefaultSubsetLimit = 20;
inline constexpr int kDefaultPermutationLimit = 10;

/// omega_S = s! * (n-s-1)! computed in exact integer arithmetic.
/// Requires 0 <= s <= n-1 and n <= 21 (beyond that use log_subset_weight).
std::uint64_t subset_weight(int s, int n);

/// log(s! * (n-s-1)!) for any player count.
double log_subset_weight(int s, int n);

/// Exact Shapley values by full subset enumeration; O(n * 2^n) oracle
/// lookups after memoization. Refuses games above the enumeration limit.
ShapleyVector shapley_exact_subsets(const CoalitionalGame& game,
                                    int enumeration_limit = kDefaultSubsetLimit);

/// Exact Shapley values by averaging marginals over all n! player
/// orderings. Agrees with the subset form to rounding.
ShapleyVector shapley_exact_permutations(const CoalitionalGame& game,
                                         int enumeration_limit = kDefaultPermutationLimit);

// --- benchmark games -------------------------------------------------------

/// The three-player demo game (players A, B, C; v(U) = 5).
PayoffTable example_three_player();

/// 15-player simple voting game: coalition wins iff it contains all five
/// permanent members (players 0..4) and at least nine members in total.
CoalitionalGame make_un_security_council();

/// Near-uniform game: v(S) = |S|/n + u_S with u_S a per-coalition draw in
/// [-epsilon, epsilon], u_U = 0 and v(empty) = 0. Deterministic per seed.
CoalitionalGame make_perturbed_uniform(int player_count, double epsilon,
                                       std::uint64_t seed);

} // namespace shapnn
