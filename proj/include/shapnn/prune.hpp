#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shapnn/data.hpp"
#include "shapnn/estimate.hpp"
#include "shapnn/mlp.hpp"

namespace shapnn {

enum class StrategyKind { SvBottomK, SvBottomP, SvBucket, RandomK, WBottomK };

/// One pruning rule plus its parameter: `k` for the fixed-size kinds,
/// `p` for the threshold/bucket kinds, `seed` for random selection.
struct StrategySpec {
    StrategyKind kind = StrategyKind::SvBucket;
    int k = 1;
    double p = 0.2;
    std::uint64_t seed = 0;

    bool uses_shapley() const {
        return kind == StrategyKind::SvBottomK || kind == StrategyKind::SvBottomP ||
               kind == StrategyKind::SvBucket;
    }

    /// Parses "name:param", e.g. "sv_bucket:0.2" or "random_k:3".
    static StrategySpec parse(const std::string& text);
    std::string name() const;
};

// Player-selection rules. Each returns a non-empty proper subset of the
// current players, ascending by index. Ties break toward the lower index.

/// The k players with smallest Shapley value.
std::vector<int> select_sv_bottom_k(const ShapleyVector& sv, int k);

/// Players with value below p/n (n = current player count); falls back to
/// the single minimum when none qualify, and never selects all players.
std::vector<int> select_sv_bottom_p(const ShapleyVector& sv, double p);

/// Longest ascending-value prefix whose value sum stays below p; falls back
/// to the single smallest player, and never selects all players.
std::vector<int> select_sv_bucket(const ShapleyVector& sv, double p);

/// Seeded uniform k-subset without replacement.
std::vector<int> select_random_k(int player_count, int k, std::uint64_t seed);

/// The k players with smallest weight norm.
std::vector<int> select_w_bottom_k(const std::vector<double>& norms, int k);

enum class PayoffDatasetChoice { Validation, Test };

PayoffDatasetChoice payoff_dataset_from_string(const std::string& name);
std::string to_string(PayoffDatasetChoice choice);

struct DerivationConfig {
    double theta = 0.9;        // accuracy threshold defining `found`
    int root_epochs = 20;      // epochs already spent on the root model
    int retrain_epochs = 2;    // fine-tuning epochs after each pruning step
    SamplingPlan sampling;     // Shapley estimation plan; seed re-derived per step
    PayoffDatasetChoice payoff_dataset = PayoffDatasetChoice::Validation;
    int max_steps = 0;         // 0 = walk down to the single-neuron floor
    bool log_sv_for_all = true; // estimate SVs for non-SV strategies too (for curves)
    double learning_rate = 0.1;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

struct StepRecord {
    int step = 0;
    int players_before = 0;
    int players_after = 0;
    std::vector<int> pruned_players; // original root-model neuron indices
    double removed_sv_sum = 0.0;     // NaN when SVs were not estimated
    double val_accuracy = 0.0;       // post-retrain validation accuracy
    double test_accuracy = 0.0;
    long cumulative_epochs = 0;
};

struct PruningWalk {
    std::string strategy;
    std::uint64_t seed = 0;
    double theta = 0.0;
    int root_players = 0;
    long root_epochs = 0;
    double root_val_accuracy = 0.0;
    double root_test_accuracy = 0.0;
    std::vector<StepRecord> steps;
    std::optional<int> found; // smallest player count with val accuracy >= theta
};

/// Iterative top-down derivation: estimate contributions, select players,
/// prune, retrain, record; repeats until one neuron remains (or max_steps).
/// `found` is computed over the whole walk afterwards.
PruningWalk run_derivation(const MlpModel& trained_root, const Splits& splits,
                           const StrategySpec& strategy, const DerivationConfig& config);

/// One row per step: step,players_before,players_after,pruned_ids,
/// removed_sv_sum,val_accuracy,test_accuracy,cumulative_epochs.
std::string walk_to_csv(const PruningWalk& walk);

/// Strategy, seed, found, and totals.
std::string walk_summary_json(const PruningWalk& walk);

} // namespace shapnn
