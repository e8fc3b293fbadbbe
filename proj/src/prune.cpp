#include "shapnn/prune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "shapnn/format.hpp"
#include "shapnn/rng.hpp"

namespace shapnn {

namespace {

// indices sorted by (value ascending, index ascending)
std::vector<int> ascending_order(const std::vector<double>& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
    });
    return order;
}

std::vector<int> take_bottom(const std::vector<double>& values, int k, const char* what) {
    const int n = static_cast<int>(values.size());
    if (k < 1) throw DomainError(std::string(what) + ": k must be at least 1");
    if (k >= n)
        throw DomainError(std::string(what) + ": k=" + std::to_string(k) +
                          " must leave at least one player of " + std::to_string(n));
    std::vector<int> order = ascending_order(values);
    order.resize(static_cast<std::size_t>(k));
    std::sort(order.begin(), order.end());
    return order;
}

} // namespace

std::vector<int> select_sv_bottom_k(const ShapleyVector& sv, int k) {
    return take_bottom(sv, k, "select_sv_bottom_k");
}

std::vector<int> select_sv_bottom_p(const ShapleyVector& sv, double p) {
    const int n = static_cast<int>(sv.size());
    if (n < 2) throw DomainError("select_sv_bottom_p: need at least two players");
    if (!(p > 0.0)) throw DomainError("select_sv_bottom_p: p must be positive");

    const double threshold = p / static_cast<double>(n);
    std::vector<int> picked;
    for (int i = 0; i < n; ++i)
        if (sv[static_cast<std::size_t>(i)] < threshold) picked.push_back(i);
    if (picked.empty())
        return {ascending_order(sv).front()}; // fallback: single minimum
    if (static_cast<int>(picked.size()) == n) {
        // spare the most valuable player so a proper subset remains
        const int keep = ascending_order(sv).back();
        picked.erase(std::find(picked.begin(), picked.end(), keep));
    }
    return picked;
}

std::vector<int> select_sv_bucket(const ShapleyVector& sv, double p) {
    const int n = static_cast<int>(sv.size());
    if (n < 2) throw DomainError("select_sv_bucket: need at least two players");
    if (!(p > 0.0)) throw DomainError("select_sv_bucket: p must be positive");

    const std::vector<int> order = ascending_order(sv);
    int best_length = 0;
    double sum = 0.0;
    for (int len = 1; len <= n - 1; ++len) {
        sum += sv[static_cast<std::size_t>(order[static_cast<std::size_t>(len - 1)])];
        if (sum < p) best_length = len;
    }
    if (best_length == 0) best_length = 1; // fallback: single smallest value

    std::vector<int> picked(order.begin(), order.begin() + best_length);
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::vector<int> select_random_k(int player_count, int k, std::uint64_t seed) {
    if (k < 1) throw DomainError("select_random_k: k must be at least 1");
    if (k >= player_count)
        throw DomainError("select_random_k: k=" + std::to_string(k) +
                          " must leave at least one player of " + std::to_string(player_count));
    Rng rng(derive_seed(seed, 0x72616e64ULL));
    return rng.sample_without_replacement(player_count, k);
}

std::vector<int> select_w_bottom_k(const std::vector<double>& norms, int k) {
    return take_bottom(norms, k, "select_w_bottom_k");
}

// --- StrategySpec -----------------------------------------------------------

StrategySpec StrategySpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);

    StrategySpec spec;
    bool wants_k = false;
    if (name == "sv_bottom_k") {
        spec.kind = StrategyKind::SvBottomK;
        wants_k = true;
    } else if (name == "sv_bottom_p") {
        spec.kind = StrategyKind::SvBottomP;
    } else if (name == "sv_bucket") {
        spec.kind = StrategyKind::SvBucket;
    } else if (name == "random_k") {
        spec.kind = StrategyKind::RandomK;
        wants_k = true;
    } else if (name == "w_bottom_k") {
        spec.kind = StrategyKind::WBottomK;
        wants_k = true;
    } else {
        throw DomainError("unknown pruning strategy '" + name + "'");
    }
    if (arg.empty())
        throw DomainError("strategy '" + name + "' needs a parameter, e.g. '" + name +
                          (wants_k ? ":1'" : ":0.2'"));
    try {
        std::size_t used = 0;
        if (wants_k) {
            spec.k = std::stoi(arg, &used);
            if (used != arg.size() || spec.k < 1) throw std::invalid_argument(arg);
        } else {
            spec.p = std::stod(arg, &used);
            if (used != arg.size() || !(spec.p > 0.0)) throw std::invalid_argument(arg);
        }
    } catch (const std::exception&) {
        throw DomainError("bad parameter '" + arg + "' for strategy '" + name + "'");
    }
    return spec;
}

std::string StrategySpec::name() const {
    std::ostringstream out;
    switch (kind) {
        case StrategyKind::SvBottomK: out << "sv_bottom_k:" << k; break;
        case StrategyKind::SvBottomP: out << "sv_bottom_p:" << p; break;
        case StrategyKind::SvBucket: out << "sv_bucket:" << p; break;
        case StrategyKind::RandomK: out << "random_k:" << k; break;
        case StrategyKind::WBottomK: out << "w_bottom_k:" << k; break;
    }
    return out.str();
}

PayoffDatasetChoice payoff_dataset_from_string(const std::string& name) {
    if (name == "validation") return PayoffDatasetChoice::Validation;
    if (name == "test") return PayoffDatasetChoice::Test;
    throw DomainError("payoff dataset must be 'validation' or 'test', got '" + name + "'");
}

std::string to_string(PayoffDatasetChoice choice) {
    return choice == PayoffDatasetChoice::Validation ? "validation" : "test";
}

// --- derivation walk --------------------------------------------------------

PruningWalk run_derivation(const MlpModel& trained_root, const Splits& splits,
                           const StrategySpec& strategy, const DerivationConfig& config) {
    if (!(config.theta > 0.0 && config.theta < 1.0))
        throw DomainError("run_derivation: theta must lie in (0, 1)");
    if (config.retrain_epochs < 0)
        throw DomainError("run_derivation: retrain epochs must be nonnegative");

    PruningWalk walk;
    walk.strategy = strategy.name();
    walk.seed = config.seed;
    walk.theta = config.theta;
    walk.root_players = trained_root.hidden_dim;
    walk.root_epochs = config.root_epochs;
    walk.root_val_accuracy = evaluate(trained_root, splits.validation).accuracy;
    walk.root_test_accuracy = evaluate(trained_root, splits.test).accuracy;

    const Dataset& payoff_data = config.payoff_dataset == PayoffDatasetChoice::Validation
                                     ? splits.validation
                                     : splits.test;

    MlpModel current = trained_root;
    std::vector<int> original_ids(static_cast<std::size_t>(current.hidden_dim));
    std::iota(original_ids.begin(), original_ids.end(), 0);
    long cumulative = config.root_epochs;

    for (int step = 1; current.hidden_dim > 1; ++step) {
        if (config.max_steps > 0 && step > config.max_steps) break;
        const int players = current.hidden_dim;

        ShapleyVector sv;
        if (strategy.uses_shapley() || config.log_sv_for_all) {
            SamplingPlan plan = config.sampling;
            plan.seed = derive_seed(config.seed, 0x73766573ULL, static_cast<std::uint64_t>(step));
            sv = estimate_shapley(as_game(current, payoff_data), plan).estimates;
        }

        std::vector<int> selected;
        switch (strategy.kind) {
            case StrategyKind::SvBottomK:
                selected = select_sv_bottom_k(sv, std::min(strategy.k, players - 1));
                break;
            case StrategyKind::SvBottomP:
                selected = select_sv_bottom_p(sv, strategy.p);
                break;
            case StrategyKind::SvBucket:
                selected = select_sv_bucket(sv, strategy.p);
                break;
            case StrategyKind::RandomK:
                selected = select_random_k(
                    players, std::min(strategy.k, players - 1),
                    derive_seed(mix64(config.seed) ^ strategy.seed, 0x726e6473ULL,
                                static_cast<std::uint64_t>(step)));
                break;
            case StrategyKind::WBottomK: {
                std::vector<double> norms(static_cast<std::size_t>(players));
                for (int j = 0; j < players; ++j)
                    norms[static_cast<std::size_t>(j)] = weight_norm(current, j);
                selected = select_w_bottom_k(norms, std::min(strategy.k, players - 1));
                break;
            }
        }

        StepRecord record;
        record.step = step;
        record.players_before = players;
        record.removed_sv_sum = std::numeric_limits<double>::quiet_NaN();
        if (!sv.empty()) {
            double sum = 0.0;
            for (int i : selected) sum += sv[static_cast<std::size_t>(i)];
            record.removed_sv_sum = sum;
        }
        for (int i : selected)
            record.pruned_players.push_back(original_ids[static_cast<std::size_t>(i)]);

        current = prune_neurons(current, Coalition::from_members(selected, players));
        for (auto it = selected.rbegin(); it != selected.rend(); ++it)
            original_ids.erase(original_ids.begin() + *it);

        TrainConfig retrain;
        retrain.epochs = config.retrain_epochs;
        retrain.learning_rate = config.learning_rate;
        retrain.batch_size = config.batch_size;
        retrain.seed = derive_seed(config.seed, 0x72747261ULL, static_cast<std::uint64_t>(step));
        current = train(std::move(current), splits.train, retrain);
        cumulative += config.retrain_epochs;

        record.players_after = current.hidden_dim;
        record.val_accuracy = evaluate(current, splits.validation).accuracy;
        record.test_accuracy = evaluate(current, splits.test).accuracy;
        record.cumulative_epochs = cumulative;
        walk.steps.push_back(std::move(record));
    }

    if (walk.root_val_accuracy >= config.theta) walk.found = walk.root_players;
    for (const StepRecord& record : walk.steps)
        if (record.val_accuracy >= config.theta &&
            (!walk.found || record.players_after < *walk.found))
            walk.found = record.players_after;
    return walk;
}

std::string walk_to_csv(const PruningWalk& walk) {
    std::ostringstream out;
    out << "step,players_before,players_after,pruned_ids,removed_sv_sum,"
           "val_accuracy,test_accuracy,cumulative_epochs\n";
    for (const StepRecord& r : walk.steps) {
        out << r.step << ',' << r.players_before << ',' << r.players_after << ',';
        for (std::size_t i = 0; i < r.pruned_players.size(); ++i) {
            if (i) out << ';';
            out << r.pruned_players[i];
        }
        out << ',' << fmt_g17(r.removed_sv_sum) << ',' << fmt_g17(r.val_accuracy) << ','
            << fmt_g17(r.test_accuracy) << ',' << r.cumulative_epochs << '\n';
    }
    return out.str();
}

std::string walk_summary_json(const PruningWalk& walk) {
    nlohmann::json doc{
        {"strategy", walk.strategy},
        {"seed", walk.seed},
        {"theta", walk.theta},
        {"root_players", walk.root_players},
        {"root_val_accuracy", walk.root_val_accuracy},
        {"root_test_accuracy", walk.root_test_accuracy},
        {"steps", static_cast<int>(walk.steps.size())},
        {"final_players",
         walk.steps.empty() ? walk.root_players : walk.steps.back().players_after},
        {"total_epochs",
         walk.steps.empty() ? 0L : walk.steps.back().cumulative_epochs},
        {"found", nullptr},
    };
    if (walk.found) doc["found"] = *walk.found;
    return doc.dump(2);
}

} // namespace shapnn
