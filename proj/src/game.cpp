#include "shapnn/game.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace shapnn {

namespace {

// binomial(n, k) exactly; safe for the enumeration range (n <= 21)
double binomial(int n, int k) {
    double acc = 1.0;
    for (int i = 1; i <= k; ++i)
        acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(acc);
}

// evaluate the oracle once per coalition and keep a dense table
std::vector<double> tabulate_payoffs(const CoalitionalGame& game) {
    const int n = game.player_count;
    std::vector<double> table(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < table.size(); ++mask)
        table[mask] = game.payoff(Coalition::from_mask(mask, n));
    return table;
}

} // namespace

std::uint64_t subset_weight(int s, int n) {
    if (n < 1) throw DomainError("subset_weight: player count must be positive");
    if (s < 0 || s >= n)
        throw DomainError("subset_weight: coalition size " + std::to_string(s) +
                          " outside [0, " + std::to_string(n - 1) + "]");
    if (n > 21)
        throw DomainError("subset_weight: exact integers overflow beyond 21 players; "
                          "use log_subset_weight");
    auto factorial = [](int k) {
        std::uint64_t f = 1;
        for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
        return f;
    };
    return factorial(s) * factorial(n - s - 1);
}

double log_subset_weight(int s, int n) {
    if (n < 1) throw DomainError("log_subset_weight: player count must be positive");
    if (s < 0 || s >= n)
        throw DomainError("log_subset_weight: coalition size out of range");
    return std::lgamma(static_cast<double>(s) + 1.0) +
           std::lgamma(static_cast<double>(n - s));
}

ShapleyVector shapley_exact_subsets(const CoalitionalGame& game, int enumeration_limit) {
    const int n = game.player_count;
    if (n < 1) throw DomainError("shapley_exact_subsets: empty game");
    if (n > enumeration_limit)
        throw DomainError("shapley_exact_subsets: " + std::to_string(n) +
                          " players exceeds the enumeration limit of " +
                          std::to_string(enumeration_limit));

    const std::vector<double> v = tabulate_payoffs(game);
    const std::uint64_t all = (std::size_t{1} << n) - 1;

    ShapleyVector phi(static_cast<std::size_t>(n), 0.0);
    std::vector<double> size_sums(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::fill(size_sums.begin(), size_sums.end(), 0.0);
        const std::uint64_t bit = 1ULL << i;
        const std::uint64_t rest = all & ~bit;
        // enumerate submasks of U \ {i}, including the empty set
        std::uint64_t sub = rest;
        for (;;) {
            const std::uint64_t s = static_cast<std::uint64_t>(std::popcount(sub));
            size_sums[s] += v[sub | bit] - v[sub];
            if (sub == 0) break;
            sub = (sub - 1) & rest;
        }
        // omega(s)/n! = 1 / (n * C(n-1, s))
        double acc = 0.0;
        for (int s = 0; s < n; ++s)
            acc += size_sums[static_cast<std::size_t>(s)] / (n * binomial(n - 1, s));
        phi[static_cast<std::size_t>(i)] = acc;
    }
    return phi;
}

ShapleyVector shapley_exact_permutations(const CoalitionalGame& game, int enumeration_limit) {
    const int n = game.player_count;
    if (n < 1) throw DomainError("shapley_exact_permutations: empty game");
    if (n > enumeration_limit)
        throw DomainError("shapley_exact_permutations: " + std::to_string(n) +
                          " players exceeds the enumeration limit of " +
                          std::to_string(enumeration_limit));

    const std::vector<double> v = tabulate_payoffs(game);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    ShapleyVector phi(static_cast<std::size_t>(n), 0.0);
    double permutations = 0.0;
    do {
        std::uint64_t prefix = 0;
        for (int player : order) {
            const std::uint64_t next = prefix | (1ULL << player);
            phi[static_cast<std::size_t>(player)] += v[next] - v[prefix];
            prefix = next;
        }
        permutations += 1.0;
    } while (std::next_permutation(order.begin(), order.end()));

    for (double& x : phi) x /= permutations;
    return phi;
}

// --- PayoffTable ------------------------------------------------------------

PayoffTable::PayoffTable(int player_count, std::vector<double> values)
    : n_(player_count), values_(std::move(values)) {
    if (player_count < 1 || player_count > 24)
        throw DomainError("PayoffTable: player count must be in [1, 24]");
    if (values_.size() != (std::size_t{1} << player_count))
        throw ValidationError("PayoffTable: expected " +
                              std::to_string(std::size_t{1} << player_count) +
                              " payoff entries, got " + std::to_string(values_.size()));
}

double PayoffTable::value(std::uint64_t mask) const {
    if (mask >= values_.size()) throw DomainError("PayoffTable: coalition mask out of range");
    return values_[mask];
}

CoalitionalGame PayoffTable::to_game() const {
    // copy the table into the closure so the game owns its data
    auto values = values_;
    return CoalitionalGame{n_, [values](const Coalition& c) { return values[c.to_mask()]; }};
}

PayoffTable PayoffTable::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open payoff table: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("payoff table " + path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("payoffs"))
        throw ValidationError("payoff table " + path + ": expected {\"n\", \"payoffs\"}");
    const int n = doc.at("n").get<int>();
    if (n < 1 || n > 24)
        throw ValidationError("payoff table " + path + ": n must be in [1, 24]");
    const auto& payoffs = doc.at("payoffs");
    const std::size_t expected = std::size_t{1} << n;
    if (!payoffs.is_object() || payoffs.size() != expected)
        throw ValidationError("payoff table " + path + ": need exactly " +
                              std::to_string(expected) + " coalition entries");
    std::vector<double> values(expected);
    std::vector<bool> seen(expected, false);
    for (const auto& [key, val] : payoffs.items()) {
        std::uint64_t mask = 0;
        try {
            mask = std::stoull(key);
        } catch (const std::exception&) {
            throw ValidationError("payoff table " + path + ": bad coalition key '" + key + "'");
        }
        if (mask >= expected)
            throw ValidationError("payoff table " + path + ": coalition key " + key +
                                  " out of range for n=" + std::to_string(n));
        if (!val.is_number())
            throw ValidationError("payoff table " + path + ": payoff for key " + key +
                                  " is not a number");
        values[mask] = val.get<double>();
        seen[mask] = true;
    }
    for (std::size_t mask = 0; mask < expected; ++mask)
        if (!seen[mask])
            throw ValidationError("payoff table " + path + ": missing coalition " +
                                  std::to_string(mask));
    return PayoffTable(n, std::move(values));
}

void PayoffTable::save_json(const std::string& path) const {
    nlohmann::json payoffs = nlohmann::json::object();
    for (std::size_t mask = 0; mask < values_.size(); ++mask)
        payoffs[std::to_string(mask)] = values_[mask];
    nlohmann::json doc{{"n", n_}, {"payoffs", std::move(payoffs)}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write payoff table: " + path);
    out << doc.dump(2) << '\n';
}

// --- PayoffCache ------------------------------------------------------------

double PayoffCache::value(const Coalition& c) {
    auto it = cache_.find(c);
    if (it != cache_.end()) {
        ++hits_;
        return it->second;
    }
    ++evaluations_;
    const double v = game_->payoff(c);
    cache_.emplace(c, v);
    return v;
}

// --- benchmark games --------------------------------------------------------

PayoffTable example_three_player() {
    // players A=0, B=1, C=2, indexed by coalition mask
    return PayoffTable(3, {0.0, 1.0, 2.0, 4.0, 2.0, 3.0, 3.0, 5.0});
}

CoalitionalGame make_un_security_council() {
    return CoalitionalGame{15, [](const Coalition& c) {
        if (c.cardinality() < 9) return 0.0;
        for (int p = 0; p < 5; ++p)
            if (!c.test(p)) return 0.0;
        return 1.0;
    }};
}

CoalitionalGame make_perturbed_uniform(int player_count, double epsilon, std::uint64_t seed) {
    if (player_count < 1) throw DomainError("make_perturbed_uniform: need at least one player");
    if (epsilon < 0.0 || epsilon >= 1.0 / player_count)
        throw DomainError("make_perturbed_uniform: epsilon must lie in [0, 1/n)");
    const int n = player_count;
    return CoalitionalGame{n, [n, epsilon, seed](const Coalition& c) {
        const int size = c.cardinality();
        if (size == 0) return 0.0;
        if (size == n) return 1.0; // u_U = 0 by construction
        std::uint64_t h = derive_seed(seed, 0x70657274ULL); // per-game stream
        for (std::uint64_t w : c.words()) h = mix64(h ^ w);
        Rng rng(h);
        return static_cast<double>(size) / n + rng.uniform(-epsilon, epsilon);
    }};
}

} // namespace shapnn
