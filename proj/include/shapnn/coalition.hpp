#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "shapnn/errors.hpp"
#include "shapnn/rng.hpp"

namespace shapnn {

/// A subset of players 0..n-1, stored as a fixed-width bitset.
/// The width n is set at construction; all set bits are < n.
class Coalition {
public:
    Coalition() = default;

    explicit Coalition(int player_count)
        : n_(check_n(player_count)),
          bits_(static_cast<std::size_t>((player_count + 63) / 64), 0) {}

    static Coalition empty(int player_count) { return Coalition(player_count); }

    static Coalition full(int player_count) {
        Coalition c(player_count);
        for (int i = 0; i < player_count; ++i) c.set(i);
        return c;
    }

    // n <= 64 convenience constructor used by the enumeration loops
    static Coalition from_mask(std::uint64_t mask, int player_count) {
        Coalition c(player_count);
        if (player_count < 64 && (mask >> player_count) != 0)
            throw DomainError("coalition mask has bits >= player count");
        if (!c.bits_.empty()) c.bits_[0] = mask;
        return c;
    }

    static Coalition from_members(const std::vector<int>& members, int player_count) {
        Coalition c(player_count);
        for (int i : members) c.set(i);
        return c;
    }

    int player_count() const { return n_; }

    bool test(int i) const {
        check_index(i);
        return (bits_[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1ULL;
    }

    void set(int i) {
        check_index(i);
        bits_[static_cast<std::size_t>(i) / 64] |= 1ULL << (i % 64);
    }

    void reset(int i) {
        check_index(i);
        bits_[static_cast<std::size_t>(i) / 64] &= ~(1ULL << (i % 64));
    }

    Coalition with(int i) const {
        Coalition c = *this;
        c.set(i);
        return c;
    }

    Coalition without(int i) const {
        Coalition c = *this;
        c.reset(i);
        return c;
    }

    /// Complement within the player universe.
    Coalition complement() const {
        Coalition c(n_);
        for (int i = 0; i < n_; ++i)
            if (!test(i)) c.set(i);
        return c;
    }

    int cardinality() const {
        int total = 0;
        for (std::uint64_t w : bits_) total += std::popcount(w);
        return total;
    }

    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(cardinality()));
        for (int i = 0; i < n_; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    std::uint64_t to_mask() const {
        if (n_ > 64) throw DomainError("to_mask requires at most 64 players");
        return bits_.empty() ? 0 : bits_[0];
    }

    const std::vector<std::uint64_t>& words() const { return bits_; }

    bool operator==(const Coalition& other) const {
        return n_ == other.n_ && bits_ == other.bits_;
    }

private:
    static int check_n(int n) {
        if (n < 0) throw DomainError("player count must be nonnegative");
        return n;
    }

    void check_index(int i) const {
        if (i < 0 || i >= n_) throw DomainError("player index out of range");
    }

    int n_ = 0;
    std::vector<std::uint64_t> bits_;
};

struct CoalitionHash {
    std::size_t operator()(const Coalition& c) const {
        std::uint64_t h = mix64(static_cast<std::uint64_t>(c.player_count()));
        for (std::uint64_t w : c.words()) h = mix64(h ^ w);
        return static_cast<std::size_t>(h);
    }
};

} // namespace shapnn
