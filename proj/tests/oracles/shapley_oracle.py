#!/usr/bin/env python3
"""Independent brute-force Shapley oracle.

Computes exact Shapley values with rational arithmetic for the fixture
games used by the C++ tests. Run it to regenerate the frozen constants
embedded in tests/test_game.cpp and tests/acceptance.cpp.
"""
from fractions import Fraction
from itertools import permutations
from math import factorial


def shapley_subsets(n, payoff):
    """Eq-style subset sum, exact rational arithmetic."""
    values = []
    for i in range(n):
        acc = Fraction(0)
        others = [j for j in range(n) if j != i]
        for mask in range(1 << (n - 1)):
            members = frozenset(others[b] for b in range(n - 1) if mask >> b & 1)
            s = len(members)
            w = Fraction(factorial(s) * factorial(n - s - 1), factorial(n))
            acc += w * (payoff(members | {i}) - payoff(members))
        values.append(acc)
    return values


def shapley_permutations(n, payoff):
    values = [Fraction(0)] * n
    for order in permutations(range(n)):
        prefix = frozenset()
        for player in order:
            values[player] += payoff(prefix | {player}) - payoff(prefix)
            prefix = prefix | {player}
    return [v / factorial(n) for v in values]


def three_player_example():
    table = {
        frozenset(): 0, frozenset("A"): 1, frozenset("B"): 2, frozenset("C"): 2,
        frozenset("AB"): 4, frozenset("AC"): 3, frozenset("BC"): 3, frozenset("ABC"): 5,
    }
    idx = {0: "A", 1: "B", 2: "C"}

    def payoff(s):
        return Fraction(table[frozenset(idx[i] for i in s)])

    sub = shapley_subsets(3, payoff)
    per = shapley_permutations(3, payoff)
    assert sub == per
    print("three-player example:", [str(v) for v in sub], "=", [float(v) for v in sub])
    print("scaled by 1/v(U):    ", [float(v / 5) for v in sub])


def un_security_council():
    # 15 players, indices 0..4 permanent. Winning: all 5 permanent and >= 9 total.
    def payoff(s):
        return Fraction(1) if len(s) >= 9 and all(p in s for p in range(5)) else Fraction(0)

    sub = shapley_subsets(15, payoff)
    assert sum(sub) == 1
    assert all(v == sub[0] for v in sub[:5])
    assert all(v == sub[5] for v in sub[5:])
    print("UNSC permanent     :", sub[0], "=", repr(float(sub[0])))
    print("UNSC non-permanent :", sub[5], "=", repr(float(sub[5])))


if __name__ == "__main__":
    three_player_example()
    un_security_council()
