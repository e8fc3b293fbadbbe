#!/usr/bin/env python3
"""Scalar recomputation of a 2-2-2 network forward pass.

Produces the probability fixture asserted in tests/test_mlp.cpp. Pure
python floats (IEEE doubles), written out to 17 significant digits.
"""
import math

# fixed small network
w1 = [[0.5, -0.25], [1.5, 0.75]]   # hidden x input
b1 = [0.1, -0.2]
w2 = [[-0.3, 0.8], [0.4, -0.6]]    # output x hidden
b2 = [0.05, -0.05]
x = [0.2, -0.4]

z = [b1[j] + w1[j][0] * x[0] + w1[j][1] * x[1] for j in range(2)]
a = [max(0.0, v) for v in z]
logits = [b2[c] + w2[c][0] * a[0] + w2[c][1] * a[1] for c in range(2)]
m = max(logits)
exps = [math.exp(v - m) for v in logits]
total = exps[0] + exps[1]
probs = [e / total for e in exps]

print("z      =", [repr(v) for v in z])
print("a      =", [repr(v) for v in a])
print("logits =", [repr(v) for v in logits])
print("probs  = %.17g, %.17g" % (probs[0], probs[1]))

# masked variants: neuron set {0}, {1}, {} active
for mask in ([True, False], [False, True], [False, False]):
    am = [a[j] if mask[j] else 0.0 for j in range(2)]
    lg = [b2[c] + w2[c][0] * am[0] + w2[c][1] * am[1] for c in range(2)]
    mm = max(lg)
    ee = [math.exp(v - mm) for v in lg]
    tt = ee[0] + ee[1]
    print("mask", mask, "probs = %.17g, %.17g" % (ee[0] / tt, ee[1] / tt))
