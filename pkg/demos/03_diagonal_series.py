"""
Diagonal forms and their series
===============================

For T = diag(a_1, a_2, ...) the function f(x) = (Tx, x) behaves according
to how the positive and negative parts of (a_n) sum.  We classify a few
sequences, rearrange the alternating harmonic series and evaluate some
diagonal measures.
"""

import math

from gleason_lab.sequences import (
    EVENS,
    AlternatingPower,
    ArithmeticIndexSet,
    Constant,
    Geometric,
    Power,
    SignedMerge,
    classify_frame_type,
    diagonal_measure_eval,
    heuristic_summability,
    rearrange_to_target,
)

# %%
zoo = {
    "1/n^2": Power(2.0),
    "(-1)^n / n": AlternatingPower(1.0),
    "(-1)^n": AlternatingPower(0.0),
    "+1 on evens, -1/n^2 on odds": SignedMerge(Constant(1.0), Power(2.0)),
    "-1/n": SignedMerge(Constant(0.0), Power(1.0)),
}
for name, s in zoo.items():
    cls, prov = classify_frame_type(s)
    print(f"{name:30s} case {cls.case:4s} {cls.value:35s} frame type: {cls.is_frame_type}")

# %%
# The partial-sum heuristic reads only the first million terms.
for name, s in zoo.items():
    print(f"{name:30s} {heuristic_summability(s).cls.value}")

# %%
# Greedy rearrangement steers the partial sums anywhere.
s = AlternatingPower(1.0)
for target in (-5.0, 0.0, math.pi):
    r = rearrange_to_target(s, target, 10**6)
    print(f"target {target:8.4f}: crossings {r.crossings:7d}, closest approach {r.closest_approach:.2e}")

# %%
# Values of diagonal measures on coordinate subspaces.
print("sum over even n of 1/n^2:", diagonal_measure_eval(Power(2.0), EVENS), "vs", math.pi**2 / 24)
print("geometric 1/2 on 2, 5, 8, ...:", diagonal_measure_eval(Geometric(0.5), ArithmeticIndexSet(2, 3)))
