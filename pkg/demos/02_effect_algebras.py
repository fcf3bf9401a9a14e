"""
Finite generalized effect algebras
==================================

Partial sums given as tables.  The checker reports each axiom with
witnesses, derives the order, and tests subsets with the
two-out-of-three rule.
"""

from gleason_lab import gea
from gleason_lab.gea import check_axioms, derived_order, horizontal_sum_model, interval_model, is_sub_gea

# %%
# The interval {0, 1, 2, 3} with x + y defined while x + y <= 3.
m = interval_model(3)
rep = check_axioms(m)
print("interval passes:", rep.passed)
order = derived_order(m)
print("3 - 1 =", order.ominus("3", "1"))

# %%
# Break one entry: 1 + 2 = 3 becomes 1 + 2 = 2.
bad = m.with_entry("1", "2", "2").with_entry("2", "1", "2")
rep = check_axioms(bad)
for axiom in rep.failed():
    print(axiom, "fails, e.g.", rep.witnesses_for(axiom)[:2])

# %%
# Two blocks glued at 0 and 1: a and b are incomparable.
h = horizontal_sum_model()
print("horizontal sum passes:", check_axioms(h).passed)
print("a <= b?", derived_order(h).le("a", "b"))

# %%
# Sub-structures: {0, 2} is closed; {0, 1, 3} is not since 1 + 1 = 2.
print(is_sub_gea({"0", "2"}, m))
print(is_sub_gea({"0", "1", "3"}, m))

# %%
# How many models are there with n elements, up to relabelling?
for n in range(1, 6):
    print(n, sum(check_axioms(t).passed for t in gea.canonical_tables(n)))
