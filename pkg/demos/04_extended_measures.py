"""
Measures with infinite values
=============================

Forms are tagged by a regular part and an optional singular part.  The
singular part vanishes on finite coordinate subspaces and is infinite on
infinite ones.  Adding it to the dimension measure keeps sigma-additivity,
while on its own it fails, so the sigma-additive measures are not closed
under the two-out-of-three rule.
"""

from gleason_lab.extmeasures import (
    DomainLabel,
    decide_sigma_additive,
    eval_ext,
    finite_sup,
    identity_measure,
    not_sub_gea_demo,
    oplus,
    singular_measure,
)
from gleason_lab.sequences import ALL_INDICES, FiniteIndexSet

m1, m2 = identity_measure(), singular_measure()
total = oplus(m1, m2)

# %%
for name, m in (("m1", m1), ("m2", m2), ("m1+m2", total)):
    d = decide_sigma_additive(m)
    print(f"{name:6s} {d.verdict.value:20s} rule: {d.rule}")

# %%
J = FiniteIndexSet((1, 2, 3))
print("on {1,2,3}:", eval_ext(m1, J), eval_ext(m2, J), eval_ext(total, J))
print("on all n  :", eval_ext(m1, ALL_INDICES), eval_ext(m2, ALL_INDICES), eval_ext(total, ALL_INDICES))
print("m2: sup over finite parts", finite_sup(m2, ALL_INDICES), "but value", eval_ext(m2, ALL_INDICES))

# %%
# Two unbounded measures on different domains cannot be added.
print(oplus(singular_measure(DomainLabel("D1")), singular_measure(DomainLabel("D2"))))

# %%
rep = not_sub_gea_demo()
print("sub-GEA:", rep.sub_gea, "witness:", rep.witness)
print("sigma violation:", rep.violation)
for r in rep.records:
    print(" ", r.claim, "->", "pass" if r.passed else "FAIL")
