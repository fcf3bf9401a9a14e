"""
A decreasing family of Sobolev forms
====================================

On a grid of (0, 1) with mesh h the forms
s_n(u) = (1 + 1/n) int |u'|^2 + |u(0)|^2 + |u(1)|^2 decrease to
s = int |u'|^2 + |u(0)|^2 + |u(1)|^2.  The boundary part has norm 1/h,
which blows up under refinement.  At the end: measures tr((T + S/n) P_M)
converging to tr(T P_M).
"""

import numpy as np

from gleason_lab.hilbert import random_hermitian
from gleason_lab.sobolev import Grid, boundary_blowup, build_forms, chain_report, nikodym_demo

# %%
g = Grid.from_h("1/20")
forms = build_forms(4, g)
x = g.nodes
print("u = 1:", forms["s_hat"](np.ones_like(x)), forms["s_0"](np.ones_like(x)), forms["s"](np.ones_like(x)))
print("u = x:", forms["s_hat"](x), forms["s"](x))

# %%
rep = chain_report(g, 10)
for r in rep.records:
    print(r.claim, "->", "pass" if r.passed else "FAIL")

# %%
table = boundary_blowup([Grid.from_h(f"1/{k}") for k in (10, 20, 40, 80, 160, 320)])
for row in table.rows():
    print(f"h = {row['h']:.5f}  norm = {row['norm']:8.2f}")
print("log-log slope:", table.slope)

# %%
rng = np.random.default_rng(3)
rep = nikodym_demo(random_hermitian(4, rng), random_hermitian(4, rng), 50, 10, rng=rng)
print("worst deviation at n = 1, 10, 50:", rep.max_deviation[[0, 9, 49]])
print("all checks pass:", rep.passed)
