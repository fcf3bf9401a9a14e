"""
Measures on the subspace lattice of C^d
=======================================

A Hermitian T gives m(M) = tr(T P_M).  We check additivity on an
orthogonal split, recover T from its values on unit vectors, and watch the
chain values m(M_1) <= m(M_2) <= ... climb to m(M).
"""

import numpy as np

from gleason_lab import (
    FrameFunction,
    GleasonMeasure,
    Subspace,
    check_additivity,
    check_regularity,
    frame_weight,
    polarize_recover,
)
from gleason_lab.hilbert import random_hermitian, random_unitary

rng = np.random.default_rng(1)

# %%
# A random generator on C^5 and an orthogonal pair M, N.
T = random_hermitian(5, rng)
U = random_unitary(5, rng)
M, N = Subspace(U[:, :2], 5), Subspace(U[:, 2:4], 5)
m = GleasonMeasure(T)
print("m(M) =", m(M), " m(N) =", m(N), " m(M v N) =", m(M | N))
print(check_additivity(m, [M, N]))

# %%
# The frame weight of M does not depend on the orthonormal basis used.
f = FrameFunction.from_operator(T)
other = M.basis @ random_unitary(2, rng)
print("weight, basis 1:", frame_weight(f, M))
print("weight, basis 2:", frame_weight(f, M, other))

# %%
# Polarization gives T back from the values f(x) = (Tx, x).
res = polarize_recover(f, 5)
print("max entry error:", np.max(np.abs(res.form.op.matrix - T.matrix)))

# %%
# A positive generator: chain values increase to the value on M.
P = GleasonMeasure.from_matrix(np.diag([3.0, 2.0, 1.0, 0.5]))
rep = check_regularity(P, Subspace.full(4))
print("chain values:", rep.chain_values, "target:", rep.target)
