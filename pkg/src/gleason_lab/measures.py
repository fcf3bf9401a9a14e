"""
Gleason measures on the subspace lattice of C^n.

Every finitely additive signed measure on a finite-dimensional quantum logic
(dimension not 2, bounded below on lines) is ``M -> tr(T P_M)`` for a unique
Hermitian ``T``; this module evaluates such measures and checks the
structural claims about them numerically.
"""

from dataclasses import dataclass

import numpy as np

from .config import get_tol
from .forms import FrameFunction, MatrixForm, polarize_recover
from .hilbert import (
    DimensionError,
    HermitianOp,
    Subspace,
    compressed_trace,
    is_orthogonal,
    join,
    trace,
)
from .reports import CheckRecord, check

__all__ = [
    "GleasonMeasure",
    "eval_measure",
    "jordan_measure",
    "is_state",
    "measure_from_frame",
    "frame_from_measure",
    "check_additivity",
    "RegularityReport",
    "check_regularity",
    "OrthogonalityError",
]

TRACE_FORMULA = "Gleason trace formula m(M) = tr(T P_M)"


class OrthogonalityError(ValueError):
    """Parts passed as an orthogonal family are not pairwise orthogonal."""


@dataclass(frozen=True)
class GleasonMeasure:
    T: HermitianOp

    @classmethod
    def from_matrix(cls, matrix):
        return cls(HermitianOp(matrix))

    @property
    def dim(self):
        return self.T.dim

    def __call__(self, M):
        return eval_measure(self, M)

    def __add__(self, other):
        return GleasonMeasure(self.T + other.T)

    def is_positive(self, tol=None):
        return self.T.is_positive(tol)


def eval_measure(m, M):
    """``m(M) = tr(T P_M)``; zero on the zero subspace."""
    if M.ambient_dim != m.dim:
        raise DimensionError(f"subspace in C^{M.ambient_dim}, measure on C^{m.dim}")
    return compressed_trace(m.T, M)


def jordan_measure(T, A):
    """Signed measure ``M -> tr(T (A P_M + P_M A) / 2)``.

    By cyclicity of the trace its generator is the Jordan product
    ``(T A + A T) / 2``.
    """
    T = T if isinstance(T, HermitianOp) else HermitianOp(T)
    A = A if isinstance(A, HermitianOp) else HermitianOp(A)
    if T.dim != A.dim:
        raise DimensionError("T and A act on different spaces")
    G = (T.matrix @ A.matrix + A.matrix @ T.matrix) / 2
    return GleasonMeasure(HermitianOp(G))


def is_state(m, tol=None):
    tol = get_tol().comparison if tol is None else tol
    return m.T.min_eig() >= -tol and abs(trace(m.T) - 1.0) <= tol


def measure_from_frame(f, dim=None):
    """Measure ``M -> W_M`` of a frame function, via its recovered generator."""
    dim = f.dim if dim is None else dim
    return GleasonMeasure(polarize_recover(f, dim).form.op)


def frame_from_measure(m):
    """``f(x) = m(sp(x))`` on unit vectors."""
    return FrameFunction(MatrixForm(m.T))


def check_additivity(m, parts, tol=None):
    """Compare ``m(join of parts)`` with the sum of ``m`` over the parts."""
    tol = get_tol().additivity if tol is None else tol
    parts = list(parts)
    for i, P in enumerate(parts):
        if P.ambient_dim != m.dim:
            raise DimensionError("part lives in a different space")
        for Q in parts[i + 1:]:
            if not is_orthogonal(P, Q):
                raise OrthogonalityError("parts are not pairwise orthogonal")
    whole = Subspace.zero(m.dim)
    for P in parts:
        whole = join(whole, P)
    lhs = eval_measure(m, whole)
    rhs = float(sum(eval_measure(m, P) for P in parts))
    return check("additivity over an orthogonal family", TRACE_FORMULA, lhs, rhs, tol)


@dataclass
class RegularityReport:
    chain_values: list
    target: float
    record: CheckRecord

    @property
    def passed(self):
        return self.record.passed


def check_regularity(m, M, tol=None):
    """Approximate ``m(M)`` from inside by an ascending chain of subspaces.

    The chain is spanned by eigenvectors of the compression of ``T`` to ``M``
    taken in decreasing eigenvalue order, so each step maximises ``m`` among
    subspaces of that dimension; the last step is ``M`` itself.
    """
    tol = get_tol().additivity if tol is None else tol
    if not m.is_positive():
        raise ValueError("regularity is defined here for positive measures only")
    if M.ambient_dim != m.dim:
        raise DimensionError("subspace lives in a different space")
    B = M.basis
    if M.dim:
        w, V = np.linalg.eigh(B.conj().T @ m.T.matrix @ B)
        order = np.argsort(w)[::-1]
        vecs = B @ V[:, order]
    chain = []
    for k in range(1, M.dim + 1):
        P = Subspace(vecs[:, :k], check=False)
        chain.append(eval_measure(m, P))
    target = eval_measure(m, M)
    sup = max(chain, default=0.0)
    final = chain[-1] if chain else 0.0
    rec = check(
        "finite-dimensional chain attains m(M)",
        "regularity: m(M) = sup over finite-dimensional P inside M",
        final,
        target,
        tol,
    )
    if abs(sup - final) > tol:
        rec = CheckRecord(rec.claim, rec.paper_ref, sup, target, tol, False)
    return RegularityReport(chain, target, rec)
