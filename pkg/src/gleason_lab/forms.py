"""
Bounded symmetric bilinear forms on C^n and their frame functions.

A form is carried by its Hermitian generator ``A``: ``t(x, y) = (A x, y)``.
The frame function of ``t`` is ``f(x) = t(x, x)`` on unit vectors, and its
weight on a subspace M is the sum of ``f`` over any orthonormal basis of M.
"""

from dataclasses import dataclass

import numpy as np

from .config import get_tol
from .hilbert import (
    DimensionError,
    HermitianOp,
    as_vector,
    inner,
    norm,
)

__all__ = [
    "MatrixForm",
    "FrameFunction",
    "NotQuadraticError",
    "PolarizationResult",
    "zero_form",
    "quad",
    "bilinear",
    "form_sum",
    "scalar_mul",
    "form_leq",
    "frame_weight",
    "polarize",
    "polarize_recover",
]


@dataclass(frozen=True)
class MatrixForm:
    op: HermitianOp

    @property
    def dim(self):
        return self.op.dim

    def __call__(self, x, y):
        return bilinear(self, x, y)

    def __add__(self, other):
        return form_sum(self, other)

    def __rmul__(self, alpha):
        return scalar_mul(alpha, self)

    def close_to(self, other, tol=None):
        return self.op.close_to(other.op, tol)


def zero_form(dim):
    """The form ``o`` with ``o(x, y) = 0``."""
    return MatrixForm(HermitianOp(np.zeros((dim, dim))))


def _check(t, x):
    x = as_vector(x)
    if x.size != t.dim:
        raise DimensionError(f"vector of dim {x.size} for a form on C^{t.dim}")
    return x


def bilinear(t, x, y):
    x, y = _check(t, x), _check(t, y)
    return inner(t.op.matrix @ x, y)


def quad(t, x):
    """``t(x, x)``; real because the generator is Hermitian."""
    x = _check(t, x)
    return float(np.real(np.vdot(x, t.op.matrix @ x)))


def form_sum(t, s):
    if t.dim != s.dim:
        raise DimensionError("forms live on different spaces")
    return MatrixForm(t.op + s.op)


def scalar_mul(alpha, t):
    return MatrixForm(float(alpha) * t.op)


def form_leq(t, s, tol=None):
    """``t <= s``: ``s - t`` positive semidefinite (domains coincide here)."""
    tol = get_tol().comparison if tol is None else tol
    if t.dim != s.dim:
        raise DimensionError("forms live on different spaces")
    return (s.op - t.op).min_eig() >= -tol


class FrameFunction:
    """``f(x) = t(x, x)`` restricted to the unit sphere."""

    def __init__(self, form):
        self.form = form

    @classmethod
    def from_operator(cls, T):
        T = T if isinstance(T, HermitianOp) else HermitianOp(T)
        return cls(MatrixForm(T))

    @property
    def dim(self):
        return self.form.dim

    def __call__(self, x):
        x = as_vector(x)
        r = norm(x)
        if abs(r - 1.0) > get_tol().construction:
            raise ValueError(f"frame functions live on the unit sphere (|x| = {r:.6g})")
        return quad(self.form, x)


def frame_weight(f, M, onb=None, tol=None):
    """Weight ``W_M = sum_i f(x_i)`` over an orthonormal basis of ``M``.

    ``onb`` may be given as a sequence of vectors or an (n, k) array of
    columns; it must be orthonormal and span ``M``.
    """
    tol = get_tol().comparison if tol is None else tol
    if M.ambient_dim != f.dim:
        raise DimensionError("subspace and frame function live on different spaces")
    if onb is None:
        vectors = list(M)
    else:
        arr = np.asarray(onb, dtype=complex)
        vectors = list(arr.T) if arr.ndim == 2 and arr.shape[0] == M.ambient_dim else [as_vector(v) for v in onb]
        if len(vectors) != M.dim:
            raise ValueError(f"basis has {len(vectors)} vectors, subspace has dim {M.dim}")
        if vectors:
            B = np.column_stack(vectors)
            if np.max(np.abs(B.conj().T @ B - np.eye(len(vectors)))) > tol:
                raise ValueError("supplied basis is not orthonormal")
        for v in vectors:
            if not M.contains(v, tol):
                raise ValueError("supplied basis vector does not lie in M")
    return float(sum(f(v) for v in vectors))


@dataclass(frozen=True)
class PolarizationResult:
    form: MatrixForm
    hermitian_defect: float
    sample_residual: float
    dim: int

    @property
    def uniqueness_hypothesis(self):
        """False in dimension 2, where uniqueness is not guaranteed by Gleason's theorem."""
        return self.dim != 2


class NotQuadraticError(ValueError):
    """The sampled function is not the quadratic form of any operator."""


def polarize(q, x, y):
    """``(1/4) sum_k i^k q(x + i^k y)``; equals ``t(x, y)`` for ``q = t-hat``."""
    return sum((1j**k) * q(x + (1j**k) * y) for k in range(4)) / 4


def polarize_recover(f, dim, tol=None, n_samples=16, seed=0):
    """Recover the Hermitian generator of a frame function known on the sphere.

    ``f`` is extended homogeneously, ``q(z) = |z|^2 f(z/|z|)``, the generator
    entries come from complex polarization on basis pairs, and the result is
    validated two ways: its Hermitian defect and the residual of ``f`` against
    the recovered quadratic form on ``n_samples`` seeded random unit vectors.
    Either exceeding ``tol`` raises :class:`NotQuadraticError`.
    """
    tol = get_tol().comparison if tol is None else tol

    def q(z):
        r = norm(z)
        if r == 0.0:
            return 0.0
        return r * r * float(f(z / r))

    eye = np.eye(dim, dtype=complex)
    A = np.empty((dim, dim), dtype=complex)
    for j in range(dim):
        for k in range(dim):
            # A[j, k] = (A e_k, e_j) = t(e_k, e_j)
            A[j, k] = polarize(q, eye[k], eye[j])
    scale = max(1.0, float(np.max(np.abs(A))))
    defect = float(np.max(np.abs(A - A.conj().T)))
    if defect > tol * scale:
        raise NotQuadraticError(
            f"polarized generator is not Hermitian (defect {defect:.3g}); "
            "the input is not the quadratic form of an operator"
        )
    form = MatrixForm(HermitianOp((A + A.conj().T) / 2, tol=np.inf))
    rng = np.random.default_rng(seed)
    residual = 0.0
    for _ in range(n_samples):
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        z /= norm(z)
        residual = max(residual, abs(quad(form, z) - float(f(z))))
    if residual > tol * scale:
        raise NotQuadraticError(
            f"recovered form misses the input by {residual:.3g} on sample vectors; "
            "the input is not the quadratic form of an operator"
        )
    return PolarizationResult(form, defect, residual, dim)
