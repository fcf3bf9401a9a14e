"""
Finite-dimensional complex Hilbert space numerics.

Vectors are plain 1-d complex numpy arrays.  The inner product is linear in
the left argument and antilinear in the right one, ``(x, y) = y^H x``.

A closed subspace is stored as a matrix whose columns form an orthonormal
basis; equality of subspaces is decided by projector proximity, since bases
are not unique.
"""

import numpy as np
import scipy.linalg

from .config import get_tol

__all__ = [
    "DimensionError",
    "as_vector",
    "inner",
    "norm",
    "is_unit",
    "Subspace",
    "HermitianOp",
    "orthonormalize",
    "span",
    "projector",
    "join",
    "meet",
    "ortho_complement",
    "is_orthogonal",
    "trace",
    "compressed_trace",
    "random_unitary",
    "random_hermitian",
    "random_subspace",
    "random_density",
    "decode_matrix",
    "encode_matrix",
]


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


def as_vector(x):
    v = np.asarray(x, dtype=complex).reshape(-1)
    if v.size == 0:
        raise ValueError("vector must have positive dimension")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def inner(x, y):
    """``(x, y)``, linear in ``x`` and antilinear in ``y``."""
    return complex(np.vdot(y, x))


def norm(x):
    return float(np.linalg.norm(x))


def is_unit(x, tol=None):
    tol = get_tol().construction if tol is None else tol
    return abs(norm(x) - 1.0) <= tol


class Subspace:
    """Closed subspace M of C^n held through an orthonormal basis.

    Parameters
    ----------
    basis : array, shape (n, k)
        Columns must be orthonormal.  ``k == 0`` is the zero subspace.
    ambient_dim : int, optional
        Needed only when ``basis`` is empty and carries no shape.
    """

    __slots__ = ("_basis", "_proj")

    def __init__(self, basis, ambient_dim=None, *, check=True):
        b = np.asarray(basis, dtype=complex)
        if b.size == 0:
            if ambient_dim is None:
                ambient_dim = b.shape[0] if b.ndim == 2 else 0
            b = np.zeros((ambient_dim, 0), dtype=complex)
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        if b.shape[0] == 0:
            raise ValueError("ambient dimension must be positive")
        if check and b.shape[1]:
            gram = b.conj().T @ b
            if np.max(np.abs(gram - np.eye(b.shape[1]))) > get_tol().construction:
                raise ValueError("basis columns are not orthonormal")
        b.setflags(write=False)
        self._basis = b
        self._proj = None

    @classmethod
    def zero(cls, ambient_dim):
        return cls(np.zeros((ambient_dim, 0)), ambient_dim)

    @classmethod
    def full(cls, ambient_dim):
        return cls(np.eye(ambient_dim))

    @classmethod
    def coordinate(cls, ambient_dim, indices):
        """Span of the standard basis vectors e_i, i in ``indices`` (0-based)."""
        eye = np.eye(ambient_dim)
        return cls(eye[:, sorted(set(indices))], ambient_dim)

    @property
    def basis(self):
        return self._basis

    @property
    def ambient_dim(self):
        return self._basis.shape[0]

    @property
    def dim(self):
        return self._basis.shape[1]

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self._basis.T)

    @property
    def projector(self):
        if self._proj is None:
            p = self._basis @ self._basis.conj().T
            p.setflags(write=False)
            self._proj = p
        return self._proj

    def contains(self, x, tol=None):
        tol = get_tol().comparison if tol is None else tol
        x = as_vector(x)
        return norm(x - self.projector @ x) <= tol * max(1.0, norm(x))

    def contains_subspace(self, other, tol=None):
        tol = get_tol().comparison if tol is None else tol
        _same_dim(self, other)
        return np.max(np.abs(self.projector @ other.projector - other.projector), initial=0.0) <= tol

    def equiv(self, other, tol=None):
        tol = get_tol().comparison if tol is None else tol
        _same_dim(self, other)
        return np.max(np.abs(self.projector - other.projector)) <= tol

    def __or__(self, other):
        return join(self, other)

    def __and__(self, other):
        return meet(self, other)

    def __invert__(self):
        return ortho_complement(self)

    def __repr__(self):
        return f"<Subspace of dim {self.dim} in C^{self.ambient_dim}>"


class HermitianOp:
    """Hermitian matrix; every one is trace class in finite dimension."""

    __slots__ = ("_m",)
    # keep numpy scalars from broadcasting through __array__ in alpha * op
    __array_ufunc__ = None

    def __init__(self, matrix, *, tol=None):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        tol = get_tol().construction if tol is None else tol
        defect = np.max(np.abs(m - m.conj().T))
        if defect > tol * max(1.0, np.max(np.abs(m))):
            raise ValueError(f"matrix is not Hermitian (defect {defect:.3g})")
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        self._m = m

    @property
    def matrix(self):
        return self._m

    @property
    def dim(self):
        return self._m.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._m if dtype is None else self._m.astype(dtype)

    def eigvalsh(self):
        return np.linalg.eigvalsh(self._m)

    def min_eig(self):
        return float(self.eigvalsh()[0])

    def norm(self):
        """Operator norm (largest absolute eigenvalue)."""
        return float(np.max(np.abs(self.eigvalsh())))

    def is_positive(self, tol=None):
        tol = get_tol().comparison if tol is None else tol
        return self.min_eig() >= -tol

    def __add__(self, other):
        if not isinstance(other, HermitianOp):
            return NotImplemented
        _same_dim(self, other)
        return HermitianOp(self._m + other._m)

    def __sub__(self, other):
        if not isinstance(other, HermitianOp):
            return NotImplemented
        _same_dim(self, other)
        return HermitianOp(self._m - other._m)

    def __mul__(self, alpha):
        alpha = float(alpha)
        return HermitianOp(alpha * self._m)

    __rmul__ = __mul__

    def __neg__(self):
        return HermitianOp(-self._m)

    def close_to(self, other, tol=None):
        tol = get_tol().comparison if tol is None else tol
        return self.dim == other.dim and np.max(np.abs(self._m - other._m)) <= tol

    def __repr__(self):
        return f"HermitianOp(dim={self.dim})"


def _same_dim(a, b):
    da = a.ambient_dim if isinstance(a, Subspace) else a.dim
    db = b.ambient_dim if isinstance(b, Subspace) else b.dim
    if da != db:
        raise DimensionError(f"dimension mismatch: {da} vs {db}")


def orthonormalize(vectors, ambient_dim=None, tol=None):
    """Gram-Schmidt with one reorthogonalisation pass.

    Vectors whose residual norm falls below ``tol`` (relative to the vector's
    own norm when that exceeds one) are treated as dependent and dropped.
    """
    tol = get_tol().construction if tol is None else tol
    vecs = [as_vector(v) for v in vectors]
    if not vecs:
        if ambient_dim is None:
            raise ValueError("ambient_dim is required for an empty vector list")
        return Subspace.zero(ambient_dim)
    n = vecs[0].size
    if any(v.size != n for v in vecs) or (ambient_dim is not None and ambient_dim != n):
        raise DimensionError("vectors do not share one ambient dimension")
    cols = []
    for v in vecs:
        w = v.copy()
        for _ in range(2):
            for q in cols:
                w = w - np.vdot(q, w) * q
        r = np.linalg.norm(w)
        if r > tol * max(1.0, np.linalg.norm(v)):
            cols.append(w / r)
    if not cols:
        return Subspace.zero(n)
    return Subspace(np.column_stack(cols), check=False)


def span(*vectors, ambient_dim=None):
    return orthonormalize(vectors, ambient_dim=ambient_dim)


def projector(M):
    return HermitianOp(M.projector)


def join(M, N):
    _same_dim(M, N)
    return orthonormalize(list(M) + list(N), ambient_dim=M.ambient_dim)


def ortho_complement(M):
    if M.dim == 0:
        return Subspace.full(M.ambient_dim)
    comp = scipy.linalg.null_space(M.basis.conj().T, rcond=get_tol().construction)
    return Subspace(comp, M.ambient_dim, check=False)


def meet(M, N):
    # (M^perp v N^perp)^perp
    _same_dim(M, N)
    return ortho_complement(join(ortho_complement(M), ortho_complement(N)))


def is_orthogonal(M, N, tol=None):
    tol = get_tol().comparison if tol is None else tol
    _same_dim(M, N)
    if M.dim == 0 or N.dim == 0:
        return True
    return np.max(np.abs(M.projector @ N.projector)) <= tol


def trace(T):
    t = np.trace(np.asarray(T, dtype=complex))
    if abs(t.imag) > get_tol().construction * max(1.0, abs(t.real)):
        raise ValueError(f"trace has imaginary part {t.imag:.3g}")
    return float(t.real)


def compressed_trace(T, M):
    """``tr(T P_M)``, computed as the trace of the compression B^H T B."""
    _same_dim(T, M)
    if M.dim == 0:
        return 0.0
    b = M.basis
    return float(np.real(np.trace(b.conj().T @ T.matrix @ b)))


def random_unitary(dim, rng):
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim, rng, scale=1.0):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOp(scale * (z + z.conj().T) / 2)


def random_subspace(ambient_dim, rank, rng):
    return Subspace(random_unitary(ambient_dim, rng)[:, :rank], check=False)


def random_density(dim, rng, rank=None):
    rank = dim if rank is None else rank
    a = rng.standard_normal((rank, dim)) + 1j * rng.standard_normal((rank, dim))
    rho = a.conj().T @ a
    return HermitianOp(rho / np.real(np.trace(rho)))


def decode_matrix(rows):
    """Row-major nested lists (reals or ``[re, im]`` pairs) to a complex array."""
    def entry(v):
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ValueError("complex entries are written as [re, im]")
            return complex(float(v[0]), float(v[1]))
        return complex(float(v))

    if not isinstance(rows, (list, tuple)) or not all(isinstance(r, (list, tuple)) for r in rows):
        raise ValueError("matrix must be a list of rows")
    if len({len(r) for r in rows}) > 1:
        raise ValueError("matrix rows have different lengths")
    return np.array([[entry(v) for v in row] for row in rows], dtype=complex)


def encode_matrix(m):
    """Inverse of :func:`decode_matrix`; every entry becomes ``[re, im]``."""
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]

