"""
Discretized Sobolev-type forms on L^2(0, 1).

Functions are sampled on ``n_points`` equally spaced nodes and ``L^2`` is
replaced by the weighted inner product ``<u, v> = h sum u_i conj(v_i)``.
A :class:`DiscreteForm` stores the operator ``A`` with
``q(u) = <A u, u> = h u^H A u``, so its eigenvalues are the Rayleigh
quotients in the weighted geometry.

The family built here is

* ``s_hat(u) = int |u'|^2`` (forward differences, node weight ``h``),
* ``s_0(u) = |u(0)|^2 + |u(1)|^2``,
* ``s = s_hat + s_0`` and ``s_n = (1 + 1/n) s_hat + s_0``,

so that ``s_n`` decreases to ``s``.  The boundary form ``s_0`` is bounded on
every grid but its norm grows like ``1/h``; that blow-up is the
finite-dimensional trace of its singularity.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .hilbert import HermitianOp, Subspace, random_subspace
from .measures import GleasonMeasure, check_additivity, eval_measure
from .reports import CheckRecord, check

__all__ = [
    "Grid",
    "DiscreteForm",
    "build_forms",
    "ChainReport",
    "chain_report",
    "BlowupTable",
    "boundary_blowup",
    "NikodymReport",
    "nikodym_demo",
]


@dataclass(frozen=True)
class Grid:
    n_points: int

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ValueError("a grid needs at least 3 nodes")

    @property
    def h_exact(self):
        return Fraction(1, self.n_points - 1)

    @property
    def h(self):
        return 1.0 / (self.n_points - 1)

    @property
    def nodes(self):
        return np.linspace(0.0, 1.0, self.n_points)

    @classmethod
    def from_h(cls, h):
        """Grid with mesh ``h``; ``h`` may be a float, a Fraction or ``"1/k"``."""
        k = 1 / Fraction(h).limit_denominator(10**9)
        if k.denominator != 1:
            raise ValueError(f"1/h must be an integer, got {k}")
        return cls(int(k) + 1)


@dataclass(frozen=True)
class DiscreteForm:
    """Quadratic form ``q(u) = h u^H A u`` on a grid."""

    op: HermitianOp
    grid: Grid

    @property
    def matrix(self):
        return self.op.matrix

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        return float(self.grid.h * np.real(np.vdot(u, self.op.matrix @ u)))

    def __sub__(self, other):
        return DiscreteForm(self.op - other.op, self.grid)

    def min_eig(self):
        return self.op.min_eig()

    def norm(self):
        """Operator norm in the weighted geometry."""
        return self.op.norm()


def _difference_matrix(N):
    D = np.zeros((N - 1, N))
    i = np.arange(N - 1)
    D[i, i] = -1.0
    D[i, i + 1] = 1.0
    return D


def _boundary_term(N, node, h):
    A = np.zeros((N, N))
    A[node, node] = 1.0 / h
    return A


def build_forms(n, grid):
    """``{"s_n", "s", "s_hat", "s_0"}`` on ``grid``.

    ``s_n`` is assembled interval by interval from its own definition rather
    than from the other three, so the matrix identities
    ``s = s_hat + s_0`` and ``s_n = (1 + 1/n) s_hat + s_0`` are genuine checks.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    N, h = grid.n_points, grid.h
    D = _difference_matrix(N)
    # int |u'|^2 ~ sum_i h |(u_{i+1} - u_i)/h|^2 = h u^H (D^T D / h^2) u
    s_hat = D.T @ D / h**2
    s_0 = _boundary_term(N, 0, h) + _boundary_term(N, N - 1, h)
    s = s_hat + s_0
    c = 1.0 + 1.0 / n
    s_n = np.zeros((N, N))
    for i in range(N - 1):
        s_n[i : i + 2, i : i + 2] += (c / h**2) * np.array([[1.0, -1.0], [-1.0, 1.0]])
    s_n[0, 0] += 1.0 / h
    s_n[-1, -1] += 1.0 / h
    wrap = lambda m: DiscreteForm(HermitianOp(m), grid)
    return {"s_n": wrap(s_n), "s": wrap(s), "s_hat": wrap(s_hat), "s_0": wrap(s_0)}


def _identity_defect(lhs, rhs):
    """Max-entry defect relative to the largest entry involved."""
    scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    return float(np.max(np.abs(lhs - rhs))) / scale


@dataclass
class ChainReport:
    grid: Grid
    n_max: int
    min_eigs: dict
    records: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.records)


def chain_report(grid, n_max, tol=1e-10, identity_tol=1e-12):
    """Verify the decreasing chain ``s_1 >= s_2 >= ... >= s >= s_hat``.

    Minimal eigenvalues (weighted geometry) of ``s_n - s_{n+1}``,
    ``s_n - s`` and ``s - s_hat`` are reported and must be ``>= -tol``; the
    matrix identities are checked to ``identity_tol`` relative to the largest
    entry.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    forms = {n: build_forms(n, grid) for n in range(1, n_max + 1)}
    base = forms[1]
    s, s_hat, s_0 = base["s"], base["s_hat"], base["s_0"]
    records = []
    mins = {}
    worst_id = _identity_defect(s.matrix, s_hat.matrix + s_0.matrix)
    for n in range(1, n_max + 1):
        sn = forms[n]["s_n"]
        worst_id = max(worst_id, _identity_defect(sn.matrix, (1 + 1 / n) * s_hat.matrix + s_0.matrix))
    records.append(check("s = s_hat + s_0 and s_n = (1 + 1/n) s_hat + s_0",
                         "decreasing Sobolev form family", worst_id, 0.0, identity_tol))
    for n in range(1, n_max):
        mins[f"s_{n} - s_{n + 1}"] = (forms[n]["s_n"] - forms[n + 1]["s_n"]).min_eig()
    for n in range(1, n_max + 1):
        mins[f"s_{n} - s"] = (forms[n]["s_n"] - s).min_eig()
    mins["s - s_hat"] = (s - s_hat).min_eig()
    mins["s_hat"] = s_hat.min_eig()
    worst_key = min(mins, key=mins.get)
    records.append(CheckRecord("chain differences positive semidefinite", "s_n decreases to s",
                               mins[worst_key], -tol, tol, mins[worst_key] >= -tol, {"worst": worst_key}))
    # s_0 != 0, so s <= s_hat must fail
    reverse = (s_hat - s).min_eig()
    records.append(CheckRecord("s <= s_hat fails", "boundary form is nonzero", reverse, -tol, tol, reverse < -tol))
    return ChainReport(grid, n_max, mins, records)


@dataclass
class BlowupTable:
    h: list
    per_term_norm: list
    combined_norm: list
    slope: float
    records: list

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    def rows(self):
        return [
            {"h": h, "norm": nrm, "combined_norm": c, "slope": self.slope}
            for h, nrm, c in zip(self.h, self.per_term_norm, self.combined_norm)
        ]


def boundary_blowup(grids, rel_tol=1e-9, slope_tol=0.01):
    """Weighted operator norm of the boundary form ``s_0`` under refinement.

    Each rank-one term ``|u(0)|^2`` has norm ``1/h``.  The two terms act on
    orthogonal coordinates, so their sum also has norm ``1/h``.  Norms are
    computed from eigenvalues, compared with ``1/h``, required to grow
    strictly as ``h`` shrinks, and fitted on a log-log scale.
    """
    grids = list(grids)
    if len(grids) < 2:
        raise ValueError("need at least two grids")
    if len({g.n_points for g in grids}) != len(grids):
        raise ValueError("duplicate grids")
    grids = sorted(grids, key=lambda g: g.n_points)
    hs, per_term, combined = [], [], []
    for g in grids:
        N = g.n_points
        left = HermitianOp(_boundary_term(N, 0, g.h))
        per_term.append(float(np.max(np.abs(left.eigvalsh()))))
        combined.append(build_forms(1, g)["s_0"].norm())
        hs.append(g.h)
    slope = float(np.polyfit(np.log(hs), np.log(per_term), 1)[0])
    rel = max(abs(nrm * h - 1.0) for nrm, h in zip(per_term, hs))
    rel_c = max(abs(nrm * h - 1.0) for nrm, h in zip(combined, hs))
    growing = all(b > a for a, b in zip(per_term, per_term[1:]))
    records = [
        check("per-term boundary norm equals 1/h (relative)", "boundary form singularity signature", rel, 0.0, rel_tol),
        check("combined boundary norm equals 1/h (relative)", "boundary form singularity signature", rel_c, 0.0, rel_tol),
        CheckRecord("norm grows strictly as h decreases", "boundary form singularity signature",
                    growing, True, None, growing),
        check("log-log slope of norm against h", "boundary form singularity signature", slope, -1.0, slope_tol),
    ]
    return BlowupTable(hs, per_term, combined, slope, records)


@dataclass
class NikodymReport:
    n_max: int
    deviations: np.ndarray
    bounds: np.ndarray
    max_deviation: np.ndarray
    records: list

    @property
    def passed(self):
        return all(r.passed for r in self.records)


def nikodym_demo(T, S, n_max, subspaces, slack=1e-12, rng=None, additivity_parts=3):
    """Pointwise convergence of ``m_n(M) = tr((T + S/n) P_M)`` to ``tr(T P_M)``.

    ``subspaces`` is a list of :class:`~gleason_lab.hilbert.Subspace` or an
    integer count of random ones drawn from ``rng``.  Checks the rate bound
    ``|m_n(M) - m(M)| <= |S| dim(M) / n``, that the worst deviation over the
    sample does not increase with ``n``, and additivity of the limit over a
    random orthogonal family.
    """
    T = T if isinstance(T, HermitianOp) else HermitianOp(T)
    S = S if isinstance(S, HermitianOp) else HermitianOp(S)
    if T.dim != S.dim:
        raise ValueError(f"T acts on C^{T.dim} but S acts on C^{S.dim}")
    rng = np.random.default_rng(rng)
    d = T.dim
    if isinstance(subspaces, int):
        subspaces = [random_subspace(d, int(rng.integers(1, d + 1)), rng) for _ in range(subspaces)]
    subspaces = list(subspaces)
    for M in subspaces:
        if M.ambient_dim != d:
            raise ValueError("sampled subspace lives in a different space")
    m = GleasonMeasure(T)
    limit = np.array([eval_measure(m, M) for M in subspaces])
    dims = np.array([M.dim for M in subspaces])
    ns = np.arange(1, n_max + 1)
    dev = np.empty((n_max, len(subspaces)))
    for k, n in enumerate(ns):
        mn = GleasonMeasure(T + (1.0 / n) * S)
        dev[k] = np.abs([eval_measure(mn, M) for M in subspaces] - limit)
    bounds = S.norm() * dims[None, :] / ns[:, None]
    worst = dev.max(axis=1) if subspaces else np.zeros(n_max)
    excess = float(np.max(dev - bounds)) if subspaces else -math.inf
    increase = float(np.max(np.diff(worst))) if n_max > 1 else 0.0
    records = [
        CheckRecord("|m_n(M) - m(M)| <= |S| dim(M) / n", "pointwise convergence of measures",
                    excess, 0.0, slack, excess <= slack),
        CheckRecord("max sampled deviation nonincreasing in n", "uniform convergence of measures",
                    increase, 0.0, slack, increase <= slack),
    ]
    # orthogonal family from one random unitary
    basis = random_subspace(d, d, rng).basis
    cuts = np.sort(rng.choice(np.arange(1, d), size=min(additivity_parts - 1, d - 1), replace=False))
    parts = [Subspace(block, check=False) for block in np.split(basis, cuts, axis=1)]
    records.append(check_additivity(m, parts))
    return NikodymReport(n_max, dev, bounds, worst, records)
