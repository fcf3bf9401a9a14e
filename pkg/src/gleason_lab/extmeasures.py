"""
Regular measures with infinite values on the subspace lattice of l^2.

A measure is represented by the positive form that induces it through the
generalized trace formula (``tr(t o P_M)`` when that is trace class, ``inf``
otherwise).  Forms are tagged rather than computed: a regular part given
by a diagonal :class:`~gleason_lab.sequences.SeqDescriptor` or a finite
Hermitian block, and an optional *declared* singular part.

Singular forms cannot be built constructively (they come from Hamel bases).
A declared singular part is modelled by the consequences actually used:
it vanishes on every finite-dimensional subspace spanned by canonical basis
vectors and is not trace class on any infinite-dimensional one.  All
subspaces here are of that kind, described by index sets.
"""

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import gea
from .hilbert import HermitianOp, decode_matrix
from .reports import CheckRecord
from .sequences import (
    ALL_INDICES,
    ZERO,
    Constant,
    FiniteIndexSet,
    SeqDescriptor,
    SummabilityClass,
    diagonal_measure_eval,
    parse_index_set,
    parse_seq,
    seq_add,
)

__all__ = [
    "DomainLabel",
    "DomainPoset",
    "FULL_SPACE",
    "TraceClassDiagonal",
    "BoundedDiagonal",
    "FiniteMatrix",
    "DiagonalPlusMatrix",
    "DeclaredSingular",
    "TaggedForm",
    "ExtMeasure",
    "Undefined",
    "Verdict",
    "SigmaDecision",
    "UndecidableError",
    "zero_measure",
    "identity_measure",
    "singular_measure",
    "oplus",
    "eval_ext",
    "finite_sup",
    "decide_sigma_additive",
    "sigma_violation_witness",
    "NonSubGEAReport",
    "not_sub_gea_demo",
    "FrameTypeView",
    "ftf_view",
    "ftf_oplus",
    "induces_frame_function",
    "parse_ext_measure",
]


# ------------------------------------------------------------------ domains


@dataclass(frozen=True, order=True)
class DomainLabel:
    """Opaque name for a dense linear submanifold (a form domain)."""

    id: str
    is_full_space: bool = False

    def __str__(self):
        return self.id


FULL_SPACE = DomainLabel("H", True)


class DomainPoset:
    """Declared inclusions between domain labels; ``FULL_SPACE`` is the top.

    Only equality and the full-space test matter for definedness of the
    partial sum; inclusions refine :meth:`meet`.
    """

    def __init__(self):
        self._below = {}

    def declare_subset(self, small, big):
        if big == small:
            return
        if self.leq(big, small):
            raise ValueError(f"declaring {small} <= {big} would break antisymmetry")
        self._below.setdefault(big, set()).add(small)

    def leq(self, a, b):
        if a == b or b.is_full_space:
            return True
        stack, seen = [b], set()
        while stack:
            c = stack.pop()
            for d in self._below.get(c, ()):
                if d == a:
                    return True
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        return False

    def meet(self, a, b):
        if self.leq(a, b):
            return a
        if self.leq(b, a):
            return b
        ida, idb = sorted([a.id, b.id])
        return DomainLabel(f"({ida})&({idb})")


DOMAINS = DomainPoset()


# ------------------------------------------------------------- form tagging


@dataclass(frozen=True)
class TraceClassDiagonal:
    """Diagonal positive form with summable entries."""

    seq: SeqDescriptor

    def __post_init__(self):
        _require_nonneg(self.seq)
        if self.seq.summability() is not SummabilityClass.ABS_SUMMABLE:
            raise ValueError("trace-class diagonal needs absolutely summable entries")


@dataclass(frozen=True)
class BoundedDiagonal:
    """Diagonal positive form with bounded entries; the trace may be infinite."""

    seq: SeqDescriptor

    def __post_init__(self):
        _require_nonneg(self.seq)
        if self.seq.is_bounded() is not True:
            raise ValueError("bounded diagonal needs declared bounded entries")


@dataclass(frozen=True, eq=False)
class FiniteMatrix:
    """Positive Hermitian block acting on ``e_1 .. e_k``, zero elsewhere."""

    op: HermitianOp

    def __post_init__(self):
        if not self.op.is_positive():
            raise ValueError("regular part must be a positive form")

    def padded(self, k):
        m = np.zeros((k, k), dtype=complex)
        d = self.op.dim
        m[:d, :d] = self.op.matrix
        return m

    def _trimmed(self):
        m = self.op.matrix
        k = m.shape[0]
        while k > 0 and np.all(np.abs(m[k - 1, :k]) == 0) and np.all(np.abs(m[:k, k - 1]) == 0):
            k -= 1
        return m[:k, :k]

    def __eq__(self, other):
        if not isinstance(other, FiniteMatrix):
            return NotImplemented
        a, b = self._trimmed(), other._trimmed()
        return a.shape == b.shape and np.allclose(a, b, rtol=0, atol=1e-12)

    def __hash__(self):
        return hash(np.round(self._trimmed(), 10).tobytes())


@dataclass(frozen=True)
class DiagonalPlusMatrix:
    diagonal: "TraceClassDiagonal | BoundedDiagonal"
    matrix: FiniteMatrix


def _require_nonneg(seq):
    if seq.is_nonnegative() is not True:
        raise ValueError("regular part must have non-negative diagonal entries")


@dataclass(frozen=True)
class DeclaredSingular:
    """Sum of named singular forms with positive weights on a common domain."""

    domain: DomainLabel = FULL_SPACE
    components: tuple = (("s", 1.0),)

    def __post_init__(self):
        merged = {}
        for name, w in self.components:
            if w <= 0:
                raise ValueError("singular component weights must be positive")
            merged[name] = merged.get(name, 0.0) + float(w)
        object.__setattr__(self, "components", tuple(sorted(merged.items())))
        if not self.components:
            raise ValueError("a declared singular part needs at least one component")


@dataclass(frozen=True)
class TaggedForm:
    regular: object = TraceClassDiagonal(ZERO)
    singular: "DeclaredSingular | None" = None

    @property
    def domain(self):
        return FULL_SPACE if self.singular is None else self.singular.domain


def _regular_diagonal(reg):
    if isinstance(reg, (TraceClassDiagonal, BoundedDiagonal)):
        return reg.seq
    if isinstance(reg, DiagonalPlusMatrix):
        return reg.diagonal.seq
    return ZERO


def _regular_matrix(reg):
    if isinstance(reg, FiniteMatrix):
        return reg
    if isinstance(reg, DiagonalPlusMatrix):
        return reg.matrix
    return None


def _make_diagonal(seq):
    if seq.summability() is SummabilityClass.ABS_SUMMABLE:
        return TraceClassDiagonal(seq)
    return BoundedDiagonal(seq)


def _add_regular(a, b):
    seq = seq_add(_regular_diagonal(a), _regular_diagonal(b))
    ma, mb = _regular_matrix(a), _regular_matrix(b)
    if ma is None or mb is None:
        mat = ma or mb
    else:
        k = max(ma.op.dim, mb.op.dim)
        mat = FiniteMatrix(HermitianOp(ma.padded(k) + mb.padded(k)))
    diag = _make_diagonal(seq)
    if mat is None:
        return diag
    if seq == ZERO:
        return mat
    return DiagonalPlusMatrix(diag, mat)


def _add_singular(a, b, domains):
    if a is None:
        return b
    if b is None:
        return a
    return DeclaredSingular(domains.meet(a.domain, b.domain), a.components + b.components)


# ----------------------------------------------------------------- measures


@dataclass(frozen=True)
class ExtMeasure:
    """Measure induced by a tagged positive form.

    ``p1_bounded`` (finite supremum over lines) holds exactly when there is
    no singular part, because the regular parts here are bounded and a
    nonzero singular form is never bounded.
    """

    form: TaggedForm
    domain: DomainLabel = FULL_SPACE
    p1_bounded: bool = True
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.domain != self.form.domain:
            raise ValueError(f"measure domain {self.domain} differs from its form's domain {self.form.domain}")
        expected = self.form.singular is None
        if self.p1_bounded != expected:
            raise ValueError(
                f"p1_bounded={self.p1_bounded} is inconsistent with the form "
                f"(singular part {'absent' if expected else 'present'})"
            )
        if self.p1_bounded and not self.domain.is_full_space:
            raise ValueError("a P1-bounded measure must be defined on the full space")

    @classmethod
    def of(cls, form, name=""):
        return cls(form, form.domain, form.singular is None, name)

    def __str__(self):
        return self.name or repr(self)


@dataclass(frozen=True)
class Undefined:
    """The partial sum is not defined; ``reason`` names the failed clause."""

    reason: str

    def __bool__(self):
        return False


def zero_measure():
    return ExtMeasure.of(TaggedForm(), name="o")


def identity_measure(c=1.0):
    """``M -> c dim M``, induced by ``c`` times the identity."""
    return ExtMeasure.of(TaggedForm(BoundedDiagonal(Constant(c))), name="dim" if c == 1 else f"{c} dim")


def singular_measure(domain=FULL_SPACE, name="s", weight=1.0):
    """Measure of a declared singular form with zero regular part."""
    return ExtMeasure.of(TaggedForm(singular=DeclaredSingular(domain, ((name, weight),))), name=name)


def oplus(m1, m2, domains=DOMAINS):
    """Partial sum: defined iff one summand is P1-bounded or the domains agree."""
    if not (m1.p1_bounded or m2.p1_bounded or m1.domain == m2.domain):
        return Undefined(
            f"neither summand is P1-bounded and domains differ ({m1.domain} vs {m2.domain})"
        )
    form = TaggedForm(
        _add_regular(m1.form.regular, m2.form.regular),
        _add_singular(m1.form.singular, m2.form.singular, domains),
    )
    name = f"{m1.name}+{m2.name}" if m1.name and m2.name else ""
    return ExtMeasure(form, domains.meet(m1.domain, m2.domain), m1.p1_bounded and m2.p1_bounded, name)


def eval_ext(m, J):
    """``m(M_J)`` in ``[0, inf]`` for ``M_J`` the closed span of ``{e_n : n in J}``."""
    if isinstance(J, dict):
        J = parse_index_set(J)
    reg = m.form.regular
    value = diagonal_measure_eval(_regular_diagonal(reg), J)
    mat = _regular_matrix(reg)
    if mat is not None:
        d = np.real(np.diag(mat.op.matrix))
        idx = np.arange(1, d.size + 1)
        if isinstance(J, FiniteIndexSet):
            mask = np.isin(idx, J.indices)
        elif hasattr(J, "step"):
            mask = (idx >= J.start) & ((idx - J.start) % J.step == 0)
        else:
            mask = ~np.isin(idx, J.excluded)
        value += math.fsum(d[mask])
    if m.form.singular is not None and not J.is_finite():
        return math.inf
    return float(value)


def finite_sup(m, J):
    """``sup`` of ``m`` over the finite index sets inside ``J``.

    The singular part vanishes on all of them, so this is the regular value.
    Comparing with :func:`eval_ext` shows the gap (finite sup, infinite value)
    that marks a regular measure which is not sigma-additive.
    """
    regular = ExtMeasure.of(TaggedForm(m.form.regular))
    return eval_ext(regular, J)


# -------------------------------------------------------- sigma additivity


class Verdict(enum.Enum):
    SIGMA_ADDITIVE = "sigma-additive"
    NOT_SIGMA_ADDITIVE = "not sigma-additive"
    UNDECIDABLE = "undecidable in this model"


class UndecidableError(ValueError):
    """The tagged combination lies outside the decision rules."""


@dataclass(frozen=True)
class SigmaDecision:
    verdict: Verdict
    rule: str
    trace: tuple

    @property
    def sigma_additive(self):
        if self.verdict is Verdict.UNDECIDABLE:
            raise UndecidableError(self.rule)
        return self.verdict is Verdict.SIGMA_ADDITIVE

    def as_dict(self):
        return {"verdict": self.verdict.value, "rule": self.rule, "trace": list(self.trace)}


def decide_sigma_additive(m):
    """Decide sigma-additivity through the trace-class criterion.

    The criterion: for every subspace M, if the closure of the regular part of
    ``t o P_M`` is trace class then ``t o P_M`` itself must be.  Rules:

    ``regular``
        No singular part.  ``t o P_J`` is trace class exactly when the
        restricted diagonal sum is finite, which equals the sup over finite
        subsets; the measure is sigma-additive.
    ``identity-closure``
        Singular part present and the regular diagonal is ``c > 0`` plus a
        summable perturbation.  The regular part is trace class on ``J`` iff
        ``J`` is finite, and so is the whole form; the criterion holds.
    ``singular-dominant``
        Singular part present and the regular part trace class.  For
        infinite ``J`` the regular part is trace class but the form is not;
        the criterion fails.

    Anything else is reported as undecidable, never guessed.
    """
    reg, sing = m.form.regular, m.form.singular
    seq = _regular_diagonal(reg)
    if sing is None:
        return SigmaDecision(
            Verdict.SIGMA_ADDITIVE,
            "regular",
            ("no singular part: m(M_J) = sum over J of the regular diagonal = sup over finite subsets",),
        )
    offset = seq.constant_offset()
    if offset is None:
        return SigmaDecision(
            Verdict.UNDECIDABLE,
            f"no rule for singular part with regular diagonal {seq.to_json()}",
            (),
        )
    if offset > 0:
        return SigmaDecision(
            Verdict.SIGMA_ADDITIVE,
            "identity-closure",
            (
                f"regular diagonal = {offset} + summable, so regular part trace class on M_J iff J finite",
                "singular part vanishes on finite J, so t o P_J trace class iff J finite",
                "criterion holds for every J",
            ),
        )
    return SigmaDecision(
        Verdict.NOT_SIGMA_ADDITIVE,
        "singular-dominant",
        (
            "regular part trace class on every M_J",
            "singular part not trace class on infinite J, e.g. J = all indices",
            "criterion fails at J = all indices",
        ),
    )


def sigma_violation_witness(m):
    """Coordinate-line partition with ``sum_n m(sp(e_n)) != m(H)``.

    Returns ``(partition, lhs, rhs)``; raises ``ValueError`` for sigma-additive
    measures and :class:`UndecidableError` outside the rule table.
    """
    if decide_sigma_additive(m).sigma_additive:
        raise ValueError("measure is sigma-additive; no violating partition exists")
    seq = _regular_diagonal(m.form.regular)
    lhs = diagonal_measure_eval(seq, ALL_INDICES)
    mat = _regular_matrix(m.form.regular)
    if mat is not None:
        lhs += float(np.real(np.trace(mat.op.matrix)))
    rhs = eval_ext(m, ALL_INDICES)
    return "coordinate lines sp(e_n), n >= 1", float(lhs), rhs


# --------------------------------------------------------------- demo report


@dataclass
class NonSubGEAReport:
    m1: ExtMeasure
    m2: ExtMeasure
    total: ExtMeasure
    decisions: dict
    in_sigma: dict
    model: gea.FiniteGEAModel
    sub_gea: bool
    witness: tuple | None
    violation: tuple | None
    records: list

    @property
    def violated(self):
        return not self.sub_gea

    def as_dict(self):
        return {
            "decisions": {k: v.as_dict() for k, v in self.decisions.items()},
            "sigma_additive_subset": [k for k, v in self.in_sigma.items() if v],
            "model": self.model.to_json(),
            "is_sub_gea": self.sub_gea,
            "witness": list(self.witness) if self.witness else None,
            "sigma_violation": None if self.violation is None else {
                "partition": self.violation[0],
                "sum_over_parts": self.violation[1],
                "measure_of_whole": self.violation[2],
            },
        }


def not_sub_gea_demo(m2=None):
    """Sigma-additive regular measures are not closed under the two-out-of-three rule.

    ``m1 = dim`` and ``m1 (+) m2`` are sigma-additive while the singular
    ``m2`` is not.  The check is repeated on the induced four-element model
    ``{o, m1, m2, m1 (+) m2}`` with :func:`gea.is_sub_gea`.  Passing another
    ``m2`` (zero, trace class, ...) gives the control runs.
    """
    o = zero_measure()
    m1 = identity_measure()
    m2 = singular_measure() if m2 is None else m2
    total = oplus(m1, m2)
    if isinstance(total, Undefined):
        raise ValueError(total.reason)
    named = {"o": o, "m1": m1, "m2": m2, "m1+m2": total}
    # collapse equal measures onto one carrier element
    ids = {}
    for key, meas in named.items():
        ids.setdefault(meas, key)
    elements = list(dict.fromkeys(ids[meas] for meas in named.values()))
    sums = []
    for a in elements:
        for b in elements:
            s = oplus(named[a], named[b])
            if not isinstance(s, Undefined) and s in ids:
                sums.append((a, b, ids[s]))
    model = gea.FiniteGEAModel(elements, "o", sums)
    decisions = {k: decide_sigma_additive(named[k]) for k in elements}
    in_sigma = {k: d.sigma_additive for k, d in decisions.items()}
    subset = [k for k in elements if in_sigma[k]]
    ok, witness = gea.is_sub_gea(subset, model)
    violation = None
    if not in_sigma.get(ids[m2], True):
        violation = sigma_violation_witness(m2)
    records = [
        CheckRecord(
            f"sigma-additivity of {k} decided",
            "criterion: regular-part closure trace class implies form trace class",
            d.verdict.value,
            d.rule,
            None,
            d.verdict is not Verdict.UNDECIDABLE,
        )
        for k, d in decisions.items()
    ]
    axioms = gea.check_axioms(model)
    records.append(CheckRecord("induced model is a generalized effect algebra", "axioms GEi-GEv",
                               axioms.passed, True, None, axioms.passed))
    # exactly two of (m1, m2, m1 + m2) sigma-additive must show up as a violation
    predicted = sum(in_sigma[ids[x]] for x in (m1, m2, total)) == 2
    records.append(CheckRecord("two-out-of-three violation matches the verdicts", "sub-GEA closure rule",
                               not ok, predicted, None, (not ok) == predicted,
                               {"witness": list(witness) if witness else None}))
    return NonSubGEAReport(m1, m2, total, decisions, in_sigma, model, ok, witness, violation, records)


# ------------------------------------------------------- frame type mirror


@dataclass(frozen=True)
class FrameTypeView:
    """Frame type function ``f(x) = t(x, x)`` on the form domain."""

    measure: ExtMeasure

    @property
    def domain(self):
        return self.measure.domain

    @property
    def bounded(self):
        return self.measure.p1_bounded

    def at_basis(self, n):
        """``f(e_n)`` (1-based)."""
        return eval_ext(self.measure, FiniteIndexSet((n,)))

    def __call__(self, x):
        """Value at a finitely supported unit vector (coordinates ``e_1, e_2, ...``)."""
        x = np.asarray(x, dtype=complex).reshape(-1)
        if abs(np.linalg.norm(x) - 1.0) > 1e-10:
            raise ValueError("frame type functions live on the unit sphere")
        support = np.flatnonzero(np.abs(x) > 0)
        if self.measure.form.singular is not None and support.size > 1:
            raise UndecidableError("declared singular part is only known on basis lines")
        reg = self.measure.form.regular
        a = _regular_diagonal(reg).terms(np.arange(1, x.size + 1))
        value = float(np.sum(a * np.abs(x) ** 2))
        mat = _regular_matrix(reg)
        if mat is not None:
            k = max(mat.op.dim, x.size)
            y = np.zeros(k, dtype=complex)
            y[: x.size] = x
            value += float(np.real(np.vdot(y, mat.padded(k) @ y)))
        return value


def ftf_view(m):
    return FrameTypeView(m)


def ftf_oplus(f1, f2, domains=DOMAINS):
    """Partial sum of frame type functions: defined iff one is bounded or the domains agree."""
    s = oplus(f1.measure, f2.measure, domains)
    return s if isinstance(s, Undefined) else FrameTypeView(s)


def induces_frame_function(f):
    """Whether extending ``f`` by ``inf`` off its domain gives a frame function.

    This happens exactly when the induced measure is completely additive,
    which for these measures coincides with sigma-additivity.
    """
    return decide_sigma_additive(f.measure).sigma_additive


# --------------------------------------------------------------------- json


def parse_ext_measure(data, domains=DOMAINS):
    """Build an :class:`ExtMeasure` from its JSON form::

        {"regular": <seq descriptor> | {"matrix": [[...]]},
         "singular": "none" | {"domain": "D1"},
         "domain": "H" | "D1",
         "p1_bounded": true | false}
    """
    if isinstance(data, str):
        data = json.loads(data)
    for key in ("regular", "singular", "domain", "p1_bounded"):
        if key not in data:
            raise ValueError(f"tagged measure is missing field {key!r}")
    reg = data["regular"]
    if isinstance(reg, dict) and "matrix" in reg:
        regular = FiniteMatrix(HermitianOp(decode_matrix(reg["matrix"])))
    else:
        regular = _make_diagonal(parse_seq(reg))

    def label(name):
        return FULL_SPACE if name in ("H", FULL_SPACE.id) else DomainLabel(str(name))

    sing = data["singular"]
    if sing in ("none", None):
        singular = None
    elif isinstance(sing, dict) and "domain" in sing:
        singular = DeclaredSingular(label(sing["domain"]), ((str(sing.get("name", "s")), float(sing.get("weight", 1.0))),))
    else:
        raise ValueError("field 'singular' must be \"none\" or {\"domain\": label}")
    return ExtMeasure(TaggedForm(regular, singular), label(data["domain"]), bool(data["p1_bounded"]),
                      str(data.get("name", "")))
