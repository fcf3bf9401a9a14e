"""
Symbolic real sequences and the diagonal-operator analysis on l^2.

A diagonal operator ``T e_n = a_n e_n`` is described by a
:class:`SeqDescriptor`, a small expression tree over a few closed-form
families.  Each family knows its exact summability facts, so the questions
the theory asks about ``T`` (is it trace class, does its frame function have
finite weight, which way does a rearranged series go) are answered without
floating-point guesswork.  A heuristic partial-sum classifier is provided as
an independent cross-check and for descriptors lacking metadata.

Sequences are 1-indexed: ``s[1]`` is the first term.
"""

import enum
import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.special

__all__ = [
    "SummabilityClass",
    "FrameTypeClass",
    "MetadataError",
    "SeqDescriptor",
    "Power",
    "Geometric",
    "AlternatingPower",
    "Constant",
    "Explicit",
    "Scaled",
    "Masked",
    "SignedMerge",
    "SumSeq",
    "PartOf",
    "ZERO",
    "seq_add",
    "parse_seq",
    "pos_neg_parts",
    "SummabilityResult",
    "classify_summability",
    "heuristic_summability",
    "classify_frame_type",
    "Rearrangement",
    "rearrange_to_target",
    "IndexSet",
    "FiniteIndexSet",
    "CofiniteIndexSet",
    "ArithmeticIndexSet",
    "parse_index_set",
    "ALL_INDICES",
    "EVENS",
    "ODDS",
    "diagonal_measure_eval",
]


class SummabilityClass(enum.Enum):
    ABS_SUMMABLE = "AbsSummable"
    COND_CONVERGENT = "CondConvergent"
    DIVERGES_TO_PLUS = "DivergesToPlus"
    DIVERGES_TO_MINUS = "DivergesToMinus"
    OSCILLATES = "Oscillates"


class FrameTypeClass(enum.Enum):
    BOUNDED_FRAME_FUNCTION = "BoundedFrameFunction"
    NOT_FRAME_TYPE_COND_CONVERGENT = "NotFrameType_CondConvergent"
    FRAME_TYPE_INFINITE_WEIGHT = "FrameTypeInfiniteWeight"
    NOT_FRAME_TYPE_BOTH_DIVERGE = "NotFrameType_BothDiverge"
    # sum of positive parts finite, of negative parts infinite: weight -inf
    NOT_FRAME_TYPE_MINUS_INFINITE_WEIGHT = "NotFrameType_MinusInfiniteWeight"

    @property
    def case(self):
        return {
            "BoundedFrameFunction": "I",
            "NotFrameType_CondConvergent": "II",
            "FrameTypeInfiniteWeight": "III",
            "NotFrameType_BothDiverge": "IV",
            "NotFrameType_MinusInfiniteWeight": "III-",
        }[self.value]

    @property
    def is_frame_type(self):
        return self in (FrameTypeClass.BOUNDED_FRAME_FUNCTION, FrameTypeClass.FRAME_TYPE_INFINITE_WEIGHT)


S = SummabilityClass


class MetadataError(ValueError):
    """The descriptor carries no exact fact for the requested question."""


def _swap(c):
    if c is S.DIVERGES_TO_PLUS:
        return S.DIVERGES_TO_MINUS
    if c is S.DIVERGES_TO_MINUS:
        return S.DIVERGES_TO_PLUS
    return c


class SeqDescriptor:
    """Base class for sequence descriptors.

    Subclasses implement :meth:`terms` and whatever exact metadata they
    support; unknown facts are reported as ``None``.
    """

    def terms(self, n):
        """Terms ``a_n`` for an integer array ``n >= 1``."""
        raise NotImplementedError

    def __getitem__(self, n):
        return float(self.terms(np.array([n]))[0])

    def prefix(self, count):
        return self.terms(np.arange(1, count + 1))

    def summability(self):
        return None

    def parts(self):
        return PartOf(self, +1), PartOf(self, -1)

    def sup_abs(self):
        """An upper bound on ``sup |a_n|`` (``inf`` when unbounded), or ``None``."""
        return None

    def is_nonnegative(self):
        return None

    def ap_sum(self, start, step):
        """Exact ``sum_{k >= 0} a_{start + k*step}`` for non-negative sequences."""
        raise MetadataError(f"{type(self).__name__} has no closed-form progression sum")

    def constant_offset(self):
        """``c`` with ``sum |a_n - c| < inf`` when known, else ``None``."""
        return None

    def is_bounded(self):
        b = self.sup_abs()
        return None if b is None else math.isfinite(b)

    def to_json(self):
        raise NotImplementedError

    def key(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _ap_first_at_least(start, step, bound):
    """First member ``>= bound`` of ``start + k*step``."""
    if start >= bound:
        return start
    k = -(-(bound - start) // step)
    return start + k * step


@dataclass(frozen=True)
class Power(SeqDescriptor):
    """``a_n = n^(-p)``."""

    p: float

    def terms(self, n):
        return np.asarray(n, dtype=float) ** (-self.p)

    def summability(self):
        return S.ABS_SUMMABLE if self.p > 1 else S.DIVERGES_TO_PLUS

    def parts(self):
        return self, ZERO

    def sup_abs(self):
        return 1.0 if self.p >= 0 else math.inf

    def is_nonnegative(self):
        return True

    def ap_sum(self, start, step):
        if self.p <= 1:
            return math.inf
        return float(step ** (-self.p) * scipy.special.zeta(self.p, start / step))

    def constant_offset(self):
        if self.p > 1:
            return 0.0
        if self.p == 0:
            return 1.0
        return None

    def to_json(self):
        return {"family": "power", "p": self.p}


@dataclass(frozen=True)
class Geometric(SeqDescriptor):
    """``a_n = r^n``."""

    r: float

    def terms(self, n):
        return self.r ** np.asarray(n, dtype=float)

    def summability(self):
        if abs(self.r) < 1:
            return S.ABS_SUMMABLE
        return S.DIVERGES_TO_PLUS if self.r >= 1 else S.OSCILLATES

    def parts(self):
        if self.r >= 0:
            return self, ZERO
        g = Geometric(-self.r)
        return Masked(g, "even"), Masked(g, "odd")

    def sup_abs(self):
        return abs(self.r) if abs(self.r) <= 1 else math.inf

    def is_nonnegative(self):
        return self.r >= 0

    def ap_sum(self, start, step):
        if self.r < 0:
            raise MetadataError("geometric progression sum needs r >= 0")
        if self.r == 0:
            return 0.0
        if self.r >= 1:
            return math.inf
        return self.r**start / (1 - self.r**step)

    def constant_offset(self):
        if abs(self.r) < 1:
            return 0.0
        return 1.0 if self.r == 1 else None

    def to_json(self):
        return {"family": "geometric", "r": self.r}


@dataclass(frozen=True)
class AlternatingPower(SeqDescriptor):
    """``a_n = (-1)^n n^(-p)``; the first term is negative."""

    p: float

    def terms(self, n):
        n = np.asarray(n)
        sign = np.where(n % 2 == 0, 1.0, -1.0)
        return sign * n.astype(float) ** (-self.p)

    def summability(self):
        if self.p > 1:
            return S.ABS_SUMMABLE
        return S.COND_CONVERGENT if self.p > 0 else S.OSCILLATES

    def parts(self):
        base = Power(self.p)
        return Masked(base, "even"), Masked(base, "odd")

    def sup_abs(self):
        return 1.0 if self.p >= 0 else math.inf

    def is_nonnegative(self):
        return False

    def constant_offset(self):
        return 0.0 if self.p > 1 else None

    def to_json(self):
        return {"family": "alternating_power", "p": self.p}


@dataclass(frozen=True)
class Constant(SeqDescriptor):
    c: float

    def terms(self, n):
        return np.full(np.shape(n), float(self.c))

    def summability(self):
        if self.c == 0:
            return S.ABS_SUMMABLE
        return S.DIVERGES_TO_PLUS if self.c > 0 else S.DIVERGES_TO_MINUS

    def parts(self):
        return Constant(max(self.c, 0.0)), Constant(max(-self.c, 0.0))

    def sup_abs(self):
        return abs(float(self.c))

    def is_nonnegative(self):
        return self.c >= 0

    def ap_sum(self, start, step):
        if self.c < 0:
            raise MetadataError("progression sum needs a non-negative sequence")
        return 0.0 if self.c == 0 else math.inf

    def constant_offset(self):
        return float(self.c)

    def to_json(self):
        return {"family": "constant", "c": self.c}


ZERO = Constant(0.0)


@dataclass(frozen=True)
class Explicit(SeqDescriptor):
    """Given leading terms, then ``tail[n]`` for ``n > len(values)``."""

    values: tuple
    tail: SeqDescriptor = ZERO

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def terms(self, n):
        n = np.asarray(n)
        out = self.tail.terms(n).astype(float)
        k = len(self.values)
        if k:
            head = n <= k
            out[head] = np.asarray(self.values)[n[head] - 1]
        return out

    def summability(self):
        return self.tail.summability()

    def parts(self):
        tp, tn = self.tail.parts()
        return (
            Explicit(tuple(max(v, 0.0) for v in self.values), tp),
            Explicit(tuple(max(-v, 0.0) for v in self.values), tn),
        )

    def sup_abs(self):
        t = self.tail.sup_abs()
        if t is None:
            return None
        return max([abs(v) for v in self.values] + [t])

    def is_nonnegative(self):
        t = self.tail.is_nonnegative()
        return None if t is None else (t and all(v >= 0 for v in self.values))

    def ap_sum(self, start, step):
        k = len(self.values)
        head = math.fsum(self.values[n - 1] for n in range(start, k + 1, step))
        return head + self.tail.ap_sum(_ap_first_at_least(start, step, k + 1), step)

    def constant_offset(self):
        return self.tail.constant_offset()

    def to_json(self):
        return {"family": "explicit", "values": list(self.values), "tail": self.tail.to_json()}


@dataclass(frozen=True)
class Scaled(SeqDescriptor):
    alpha: float
    inner: SeqDescriptor

    def terms(self, n):
        return self.alpha * self.inner.terms(n)

    def summability(self):
        if self.alpha == 0:
            return S.ABS_SUMMABLE
        c = self.inner.summability()
        return c if self.alpha > 0 or c is None else _swap(c)

    def parts(self):
        p, m = self.inner.parts()
        if self.alpha >= 0:
            return Scaled(self.alpha, p), Scaled(self.alpha, m)
        return Scaled(-self.alpha, m), Scaled(-self.alpha, p)

    def sup_abs(self):
        if self.alpha == 0:
            return 0.0
        b = self.inner.sup_abs()
        return None if b is None else abs(self.alpha) * b

    def is_nonnegative(self):
        if self.alpha == 0:
            return True
        nn = self.inner.is_nonnegative()
        return None if nn is None else (nn and self.alpha > 0)

    def ap_sum(self, start, step):
        if self.alpha == 0:
            return 0.0
        if self.alpha < 0:
            raise MetadataError("progression sum needs a non-negative sequence")
        return self.alpha * self.inner.ap_sum(start, step)

    def constant_offset(self):
        c = self.inner.constant_offset()
        return None if c is None else self.alpha * c

    def to_json(self):
        return {"family": "scaled", "alpha": self.alpha, "inner": self.inner.to_json()}


@dataclass(frozen=True)
class Masked(SeqDescriptor):
    """``inner[n]`` on indices of the given parity, zero elsewhere."""

    inner: SeqDescriptor
    parity: str

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError("parity must be 'even' or 'odd'")

    @property
    def _rem(self):
        return 0 if self.parity == "even" else 1

    def terms(self, n):
        n = np.asarray(n)
        return np.where(n % 2 == self._rem, self.inner.terms(n), 0.0)

    def summability(self):
        c = self.inner.summability()
        if c is S.ABS_SUMMABLE:
            return c
        if self.inner.is_nonnegative():
            try:
                total = self.ap_sum(1, 1)
            except MetadataError:
                return None
            return S.ABS_SUMMABLE if math.isfinite(total) else S.DIVERGES_TO_PLUS
        return None

    def parts(self):
        p, m = self.inner.parts()
        return Masked(p, self.parity), Masked(m, self.parity)

    def sup_abs(self):
        return self.inner.sup_abs()

    def is_nonnegative(self):
        return self.inner.is_nonnegative()

    def ap_sum(self, start, step):
        if step % 2 == 0:
            if start % 2 != self._rem:
                return 0.0
            return self.inner.ap_sum(start, step)
        first = start if start % 2 == self._rem else start + step
        return self.inner.ap_sum(first, 2 * step)

    def constant_offset(self):
        return 0.0 if self.inner.constant_offset() == 0.0 else None

    def to_json(self):
        return {"family": "masked", "parity": self.parity, "inner": self.inner.to_json()}


@dataclass(frozen=True)
class SignedMerge(SeqDescriptor):
    """``a_n = pos[n]`` for even ``n`` and ``-neg[n]`` for odd ``n``.

    Both constituents must be non-negative.
    """

    pos: SeqDescriptor
    neg: SeqDescriptor

    def __post_init__(self):
        if self.pos.is_nonnegative() is False or self.neg.is_nonnegative() is False:
            raise ValueError("signed_merge constituents must be non-negative")

    def terms(self, n):
        n = np.asarray(n)
        return np.where(n % 2 == 0, self.pos.terms(n), -self.neg.terms(n))

    def parts(self):
        return Masked(self.pos, "even"), Masked(self.neg, "odd")

    def summability(self):
        p, m = (q.summability() for q in self.parts())
        if p is None or m is None:
            return None
        pd, md = p is not S.ABS_SUMMABLE, m is not S.ABS_SUMMABLE
        if not pd and not md:
            return S.ABS_SUMMABLE
        if pd != md:
            return S.DIVERGES_TO_PLUS if pd else S.DIVERGES_TO_MINUS
        # both parts diverge; decidable when pos = alpha*g and neg = beta*g for g = n^(-p)
        a, b = _power_multiple(self.pos), _power_multiple(self.neg)
        if a is None or b is None or a[1] != b[1]:
            return None
        (alpha, p), beta = a, b[0]
        if alpha > beta:
            return S.DIVERGES_TO_PLUS
        if alpha < beta:
            return S.DIVERGES_TO_MINUS
        # (-1)^n alpha n^(-p): Leibniz for p > 0, bounded swing for p = 0
        return S.COND_CONVERGENT if p > 0 else S.OSCILLATES

    def sup_abs(self):
        a, b = self.pos.sup_abs(), self.neg.sup_abs()
        return None if a is None or b is None else max(a, b)

    def is_nonnegative(self):
        return self.neg.sup_abs() == 0.0

    def constant_offset(self):
        if self.pos.constant_offset() == 0.0 and self.neg.constant_offset() == 0.0:
            return 0.0
        return None

    def to_json(self):
        return {"family": "signed_merge", "pos": self.pos.to_json(), "neg": self.neg.to_json()}


def _power_multiple(g):
    """``(alpha, p)`` when ``g[n] = alpha * n^(-p)`` with ``0 <= p <= 1``."""
    if isinstance(g, Constant):
        return float(g.c), 0.0
    if isinstance(g, Power) and 0 <= g.p <= 1:
        return 1.0, float(g.p)
    if isinstance(g, Scaled):
        inner = _power_multiple(g.inner)
        if inner is not None:
            return g.alpha * inner[0], inner[1]
    return None


@dataclass(frozen=True)
class SumSeq(SeqDescriptor):
    """Pointwise sum; build through :func:`seq_add` for a canonical form."""

    items: tuple

    def terms(self, n):
        return sum((t.terms(n) for t in self.items), np.zeros(np.shape(n)))

    def summability(self):
        classes = [t.summability() for t in self.items]
        if any(c is None for c in classes):
            return None
        rest = [c for c in classes if c is not S.ABS_SUMMABLE]
        if not rest:
            return S.ABS_SUMMABLE
        if len(rest) == 1:
            return rest[0]
        if all(c is S.DIVERGES_TO_PLUS for c in rest):
            return S.DIVERGES_TO_PLUS
        if all(c is S.DIVERGES_TO_MINUS for c in rest):
            return S.DIVERGES_TO_MINUS
        return None

    def parts(self):
        if self.is_nonnegative():
            return self, ZERO
        return super().parts()

    def sup_abs(self):
        bounds = [t.sup_abs() for t in self.items]
        return None if any(b is None for b in bounds) else sum(bounds)

    def is_nonnegative(self):
        flags = [t.is_nonnegative() for t in self.items]
        if all(flags):
            return True
        return None

    def ap_sum(self, start, step):
        return sum(t.ap_sum(start, step) for t in self.items)

    def constant_offset(self):
        cs = [t.constant_offset() for t in self.items]
        return None if any(c is None for c in cs) else sum(cs)

    def to_json(self):
        return {"family": "sum", "terms": [t.to_json() for t in self.items]}


@dataclass(frozen=True)
class PartOf(SeqDescriptor):
    """Positive (``sign=+1``) or negative (``sign=-1``) part computed pointwise."""

    inner: SeqDescriptor
    sign: int

    def terms(self, n):
        return np.maximum(self.sign * self.inner.terms(n), 0.0)

    def parts(self):
        return self, ZERO

    def sup_abs(self):
        return self.inner.sup_abs()

    def is_nonnegative(self):
        return True

    def to_json(self):
        return {"family": "part", "sign": self.sign, "inner": self.inner.to_json()}


def seq_add(*seqs):
    """Canonical pointwise sum: flattened, zero terms dropped, constants merged,
    summands sorted so that the result is independent of argument order."""
    flat = []
    for s in seqs:
        flat.extend(s.items if isinstance(s, SumSeq) else [s])
    c = sum(float(t.c) for t in flat if isinstance(t, Constant))
    rest = [t for t in flat if not isinstance(t, Constant)]
    if c != 0:
        rest.append(Constant(c))
    rest.sort(key=SeqDescriptor.key)
    if not rest:
        return ZERO
    if len(rest) == 1:
        return rest[0]
    return SumSeq(tuple(rest))


_FAMILIES = {
    "power": lambda d: Power(float(d["p"])),
    "geometric": lambda d: Geometric(float(d["r"])),
    "alternating_power": lambda d: AlternatingPower(float(d["p"])),
    "constant": lambda d: Constant(float(d["c"])),
    "explicit": lambda d: Explicit(tuple(d["values"]), parse_seq(d["tail"]) if "tail" in d else ZERO),
    "scaled": lambda d: Scaled(float(d["alpha"]), parse_seq(d["inner"])),
    "masked": lambda d: Masked(parse_seq(d["inner"]), d["parity"]),
    "signed_merge": lambda d: SignedMerge(parse_seq(d["pos"]), parse_seq(d["neg"])),
    "sum": lambda d: seq_add(*[parse_seq(t) for t in d["terms"]]),
}


def parse_seq(data):
    """Build a descriptor from its JSON form, e.g. ``{"family": "power", "p": 2}``."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "family" not in data:
        raise ValueError("sequence descriptor needs a 'family' field")
    family = data["family"]
    if family not in _FAMILIES:
        raise ValueError(f"unknown sequence family {family!r}; known: {sorted(_FAMILIES)}")
    try:
        return _FAMILIES[family](data)
    except KeyError as exc:
        raise ValueError(f"sequence family {family!r} is missing field {exc.args[0]!r}") from None


def pos_neg_parts(s):
    """``(a+, a-)`` with ``a = a+ - a-`` and ``a+ a- = 0``."""
    return s.parts()


# ------------------------------------------------------------ classification


@dataclass(frozen=True)
class SummabilityResult:
    cls: SummabilityClass
    provenance: str
    detail: dict

    def as_dict(self):
        return {"class": self.cls.value, "provenance": self.provenance, "detail": self.detail}


HEURISTIC_TERMS = 10**6
# block-sum decay ratio below which a non-negative series is called convergent
_DECAY_RATIO = 0.95
_WINDOW = 6


def _dyadic_blocks(x):
    """Sums of ``x`` over the index blocks ``[2^k, 2^(k+1))`` fully inside ``x``."""
    n = x.size
    out = []
    k = 0
    while 2 ** (k + 1) - 1 <= n:
        out.append(math.fsum(x[2**k - 1 : 2 ** (k + 1) - 1]))
        k += 1
    return np.array(out)


def _decay_ratio(blocks):
    last = blocks[-_WINDOW:]
    if last[-1] == 0.0:
        return 0.0
    if last[0] == 0.0:
        return math.inf
    return (last[-1] / last[0]) ** (1.0 / (len(last) - 1))


def _nonneg_converges(x):
    return _decay_ratio(np.abs(_dyadic_blocks(x))) <= _DECAY_RATIO


def heuristic_summability(s, n_terms=HEURISTIC_TERMS):
    """Classify from the first ``n_terms`` terms.

    Positive and negative parts are tested separately: dyadic block sums of a
    convergent non-negative series decay geometrically in the tail (Cauchy
    condensation), those of a divergent one do not.  When both parts diverge,
    the swing of the partial sums over dyadic blocks decides between
    conditional convergence (shrinking swing), drift to one side, and
    oscillation.
    """
    a = np.asarray(s.prefix(n_terms), dtype=float)
    pos, neg = np.maximum(a, 0.0), np.maximum(-a, 0.0)
    rho_pos = _decay_ratio(_dyadic_blocks(pos))
    rho_neg = _decay_ratio(_dyadic_blocks(neg))
    pd, nd = rho_pos > _DECAY_RATIO, rho_neg > _DECAY_RATIO
    detail = {"n_terms": n_terms, "pos_block_ratio": rho_pos, "neg_block_ratio": rho_neg}
    if not pd and not nd:
        cls = S.ABS_SUMMABLE
    elif pd != nd:
        cls = S.DIVERGES_TO_PLUS if pd else S.DIVERGES_TO_MINUS
    else:
        partial = np.cumsum(a)
        lo, hi, mean = [], [], []
        k = 1
        while 2 ** (k + 1) - 1 <= n_terms:
            block = partial[2**k - 1 : 2 ** (k + 1) - 1]
            lo.append(block.min())
            hi.append(block.max())
            mean.append(block.mean())
            k += 1
        lo, hi, mean = np.array(lo), np.array(hi), np.array(mean)
        rho_swing = _decay_ratio(hi - lo)
        rho_mean = _decay_ratio(np.abs(np.diff(mean)))
        detail.update(swing_ratio=rho_swing, mean_step_ratio=rho_mean, final_partial_sum=float(partial[-1]))
        if rho_swing <= _DECAY_RATIO and rho_mean <= _DECAY_RATIO:
            cls = S.COND_CONVERGENT
        elif np.all(lo[-3:] > hi[-5:-2]):
            cls = S.DIVERGES_TO_PLUS
        elif np.all(hi[-3:] < lo[-5:-2]):
            cls = S.DIVERGES_TO_MINUS
        else:
            cls = S.OSCILLATES
    return SummabilityResult(cls, "heuristic", detail)


def classify_summability(s, mode="exact", n_terms=HEURISTIC_TERMS):
    """Summability class of ``sum a_n``.

    ``mode="exact"`` uses the descriptor's declared facts and raises
    :class:`MetadataError` when it has none; ``mode="heuristic"`` inspects
    partial sums (see :func:`heuristic_summability`).
    """
    if mode == "heuristic":
        return heuristic_summability(s, n_terms)
    if mode != "exact":
        raise ValueError("mode must be 'exact' or 'heuristic'")
    cls = s.summability()
    if cls is None:
        raise MetadataError(
            f"no exact summability metadata for {s.to_json()}; use mode='heuristic'"
        )
    return SummabilityResult(cls, "exact", {})


def _class_or_heuristic(s, mode):
    if mode == "exact":
        c = s.summability()
        if c is not None:
            return c, "exact"
    return heuristic_summability(s).cls, "heuristic"


def classify_frame_type(s, mode="exact"):
    """Which of the four diagonal cases ``f(x) = (T x, x)`` falls into.

    * both part-sums finite: bounded frame function;
    * both infinite and ``sum a_n`` convergent: not frame type;
    * positive part-sum infinite, negative finite: frame type, weight ``+inf``;
    * both infinite otherwise: not frame type;
    * positive finite, negative infinite: weight ``-inf``, not frame type.

    With ``mode="exact"`` facts missing from a descriptor fall back to the
    heuristic; the returned provenance says which was used.
    """
    bound = s.sup_abs()
    if bound is None:
        raise MetadataError("boundedness of the sequence is not declared")
    if not math.isfinite(bound):
        raise ValueError("the classification applies to bounded sequences only")
    p, m = s.parts()
    pc, prov_p = _class_or_heuristic(p, mode)
    mc, prov_m = _class_or_heuristic(m, mode)
    pd, md = pc is not S.ABS_SUMMABLE, mc is not S.ABS_SUMMABLE
    provenance = "exact" if prov_p == prov_m == "exact" else "heuristic"
    if not pd and not md:
        return FrameTypeClass.BOUNDED_FRAME_FUNCTION, provenance
    if pd and not md:
        return FrameTypeClass.FRAME_TYPE_INFINITE_WEIGHT, provenance
    if md and not pd:
        return FrameTypeClass.NOT_FRAME_TYPE_MINUS_INFINITE_WEIGHT, provenance
    whole, prov = _class_or_heuristic(s, mode)
    if prov != "exact":
        provenance = "heuristic"
    if whole is S.COND_CONVERGENT:
        return FrameTypeClass.NOT_FRAME_TYPE_COND_CONVERGENT, provenance
    return FrameTypeClass.NOT_FRAME_TYPE_BOTH_DIVERGE, provenance


# ------------------------------------------------------------- rearrangement


class _SignStream:
    """Indices (in original order) of the strictly positive or negative terms."""

    def __init__(self, s, sign, chunk=1 << 16):
        self.s, self.sign, self.chunk = s, sign, chunk
        self.next_n = 1
        self.idx = np.empty(0, dtype=np.int64)
        self.val = np.empty(0)
        self.pos = 0

    def _refill(self):
        for _ in range(64):
            n = np.arange(self.next_n, self.next_n + self.chunk)
            self.next_n += self.chunk
            a = self.s.terms(n)
            keep = self.sign * a > 0
            if keep.any():
                self.idx, self.val, self.pos = n[keep], a[keep], 0
                return
        raise ValueError("sign stream exhausted: no terms of this sign found")

    def take(self):
        if self.pos >= self.idx.size:
            self._refill()
        i, v = self.idx[self.pos], self.val[self.pos]
        self.pos += 1
        return int(i), float(v)


@dataclass
class Rearrangement:
    indices: np.ndarray
    partial_sums: np.ndarray
    target: float

    @property
    def crossings(self):
        """Number of sign changes of ``partial_sum - target`` along the trace."""
        if not math.isfinite(self.target):
            return 0
        d = np.sign(self.partial_sums - self.target)
        d = d[d != 0]
        return int(np.count_nonzero(d[1:] != d[:-1]))

    @property
    def final_error(self):
        return abs(float(self.partial_sums[-1]) - self.target)

    @property
    def closest_approach(self):
        return float(np.min(np.abs(self.partial_sums - self.target)))

    def closest_after(self, crossings):
        """Closest approach to the target after the given number of crossings."""
        d = np.sign(self.partial_sums - self.target)
        changes = np.flatnonzero((d[1:] != d[:-1]) & (d[1:] != 0) & (d[:-1] != 0)) + 1
        if changes.size < crossings:
            return math.inf
        start = 0 if crossings == 0 else changes[crossings - 1]
        return float(np.min(np.abs(self.partial_sums[start:] - self.target)))

    def as_dict(self):
        return {
            "target": self.target,
            "steps": int(self.indices.size),
            "final_partial_sum": float(self.partial_sums[-1]),
            "final_error": self.final_error,
            "closest_approach": self.closest_approach,
            "crossings": self.crossings,
            "first_indices": self.indices[:20].tolist(),
        }


def rearrange_to_target(s, target, steps):
    """Greedy rearrangement steering partial sums toward ``target``.

    Unused positive terms are appended while the partial sum is at most the
    target, unused negative terms otherwise; each sign class is consumed in
    its original order.  For ``target = +inf`` (``-inf``) the one-sided
    variant takes positive (negative) terms until the partial sum passes the
    next integer milestone, then a single term of the other sign.
    """
    cls, _ = _class_or_heuristic(s, "exact")
    if cls is S.ABS_SUMMABLE:
        raise ValueError("absolutely summable series: every rearrangement has the same sum")
    if cls is not S.COND_CONVERGENT:
        raise ValueError(f"rearrangement needs a conditionally convergent series, got {cls.value}")
    target = float(target)
    up, down = _SignStream(s, +1), _SignStream(s, -1)
    idx = np.empty(steps, dtype=np.int64)
    sums = np.empty(steps)
    total = 0.0
    if math.isfinite(target):
        for k in range(steps):
            i, v = (up if total <= target else down).take()
            total += v
            idx[k], sums[k] = i, total
    else:
        sign = 1 if target > 0 else -1
        milestone = 1.0
        main, other = (up, down) if sign > 0 else (down, up)
        for k in range(steps):
            if sign * total > milestone:
                i, v = other.take()
                milestone += 1.0
            else:
                i, v = main.take()
            total += v
            idx[k], sums[k] = i, total
    return Rearrangement(idx, sums, target)


# ----------------------------------------------------- diagonal measure values


class IndexSet:
    def is_finite(self):
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteIndexSet(IndexSet):
    indices: tuple

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        if idx and idx[0] < 1:
            raise ValueError("indices are 1-based")
        object.__setattr__(self, "indices", idx)

    def is_finite(self):
        return True

    def __len__(self):
        return len(self.indices)

    def to_json(self):
        return {"kind": "finite", "indices": list(self.indices)}


@dataclass(frozen=True)
class CofiniteIndexSet(IndexSet):
    """All ``n >= 1`` except the listed ones."""

    excluded: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "excluded", tuple(sorted(set(int(i) for i in self.excluded))))

    def is_finite(self):
        return False

    def to_json(self):
        return {"kind": "cofinite", "excluded": list(self.excluded)}


@dataclass(frozen=True)
class ArithmeticIndexSet(IndexSet):
    """``start, start + step, start + 2 step, ...``"""

    start: int
    step: int

    def __post_init__(self):
        if self.start < 1 or self.step < 1:
            raise ValueError("arithmetic index sets need start >= 1 and step >= 1")

    def is_finite(self):
        return False

    def to_json(self):
        return {"kind": "arithmetic", "start": self.start, "step": self.step}


ALL_INDICES = ArithmeticIndexSet(1, 1)
EVENS = ArithmeticIndexSet(2, 2)
ODDS = ArithmeticIndexSet(1, 2)


def parse_index_set(data):
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("kind")
    if kind == "finite":
        return FiniteIndexSet(tuple(data["indices"]))
    if kind == "cofinite":
        return CofiniteIndexSet(tuple(data.get("excluded", ())))
    if kind == "arithmetic":
        return ArithmeticIndexSet(int(data["start"]), int(data["step"]))
    raise ValueError(f"unknown index set kind {kind!r}")


def diagonal_measure_eval(s, J, with_provenance=False):
    """``m(M_J) = sum_{n in J} a_n`` in ``[0, inf]`` for a positive diagonal form.

    ``M_J`` is the closed span of ``{e_n : n in J}``.  Infinite ``J`` are
    summed in closed form from the family metadata (``inf`` when the
    restricted series diverges); descriptors without a closed form get a
    numerical estimate, flagged as such when ``with_provenance`` is set.
    """
    if s.is_nonnegative() is not True:
        raise ValueError("diagonal measure evaluation needs a non-negative sequence")
    provenance = "exact"
    if isinstance(J, FiniteIndexSet):
        value = math.fsum(s.terms(np.array(J.indices, dtype=np.int64))) if J.indices else 0.0
    elif isinstance(J, (ArithmeticIndexSet, CofiniteIndexSet)):
        start, step = (J.start, J.step) if isinstance(J, ArithmeticIndexSet) else (1, 1)
        try:
            value = s.ap_sum(start, step)
        except MetadataError:
            value = _numeric_ap_sum(s, start, step)
            provenance = "estimate"
        if isinstance(J, CofiniteIndexSet) and J.excluded and math.isfinite(value):
            value -= math.fsum(s.terms(np.array(J.excluded, dtype=np.int64)))
    else:
        raise TypeError(f"unsupported index set {J!r}")
    value = float(value)
    return (value, provenance) if with_provenance else value


def _numeric_ap_sum(s, start, step, n_terms=HEURISTIC_TERMS):
    n = start + step * np.arange(n_terms)
    x = s.terms(n)
    if not _nonneg_converges(x):
        return math.inf
    return math.fsum(x)
