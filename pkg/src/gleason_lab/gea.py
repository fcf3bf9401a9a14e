"""
Finite generalized effect algebras.

A model is an explicit carrier with a distinguished zero and a partial sum
table.  :func:`check_axioms` verifies the five defining conditions by
exhaustive enumeration, :func:`derived_order` builds the induced order and
difference, and :func:`is_sub_gea` tests the two-out-of-three closure rule.

Element ids are strings.  The JSON model format is::

    {"elements": ["0", "1", ...], "zero": "0", "sums": [["1", "1", "2"], ...]}
"""

import itertools
import json
from dataclasses import dataclass, field

__all__ = [
    "ModelError",
    "OrderError",
    "FiniteGEAModel",
    "AxiomReport",
    "PosetView",
    "AXIOMS",
    "check_axioms",
    "derived_order",
    "is_sub_gea",
    "chain_extrema",
    "interval_model",
    "horizontal_sum_model",
    "product_interval_model",
    "canonical_tables",
]

AXIOMS = ("GEi", "GEii-defined", "GEii-equal", "GEiii", "GEiv", "GEv")


class ModelError(ValueError):
    """Structurally malformed model (dangling ids, conflicting entries)."""


class OrderError(ValueError):
    """Raised when an order-theoretic precondition does not hold."""


@dataclass(frozen=True)
class FiniteGEAModel:
    elements: tuple
    zero: str
    sums: dict

    def __init__(self, elements, zero, sums):
        elements = tuple(str(e) for e in elements)
        if len(set(elements)) != len(elements):
            raise ModelError("duplicate element ids")
        zero = str(zero)
        if zero not in elements:
            raise ModelError(f"zero {zero!r} is not an element")
        table = {}
        items = sums.items() if isinstance(sums, dict) else (((x, y), z) for x, y, z in sums)
        known = set(elements)
        for (x, y), z in items:
            x, y, z = str(x), str(y), str(z)
            for e in (x, y, z):
                if e not in known:
                    raise ModelError(f"sum entry ({x}, {y}) -> {z} uses unknown id {e!r}")
            if table.get((x, y), z) != z:
                raise ModelError(f"conflicting entries for ({x}, {y})")
            table[(x, y)] = z
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "zero", zero)
        object.__setattr__(self, "sums", table)

    def __hash__(self):
        return hash((self.elements, self.zero, frozenset(self.sums.items())))

    def add(self, x, y):
        """``x (+) y`` or ``None`` when undefined."""
        return self.sums.get((x, y))

    def restrict(self, subset):
        subset = [e for e in self.elements if e in set(subset)]
        keep = set(subset)
        table = {k: v for k, v in self.sums.items() if k[0] in keep and k[1] in keep and v in keep}
        return FiniteGEAModel(subset, self.zero, table)

    def with_entry(self, x, y, z):
        table = dict(self.sums)
        if z is None:
            table.pop((x, y), None)
        else:
            table[(x, y)] = z
        return FiniteGEAModel(self.elements, self.zero, table)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        for key in ("elements", "zero", "sums"):
            if key not in data:
                raise ModelError(f"model is missing field {key!r}")
        sums = data["sums"]
        if not all(isinstance(t, (list, tuple)) and len(t) == 3 for t in sums):
            raise ModelError("field 'sums' must be a list of [x, y, z] triples")
        return cls(data["elements"], data["zero"], [tuple(t) for t in sums])

    def to_json(self):
        return {
            "elements": list(self.elements),
            "zero": self.zero,
            "sums": [[x, y, z] for (x, y), z in sorted(self.sums.items())],
        }


@dataclass
class AxiomReport:
    verdicts: dict
    witnesses: list = field(default_factory=list)

    @property
    def passed(self):
        return all(self.verdicts.values())

    def failed(self):
        return [a for a in AXIOMS if not self.verdicts[a]]

    def witnesses_for(self, axiom):
        return [w for a, w in self.witnesses if a == axiom]

    def as_dict(self):
        return {
            "passed": self.passed,
            "verdicts": dict(self.verdicts),
            "witnesses": [{"axiom": a, "elements": list(w)} for a, w in self.witnesses],
        }


def check_axioms(model, max_witnesses=None):
    """Exhaustively verify the generalized effect algebra axioms.

    GEii is reported in two halves: ``GEii-defined`` (one side defined forces
    the other) and ``GEii-equal`` (both sides defined and different).
    ``max_witnesses`` caps the stored witnesses per axiom; verdicts are
    always exact.
    """
    add = model.sums.get
    E = model.elements
    zero = model.zero
    witnesses = {a: [] for a in AXIOMS}

    def report(axiom, w):
        lst = witnesses[axiom]
        if max_witnesses is None or len(lst) < max_witnesses:
            lst.append(w)

    failed = set()

    for (x, y), z in model.sums.items():
        if add((y, x)) != z:
            failed.add("GEi")
            report("GEi", (x, y))

    for x in E:
        for y in E:
            xy = add((x, y))
            for z in E:
                yz = add((y, z))
                left = add((xy, z)) if xy is not None else None
                right = add((x, yz)) if yz is not None else None
                if (left is None) != (right is None):
                    failed.add("GEii-defined")
                    report("GEii-defined", (x, y, z))
                elif left is not None and left != right:
                    failed.add("GEii-equal")
                    report("GEii-equal", (x, y, z))

    for x in E:
        if add((x, zero)) != x:
            failed.add("GEiii")
            report("GEiii", (x,))

    for x in E:
        seen = {}
        for y in E:
            s = add((x, y))
            if s is None:
                continue
            if s in seen:
                failed.add("GEiv")
                report("GEiv", (x, seen[s], y))
            else:
                seen[s] = y

    for (x, y), z in model.sums.items():
        if z == zero and (x != zero or y != zero):
            failed.add("GEv")
            report("GEv", (x, y))

    verdicts = {a: a not in failed for a in AXIOMS}
    flat = [(a, w) for a in AXIOMS for w in witnesses[a]]
    return AxiomReport(verdicts, flat)


@dataclass
class PosetView:
    """Order ``x <= y`` and difference ``y (-) x`` induced by the sum."""

    elements: tuple
    leq: frozenset
    ominus_table: dict

    def le(self, x, y):
        return (x, y) in self.leq

    def ominus(self, y, x):
        return self.ominus_table.get((y, x))

    def upper_bounds(self, items):
        return [u for u in self.elements if all((i, u) in self.leq for i in items)]

    def lower_bounds(self, items):
        return [l for l in self.elements if all((l, i) in self.leq for i in items)]


def derived_order(model):
    """Order by ``x <= y`` iff ``x (+) z = y`` for some ``z``.

    Raises ``OrderError`` when cancellation fails, because the difference
    would then be multi-valued.
    """
    leq = set()
    ominus = {}
    for (x, z), y in model.sums.items():
        prev = ominus.get((y, x))
        if prev is not None and prev != z:
            raise OrderError(f"{y} (-) {x} is ambiguous ({prev} vs {z}); cancellation fails")
        ominus[(y, x)] = z
        leq.add((x, y))
    return PosetView(model.elements, frozenset(leq), ominus)


def is_sub_gea(subset, model):
    """Two-out-of-three closure test.

    Returns ``(True, None)`` or ``(False, witness)``.  ``witness`` is a
    violating triple ``(x, y, z)`` with ``x (+) y = z`` and exactly two of the
    three occurrences in ``subset``; if zero is missing the witness is
    ``(zero,)``.  Occurrences are counted with multiplicity.
    """
    S = set(subset)
    unknown = S - set(model.elements)
    if unknown:
        raise ModelError(f"subset contains unknown ids {sorted(unknown)}")
    if model.zero not in S:
        return False, (model.zero,)
    for (x, y), z in sorted(model.sums.items()):
        inside = (x in S) + (y in S) + (z in S)
        if inside == 2:
            return False, (x, y, z)
    return True, None


def chain_extrema(model, chain, direction="up", order=None):
    """Supremum (``up``) or infimum (``down``) of a monotone chain.

    Returns ``None`` when the bound does not exist in the model.
    """
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    order = derived_order(model) if order is None else order
    chain = list(chain)
    if not chain:
        raise OrderError("empty chain")
    for a, b in zip(chain, chain[1:]):
        ok = order.le(a, b) if direction == "up" else order.le(b, a)
        if not ok:
            raise OrderError(f"chain is not monotone {direction} at ({a}, {b})")
    if direction == "up":
        bounds = order.upper_bounds(chain)
        best = [u for u in bounds if all(order.le(u, v) for v in bounds)]
    else:
        bounds = order.lower_bounds(chain)
        best = [l for l in bounds if all(order.le(v, l) for v in bounds)]
    return best[0] if best else None


# ---------------------------------------------------------------- generators


def interval_model(u):
    """Interval ``[0, u]`` of the integers with ``x (+) y = x + y`` when ``<= u``."""
    elements = [str(i) for i in range(u + 1)]
    sums = [(str(x), str(y), str(x + y)) for x in range(u + 1) for y in range(u + 1) if x + y <= u]
    return FiniteGEAModel(elements, "0", sums)


def product_interval_model(u):
    """Interval ``[0, u]`` in the po-group Z^k, ``u`` a tuple of non-negative ints."""
    points = list(itertools.product(*[range(k + 1) for k in u]))
    name = lambda p: ",".join(map(str, p))
    sums = []
    for p in points:
        for q in points:
            r = tuple(a + b for a, b in zip(p, q))
            if all(a <= k for a, k in zip(r, u)):
                sums.append((name(p), name(q), name(r)))
    return FiniteGEAModel([name(p) for p in points], name(tuple(0 for _ in u)), sums)


def horizontal_sum_model(blocks=2):
    """Horizontal sum of ``blocks`` four-element Boolean algebras ``{0, a, a', 1}``."""
    letters = "abcdefgh"[:blocks]
    elements = ["0", "1"] + [s for c in letters for s in (c, c + "'")]
    sums = [("0", e, e) for e in elements] + [(e, "0", e) for e in elements if e != "0"]
    for c in letters:
        sums += [(c, c + "'", "1"), (c + "'", c, "1")]
    return FiniteGEAModel(elements, "0", sums)


def canonical_tables(size):
    """Every symmetric table on ``{0, ..., size-1}`` with ``x (+) 0 = x`` and
    each nonzero sum either undefined or strictly above both summands.

    Every generalized effect algebra with ``size`` elements is isomorphic to
    one of these (label the carrier along a linear extension of its order).
    """
    nonzero = range(1, size)
    pairs = [(x, y) for x in nonzero for y in nonzero if x <= y]
    choices = [[None] + list(range(y + 1, size)) for _, y in pairs]
    base = [(str(e), "0", str(e)) for e in range(size)] + [("0", str(e), str(e)) for e in range(1, size)]
    elements = [str(e) for e in range(size)]
    for pick in itertools.product(*choices):
        sums = list(base)
        for (x, y), z in zip(pairs, pick):
            if z is not None:
                sums.append((str(x), str(y), str(z)))
                if x != y:
                    sums.append((str(y), str(x), str(z)))
        yield FiniteGEAModel(elements, "0", sums)
