"""Check records and their JSON/CSV serialisation."""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["CheckRecord", "check", "encode", "dumps", "to_csv", "all_passed"]


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one numerical or symbolic check.

    ``lhs`` and ``rhs`` are the two compared quantities (already JSON-friendly
    or convertible through :func:`encode`); ``passed`` is the verdict.
    """

    claim: str
    paper_ref: str
    lhs: object
    rhs: object
    tolerance: float | None
    passed: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        d = {
            "claim": self.claim,
            "paper_ref": self.paper_ref,
            "lhs": encode(self.lhs),
            "rhs": encode(self.rhs),
            "tolerance": self.tolerance,
            "pass": bool(self.passed),
        }
        if self.detail:
            d["detail"] = encode(self.detail)
        return d


def check(claim, ref, lhs, rhs, tol):
    """Record ``|lhs - rhs| <= tol`` for extended reals (inf == inf passes)."""
    lhs, rhs = float(lhs), float(rhs)
    if math.isinf(lhs) or math.isinf(rhs):
        ok = lhs == rhs
    else:
        ok = abs(lhs - rhs) <= tol
    return CheckRecord(claim, ref, lhs, rhs, tol, ok)


def encode(obj):
    """Convert numpy and extended-real values to JSON-compatible data.

    Complex scalars become ``[re, im]``; infinities become the strings
    ``"inf"`` / ``"-inf"`` so the output stays strict JSON.
    """
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(obj, (complex, np.complexfloating)):
        return [encode(obj.real), encode(obj.imag)]
    if hasattr(obj, "as_dict"):
        return obj.as_dict()
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def all_passed(records):
    return all(r.passed for r in records)


def dumps(records, meta=None):
    """Serialise a report: a JSON array whose first element is a header."""
    header = {"claim": "run-metadata", **(meta or {})}
    payload = [encode(header)] + [r.as_dict() for r in records]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([encode(row[c]) for c in columns])
    return buf.getvalue()
