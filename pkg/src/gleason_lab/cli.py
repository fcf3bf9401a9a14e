"""
Command-line entry point: ``gleason-lab <subcommand> ...``.

Every subcommand writes a report (a JSON array of check records preceded by
a ``run-metadata`` header, or CSV with ``--format csv``) and exits with 0
when every check passed, 1 when at least one failed and 2 on usage or input
errors.  Randomized suites draw one child seed per trial from ``--seed``,
so reports do not depend on the number of worker threads
(``GLEASON_LAB_THREADS``).
"""

import argparse
import datetime
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, extmeasures, gea, sequences, sobolev
from .config import get_tol
from .forms import FrameFunction, frame_weight, polarize_recover
from .hilbert import (
    HermitianOp,
    Subspace,
    compressed_trace,
    decode_matrix,
    ortho_complement,
    random_hermitian,
    random_subspace,
    random_unitary,
)
from .measures import GleasonMeasure, check_additivity, check_regularity
from .reports import CheckRecord, dumps, encode, to_csv

__all__ = ["main", "run", "InputError", "build_parser", "worker_count", "strip_timestamp"]

RECORD_COLUMNS = ["claim", "paper_ref", "lhs", "rhs", "tolerance", "pass"]


class InputError(ValueError):
    """Malformed user input; reported with exit status 2."""


def worker_count():
    raw = os.environ.get("GLEASON_LAB_THREADS", "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"GLEASON_LAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError("GLEASON_LAB_THREADS must be a positive integer")
    return n


def _ordered_map(fn, items):
    """``map`` over a thread pool capped by ``GLEASON_LAB_THREADS``; order kept."""
    items = list(items)
    n = min(worker_count(), max(1, len(items)))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _child_rngs(seed, count):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _load_json(arg, what):
    """Parse ``arg`` as inline JSON when it looks like JSON, else as a file path."""
    text = arg.strip()
    if not text.startswith(("{", "[")):
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {what} file {arg!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def _parse_target(raw):
    named = {"pi": math.pi, "-pi": -math.pi, "e": math.e, "ln2": math.log(2), "inf": math.inf, "-inf": -math.inf}
    if raw in named:
        return named[raw]
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"field 'target' must be a number, inf, -inf, pi, e or ln2; got {raw!r}") from None


def _load_operator(arg):
    data = _load_json(arg, "measure")
    if not isinstance(data, dict) or "T" not in data:
        raise InputError("measure JSON is missing field 'T'")
    try:
        return HermitianOp(decode_matrix(data["T"]))
    except ValueError as exc:
        raise InputError(f"field 'T': {exc}") from None


def _summary(claim, ref, values, tol, *, bound=0.0):
    """One record for a batch: worst value against ``bound`` within ``tol``."""
    worst = max(values) if values else 0.0
    return CheckRecord(claim, ref, worst, bound, tol, worst - bound <= tol, {"instances": len(values)})


# ------------------------------------------------------------- subcommands


def cmd_check_axioms(args):
    try:
        model = gea.FiniteGEAModel.from_json(_load_json(args.model, "model"))
    except gea.ModelError as exc:
        raise InputError(str(exc)) from None
    report = gea.check_axioms(model, max_witnesses=args.max_witnesses)
    records = [
        CheckRecord(
            axiom,
            "generalized effect algebra axioms",
            report.verdicts[axiom],
            True,
            None,
            report.verdicts[axiom],
            {"witnesses": [list(w) for w in report.witnesses_for(axiom)]} if not report.verdicts[axiom] else {},
        )
        for axiom in gea.AXIOMS
    ]
    if args.subset is not None:
        subset = [s for s in args.subset.split(",") if s]
        try:
            ok, witness = gea.is_sub_gea(subset, model)
        except gea.ModelError as exc:
            raise InputError(f"field 'subset': {exc}") from None
        records.append(CheckRecord("subset is a sub-GEA", "two-out-of-three closure", ok, True, None, ok,
                                   {"witness": list(witness) if witness else None}))
    return records, {"elements": len(model.elements)}


def _gleason_trial(T, dims, rng, tol):
    if T is None:
        T = random_hermitian(int(rng.integers(dims[0], dims[1] + 1)), rng)
    d = T.dim
    k = int(rng.integers(1, d))
    M = random_subspace(d, k, rng)
    rest = ortho_complement(M)
    j = int(rng.integers(1, rest.dim + 1))
    N = Subspace(rest.basis @ random_unitary(rest.dim, rng)[:, :j], check=False)
    add = check_additivity(GleasonMeasure(T), [M, N], tol)
    defect = abs(add.lhs - add.rhs)
    shifted = GleasonMeasure(T + (abs(T.min_eig()) + 1.0) * HermitianOp(np.eye(d)))
    reg = check_regularity(shifted, M, tol)
    return defect, abs(reg.record.lhs - reg.record.rhs)


def cmd_gleason(args):
    tol = args.tol if args.tol is not None else get_tol().additivity
    T = _load_operator(args.measure) if args.measure else None
    rngs = _child_rngs(args.seed, args.trials)
    results = _ordered_map(lambda r: _gleason_trial(T, (args.min_dim, args.max_dim), r, tol), rngs)
    ref = "trace formula m(M) = tr(T P_M)"
    return [
        _summary("m(M v N) = m(M) + m(N) for M orthogonal to N", ref, [r[0] for r in results], tol),
        _summary("regularity: eigen-chain inside M attains m(M)", ref, [r[1] for r in results], tol),
    ], {"trials": args.trials}


def _frame_trial(T, dims, rng, tol):
    if T is None:
        T = random_hermitian(int(rng.integers(dims[0], dims[1] + 1)), rng)
    d = T.dim
    M = random_subspace(d, int(rng.integers(1, d + 1)), rng)
    f = FrameFunction.from_operator(T)
    other = M.basis @ random_unitary(M.dim, rng)
    w1 = frame_weight(f, M)
    w2 = frame_weight(f, M, other)
    tr = compressed_trace(T, M)
    rec = polarize_recover(f, d, tol=max(tol, 1e-9))
    err = float(np.max(np.abs(rec.form.op.matrix - T.matrix)))
    return abs(w1 - w2), abs(w1 - tr), err


def cmd_frame(args):
    tol = args.tol if args.tol is not None else get_tol().additivity
    poly_tol = args.tol if args.tol is not None else get_tol().comparison
    T = _load_operator(args.measure) if args.measure else None
    rngs = _child_rngs(args.seed, args.trials)
    results = _ordered_map(lambda r: _frame_trial(T, (args.min_dim, args.max_dim), r, tol), rngs)
    return [
        _summary("frame weight independent of the orthonormal basis", "frame function weights",
                 [r[0] for r in results], tol),
        _summary("W_M = tr(T P_M)", "frame function weights", [r[1] for r in results], tol),
        _summary("polarization recovers the generator", "uniqueness of the inducing form",
                 [r[2] for r in results], poly_tol),
    ], {"trials": args.trials}


def cmd_classify(args):
    try:
        seq = sequences.parse_seq(_load_json(args.seq, "sequence descriptor"))
        ftype, prov = sequences.classify_frame_type(seq, mode=args.mode)
    except (ValueError, sequences.MetadataError) as exc:
        raise InputError(f"field 'seq': {exc}") from None
    summ = seq.summability()
    records = [
        CheckRecord("frame-type class", "diagonal operator cases I-IV", ftype.value, ftype.case, None, True,
                    {"case": ftype.case, "frame_type": ftype.is_frame_type, "provenance": prov,
                     "summability": summ.value if summ else None}),
    ]
    if args.compare_heuristic:
        heur = sequences.heuristic_summability(seq, args.n_terms)
        exact = sequences.classify_summability(seq, "exact").cls if summ is not None else None
        agree = exact is None or exact is heur.cls
        records.append(CheckRecord("exact and partial-sum classifications agree", "summability oracle",
                                   exact.value if exact else None, heur.cls.value, None, agree,
                                   {"n_terms": args.n_terms}))
    return records, {"seq": seq.to_json()}


def cmd_rearrange(args):
    try:
        seq = sequences.parse_seq(_load_json(args.seq, "sequence descriptor"))
    except ValueError as exc:
        raise InputError(f"field 'seq': {exc}") from None
    target = _parse_target(args.target)
    tol = args.tol if args.tol is not None else 1e-3
    try:
        r = sequences.rearrange_to_target(seq, target, args.steps)
    except (ValueError, sequences.MetadataError) as exc:
        raise InputError(f"field 'seq': {exc}") from None
    records = []
    if math.isfinite(target):
        closest = r.closest_after(args.min_crossings)
        records.append(CheckRecord("re-crosses the target", "rearrangement theorem", r.crossings,
                                   args.min_crossings, None, r.crossings >= args.min_crossings))
        records.append(CheckRecord("closest approach after the required crossings", "rearrangement theorem",
                                   closest, 0.0, tol, closest <= tol,
                                   {"final_error": r.final_error}))
    else:
        last = float(r.partial_sums[-1])
        grows = bool(np.sign(target) * last > args.steps ** 0.25)
        records.append(CheckRecord("partial sums run off to the target", "rearrangement theorem",
                                   last, target, None, grows))
    rows = None
    if args.format == "csv":
        stride = max(1, args.steps // 1000)
        rows = [{"step": k + 1, "index": int(r.indices[k]), "partial_sum": float(r.partial_sums[k])}
                for k in range(0, args.steps, stride)]
    return records, {"seq": seq.to_json(), "target": target, "steps": args.steps}, rows


def cmd_ext(args):
    try:
        m = extmeasures.parse_ext_measure(_load_json(args.measure, "tagged measure"))
        other = extmeasures.parse_ext_measure(_load_json(args.oplus, "tagged measure")) if args.oplus else None
        J = sequences.parse_index_set(_load_json(args.J, "index set")) if args.J else sequences.ALL_INDICES
    except (ValueError, KeyError) as exc:
        raise InputError(str(exc)) from None
    records = []
    if other is not None:
        s = extmeasures.oplus(m, other)
        defined = not isinstance(s, extmeasures.Undefined)
        records.append(CheckRecord("partial sum defined", "partial sum of regular measures", defined, True, None, True,
                                   {} if defined else {"reason": s.reason}))
        if defined:
            m = s
    decision = extmeasures.decide_sigma_additive(m)
    records.append(CheckRecord("sigma-additivity decided", "trace-class criterion", decision.verdict.value,
                               decision.rule, None, decision.verdict is not extmeasures.Verdict.UNDECIDABLE,
                               {"trace": list(decision.trace)}))
    value = extmeasures.eval_ext(m, J)
    sup = extmeasures.finite_sup(m, J)
    records.append(CheckRecord("m(M_J) against sup over finite subsets", "regular measure value",
                               value, sup, None, True, {"J": J.to_json(), "gap": value != sup}))
    return records, {}


def cmd_demo_nonsub(args):
    report = extmeasures.not_sub_gea_demo()
    records = list(report.records)
    expected = ("m1", "m2", "m1+m2")
    ok = report.witness is not None and set(report.witness) == set(expected)
    records.append(CheckRecord("violation witness is (m1, m2, m1 + m2)", "sigma-additive regular measures",
                               list(report.witness) if report.witness else None, list(expected), None, ok))
    part, lhs, rhs = report.violation
    records.append(CheckRecord("sigma-additivity fails for m2 on coordinate lines", part, lhs, rhs, None,
                               lhs == 0.0 and rhs == math.inf))
    return records, {"demo": report.as_dict()}


def _parse_grids(raw):
    try:
        ks = [int(x) for x in raw.split(",") if x.strip()]
        return [sobolev.Grid(k + 1) for k in ks]
    except ValueError:
        raise InputError(f"field 'grids' must be comma-separated integers 1/h >= 2, got {raw!r}") from None


def cmd_sobolev(args):
    grids = _parse_grids(args.grids)
    try:
        table = sobolev.boundary_blowup(grids)
    except ValueError as exc:
        raise InputError(f"field 'grids': {exc}") from None
    chains = _ordered_map(lambda g: sobolev.chain_report(g, args.nmax), grids)
    records = []
    for g, c in zip(grids, chains):
        for r in c.records:
            records.append(CheckRecord(f"{r.claim} (h = {g.h_exact})", r.paper_ref, r.lhs, r.rhs, r.tolerance,
                                       r.passed, r.detail))
    records += table.records
    rows = [{"h": str(sobolev.Grid(round(1 / h) + 1).h_exact), "norm": n, "slope": table.slope}
            for h, n in zip(table.h, table.per_term_norm)]
    return records, {"grids": [str(g.h_exact) for g in grids], "nmax": args.nmax}, rows


def _nikodym_pair(rng, dims, nmax, samples):
    d = int(rng.integers(dims[0], dims[1] + 1))
    T, S = random_hermitian(d, rng), random_hermitian(d, rng)
    return sobolev.nikodym_demo(T, S, nmax, samples, rng=rng)


def cmd_nikodym(args):
    rngs = _child_rngs(args.seed, args.pairs)
    reports = _ordered_map(lambda r: _nikodym_pair(r, (args.min_dim, args.max_dim), args.nmax, args.samples), rngs)
    records = []
    for i in range(len(reports[0].records) if reports else 0):
        group = [rep.records[i] for rep in reports]
        worst = max(group, key=lambda r: (not r.passed, float(r.lhs) - float(r.rhs)))
        records.append(CheckRecord(worst.claim, worst.paper_ref, worst.lhs, worst.rhs, worst.tolerance,
                                   all(r.passed for r in group), {"pairs": len(group)}))
    return records, {"pairs": args.pairs, "nmax": args.nmax, "samples": args.samples}


# ------------------------------------------------------------------ parser


def _add_random_suite(p, trials):
    p.add_argument("measure", nargs="?", help='JSON file or inline {"T": matrix}; random T when omitted')
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--min-dim", type=int, default=3)
    p.add_argument("--max-dim", type=int, default=8)


def build_parser():
    parser = argparse.ArgumentParser(prog="gleason-lab", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="tolerance override for the main check")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="report path (stdout when omitted)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp (comparison mode)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    p = sub.add_parser("check-axioms", parents=[common], help="verify the GEA axioms of a finite model")
    p.add_argument("model", help="model JSON file or inline JSON")
    p.add_argument("--subset", default=None, help="comma-separated ids to test with the sub-GEA rule")
    p.add_argument("--max-witnesses", type=int, default=5)
    p.set_defaults(func=cmd_check_axioms)

    p = sub.add_parser("gleason", parents=[common], help="additivity and regularity of tr(T P_M)")
    _add_random_suite(p, 500)
    p.set_defaults(func=cmd_gleason)

    p = sub.add_parser("frame", parents=[common], help="frame weights and polarization round-trips")
    _add_random_suite(p, 200)
    p.set_defaults(func=cmd_frame)

    p = sub.add_parser("classify", parents=[common], help="diagonal frame-type classification")
    p.add_argument("--seq", required=True, help="sequence descriptor JSON")
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    p.add_argument("--compare-heuristic", action="store_true")
    p.add_argument("--n-terms", type=int, default=sequences.HEURISTIC_TERMS)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("rearrange", parents=[common], help="greedy rearrangement toward a target")
    p.add_argument("--seq", required=True)
    p.add_argument("--target", required=True, help="number, inf, -inf, pi, e or ln2")
    p.add_argument("--steps", type=int, default=10**6)
    p.add_argument("--min-crossings", type=int, default=10)
    p.set_defaults(func=cmd_rearrange)

    p = sub.add_parser("ext", parents=[common], help="evaluate and classify a tagged measure")
    p.add_argument("measure", help="tagged-measure JSON")
    p.add_argument("--oplus", default=None, help="second tagged measure to add first")
    p.add_argument("--J", default=None, help="index-set JSON (default: all indices)")
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("demo-nonsub", parents=[common], help="sigma-additive regular measures are not a sub-GEA")
    p.set_defaults(func=cmd_demo_nonsub)

    p = sub.add_parser("sobolev", parents=[common], help="discretized Sobolev form family")
    p.add_argument("--grids", default="10,20,40,80,160,320", help="comma-separated values of 1/h")
    p.add_argument("--nmax", type=int, default=50)
    p.set_defaults(func=cmd_sobolev)

    p = sub.add_parser("nikodym", parents=[common], help="convergence of T + S/n measures")
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--nmax", type=int, default=100)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--min-dim", type=int, default=3)
    p.add_argument("--max-dim", type=int, default=8)
    p.set_defaults(func=cmd_nikodym)
    return parser


def _validate(args):
    for name in ("trials", "steps", "pairs", "samples", "nmax"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise InputError(f"field '{name}' must be positive")
    lo, hi = getattr(args, "min_dim", None), getattr(args, "max_dim", None)
    if lo is not None and not 2 <= lo <= hi:
        raise InputError("fields 'min-dim'/'max-dim' need 2 <= min-dim <= max-dim")
    if getattr(args, "nmax", 2) < 2 and args.command == "sobolev":
        raise InputError("field 'nmax' must be >= 2")


def _execute(argv):
    """Parse and run; returns ``(status, args, json_text, csv_text)``.

    ``csv_text`` is the subcommand's table when it has one, else the records.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None, "", ""
    try:
        _validate(args)
        worker_count()
        out = args.func(args)
    except InputError as exc:
        return 2, args, f"error: {exc}\n", ""
    records, meta = out[0], out[1]
    rows = out[2] if len(out) > 2 else None
    header = {"subcommand": args.command, "seed": args.seed, "tol": args.tol, "version": __version__, **meta}
    if not args.no_timestamp:
        header["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    if rows is not None:
        csv_text = to_csv(rows, list(rows[0].keys()) if rows else [])
    else:
        csv_text = to_csv([r.as_dict() for r in records], RECORD_COLUMNS)
    status = 0 if all(r.passed for r in records) else 1
    return status, args, dumps(records, header), csv_text


def run(argv=None):
    """Run the CLI; return ``(exit_status, report_text)`` without writing files."""
    status, args, json_text, csv_text = _execute(argv)
    if args is None or status == 2:
        return status, json_text
    return status, csv_text if args.format == "csv" else json_text


def strip_timestamp(report_text):
    """Report with the header timestamp removed, for byte comparison."""
    data = json.loads(report_text)
    if data and isinstance(data[0], dict):
        data[0].pop("timestamp", None)
    return json.dumps(encode(data), indent=2, sort_keys=True) + "\n"


def main(argv=None):
    status, args, json_text, csv_text = _execute(argv)
    if args is None:
        return status
    if status == 2:
        sys.stderr.write(json_text)
        return 2
    text = csv_text if args.format == "csv" else json_text
    if args.out:
        Path(args.out).write_text(text)
        if args.command == "sobolev" and args.format == "json":
            # the (h, norm, slope) table travels next to the JSON report
            Path(args.out).with_suffix(".csv").write_text(csv_text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
