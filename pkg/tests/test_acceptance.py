"""Acceptance criteria 1-11, one test each.

Every test prints a ``criterion N: PASS|FAIL`` line with its measured
numbers; the lines are repeated in the terminal summary.
"""

import itertools
import math
import time

import numpy as np
import pytest

from gleason_lab import gea
from gleason_lab.cli import run, strip_timestamp
from gleason_lab.extmeasures import not_sub_gea_demo
from gleason_lab.forms import FrameFunction, frame_weight, polarize_recover
from gleason_lab.gea import ModelError, check_axioms, horizontal_sum_model, interval_model, is_sub_gea
from gleason_lab.hilbert import Subspace, compressed_trace, random_hermitian, random_unitary
from gleason_lab.measures import GleasonMeasure, check_additivity
from gleason_lab.sequences import (
    AlternatingPower,
    classify_frame_type,
    classify_summability,
    heuristic_summability,
    rearrange_to_target,
)
from gleason_lab.sobolev import Grid, boundary_blowup, chain_report, nikodym_demo

from conftest import ACCEPTANCE_LINES
from oracles import brute_axioms, brute_sub_gea
from test_gea import FIXTURES, mutations, random_canonical
from zoo import CASE_III, CASE_IV, ZOO

SEED = 20261018


def verdict(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_01_gleason_additivity():
    rng = np.random.default_rng(SEED + 1)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        d = int(rng.integers(3, 9))
        T = random_hermitian(d, rng)
        U = random_unitary(d, rng)
        a = int(rng.integers(0, d + 1))
        b = int(rng.integers(a, d + 1))
        M, N = Subspace(U[:, :a], d), Subspace(U[:, a:b], d)
        rec = check_additivity(GleasonMeasure(T), [M, N])
        worst = max(worst, abs(rec.lhs - rec.rhs))
    elapsed = time.perf_counter() - t0
    verdict(1, worst <= 1e-8 and elapsed < 10, f"500 instances, worst {worst:.2e}, {elapsed:.2f}s")


def test_criterion_02_frame_weight_onb_invariance():
    rng = np.random.default_rng(SEED + 2)
    worst_onb = worst_tr = 0.0
    for _ in range(200):
        d = int(rng.integers(3, 9))
        T = random_hermitian(d, rng)
        f = FrameFunction.from_operator(T)
        k = int(rng.integers(1, d + 1))
        M = Subspace(random_unitary(d, rng)[:, :k], d)
        other = M.basis @ random_unitary(k, rng)
        w1, w2 = frame_weight(f, M), frame_weight(f, M, other)
        worst_onb = max(worst_onb, abs(w1 - w2))
        worst_tr = max(worst_tr, abs(w1 - compressed_trace(T, M)))
    ok = worst_onb <= 1e-8 and worst_tr <= 1e-8
    verdict(2, ok, f"200 instances, ONB gap {worst_onb:.2e}, trace gap {worst_tr:.2e}")


def test_criterion_03_polarization_round_trip():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(3, 7))
        T = random_hermitian(d, rng)
        res = polarize_recover(FrameFunction.from_operator(T), d)
        worst = max(worst, float(np.max(np.abs(res.form.op.matrix - T.matrix))))
    verdict(3, worst <= 1e-9, f"100 generators, max entry error {worst:.2e}")


def test_criterion_04_axiom_checker():
    fixtures_ok = all(check_axioms(m).passed for m in FIXTURES)
    fixtures_ok &= check_axioms(interval_model(3)).passed and check_axioms(horizontal_sum_model()).passed
    flagged = total = 0
    for m in FIXTURES:
        for _, _, mutated in mutations(m):
            total += 1
            try:
                flagged += not check_axioms(mutated).passed
            except ModelError:
                flagged += 1
    t0 = time.perf_counter()
    tables = disagreements = passing = 0
    genuine = missed = 0
    for size in range(1, 6):
        for m in gea.canonical_tables(size):
            tables += 1
            rep = check_axioms(m)
            disagreements += rep.verdicts != brute_axioms(m.elements, m.zero, m.sums)
            if rep.passed:
                passing += 1
                for _, _, mutated in mutations(m):
                    if check_axioms(mutated).passed:
                        # an unflagged mutation must itself be a valid model
                        if all(brute_axioms(mutated.elements, mutated.zero, mutated.sums).values()):
                            genuine += 1
                        else:
                            missed += 1
    elapsed = time.perf_counter() - t0
    ok = fixtures_ok and flagged == total and disagreements == 0 and missed == 0 and elapsed < 60
    verdict(
        4,
        ok,
        f"fixture mutations flagged {flagged}/{total}; {tables} generator tables, {passing} passing, "
        f"{disagreements} oracle disagreements, {missed} missed mutations, "
        f"{genuine} mutations that are themselves valid models; {elapsed:.1f}s",
    )


def test_criterion_05_sub_gea_against_oracle():
    rng = np.random.default_rng(SEED + 5)
    agree = 0
    for _ in range(1000):
        size = int(rng.integers(1, 8))
        m = random_canonical(size, rng, p_defined=float(rng.uniform(0.1, 0.5)))
        S = {e for e in m.elements if rng.random() < 0.6}
        agree += is_sub_gea(S, m)[0] == brute_sub_gea(S, m.elements, m.zero, m.sums)
    verdict(5, agree == 1000, f"{agree}/1000 pairs agree")


def test_criterion_06_classifier_against_heuristic():
    rows = []
    for s, _, _ in ZOO:
        exact = classify_summability(s).cls
        heur = heuristic_summability(s, 10**6).cls
        f_exact = classify_frame_type(s, "exact")[0]
        f_heur = classify_frame_type(s, "heuristic")[0]
        rows.append((s.key(), exact is heur and f_exact is f_heur))
    special = (
        classify_frame_type(CASE_IV)[0].case == "IV"
        and classify_frame_type(CASE_III)[0].case == "III"
        and any(k == CASE_IV.key() for k, _ in rows)
        and any(k == CASE_III.key() for k, _ in rows)
    )
    bad = [k for k, ok in rows if not ok]
    verdict(6, not bad and special, f"{len(rows) - len(bad)}/{len(rows)} families agree at N=1e6; mismatches {bad}")


def test_criterion_07_riemann_rearrangement():
    parts = []
    ok = True
    for target in (-5.0, 0.0, math.pi):
        r = rearrange_to_target(AlternatingPower(1.0), target, 10**6)
        good = r.closest_approach <= 1e-3 and r.crossings >= 10 and r.closest_after(10) <= 1e-3
        ok &= good
        parts.append(f"target {target:.4g}: {r.crossings} crossings, closest {r.closest_approach:.1e}")
    verdict(7, ok, "; ".join(parts))


def test_criterion_08_non_sub_gea_reproduction():
    rep = not_sub_gea_demo()
    s = rep.in_sigma
    ok = (
        s["m1"] is True
        and s["m2"] is False
        and s["m1+m2"] is True
        and not rep.sub_gea
        and rep.witness == ("m1", "m2", "m1+m2")
        and is_sub_gea([k for k in rep.model.elements if s[k]], rep.model) == (False, ("m1", "m2", "m1+m2"))
        and rep.violation[1] == 0.0
        and rep.violation[2] == math.inf
    )
    verdict(8, ok, f"verdicts {s}, witness {rep.witness}, sum {rep.violation[1]} vs m(H) {rep.violation[2]}")


def test_criterion_09_sobolev_demo():
    t0 = time.perf_counter()
    grids = [Grid.from_h(f"1/{k}") for k in (10, 20, 40, 80, 160, 320)]
    chains = [chain_report(g, 50) for g in grids]
    ident = max(c.records[0].lhs for c in chains)
    min_eig = min(min(c.min_eigs[k] for k in c.min_eigs if k != "s_hat") for c in chains)
    table = boundary_blowup(grids)
    rel = max(abs(n * h - 1) for n, h in zip(table.per_term_norm, table.h))
    elapsed = time.perf_counter() - t0
    ok = (
        all(c.passed for c in chains)
        and ident <= 1e-12
        and min_eig >= -1e-10
        and rel <= 1e-9
        and abs(table.slope + 1) <= 0.01
        and elapsed < 30
    )
    verdict(
        9,
        ok,
        f"identity {ident:.1e}, min eig {min_eig:.1e}, norm rel err {rel:.1e}, slope {table.slope:.4f}, {elapsed:.1f}s",
    )


def test_criterion_10_nikodym():
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(SEED + 10).spawn(50)]
    passed = 0
    for rng in rngs:
        d = int(rng.integers(3, 9))
        rep = nikodym_demo(random_hermitian(d, rng), random_hermitian(d, rng), 100, 20, rng=rng)
        bound_ok = bool(np.all(rep.deviations <= rep.bounds + 1e-12))
        passed += rep.passed and bound_ok
    verdict(10, passed == 50, f"{passed}/50 pairs satisfy the bound for n <= 100 and additivity")


SUITE = [
    ["check-axioms", '{"elements": ["0","1","2","3"], "zero": "0", "sums": [["0","0","0"],["1","0","1"],'
     '["0","1","1"],["2","0","2"],["0","2","2"],["3","0","3"],["0","3","3"],["1","1","2"],["1","2","3"],'
     '["2","1","3"]]}'],
    ["gleason"],
    ["frame"],
    ["classify", "--seq", '{"family":"alternating_power","p":1}', "--compare-heuristic"],
    ["rearrange", "--seq", '{"family":"alternating_power","p":1}', "--target", "pi"],
    ["ext", '{"regular": {"family": "constant", "c": 1}, "singular": {"domain": "H"}, "domain": "H", '
     '"p1_bounded": false}'],
    ["demo-nonsub"],
    ["sobolev"],
    ["nikodym"],
]


def test_criterion_11_determinism(monkeypatch):
    reports = []
    for threads in ("1", "3"):
        monkeypatch.setenv("GLEASON_LAB_THREADS", threads)
        out = []
        for argv in SUITE:
            status, text = run(argv + ["--seed", "11"])
            out.append((status, strip_timestamp(text)))
        reports.append(out)
    same = sum(a == b for a, b in zip(*reports))
    all_zero = all(status == 0 for status, _ in reports[0])
    verdict(11, same == len(SUITE) and all_zero, f"{same}/{len(SUITE)} subcommand reports byte-identical across runs")
