import numpy as np
import pytest
import scipy.linalg
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st

from gleason_lab.hilbert import HermitianOp, Subspace, random_hermitian
from gleason_lab.sobolev import Grid, boundary_blowup, build_forms, chain_report, nikodym_demo


def test_grid_basics():
    g = Grid(11)
    assert g.h_exact == Fraction(1, 10) and g.h_exact * (g.n_points - 1) == 1
    assert Grid.from_h("1/40") == Grid(41)
    with pytest.raises(ValueError):
        Grid(2)
    with pytest.raises(ValueError):
        Grid.from_h(0.3)


def test_constant_and_linear_examples():
    g = Grid(21)
    f = build_forms(3, g)
    one = np.ones(g.n_points)
    assert f["s_hat"](one) == pytest.approx(0, abs=1e-12)
    assert f["s_0"](one) == pytest.approx(2)
    assert f["s"](one) == pytest.approx(2)
    x = g.nodes
    assert f["s_hat"](x) == pytest.approx(1, abs=1e-12)
    assert f["s"](x) == pytest.approx(2, abs=1e-12)
    with pytest.raises(ValueError):
        build_forms(0, g)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.integers(3, 60), st.integers(1, 50))
def test_s_n_exceeds_s_by_s_hat_over_n(seed, N, n):
    rng = np.random.default_rng(seed)
    g = Grid(N)
    f = build_forms(n, g)
    u = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    lhs = f["s_n"](u) - f["s"](u)
    assert abs(lhs - f["s_hat"](u) / n) <= 1e-10 * max(1.0, abs(lhs))
    scale = np.max(np.abs(f["s_n"].matrix))
    ident = (1 + 1 / n) * f["s_hat"].matrix + f["s_0"].matrix
    assert np.max(np.abs(f["s_n"].matrix - ident)) <= 1e-12 * scale


@pytest.mark.parametrize("N", [5, 11, 41])
def test_chain_report_passes(N):
    rep = chain_report(Grid(N), 20)
    assert rep.passed
    assert rep.min_eigs["s_2 - s_3"] >= -1e-10
    assert all(v >= -1e-10 for v in rep.min_eigs.values())
    with pytest.raises(ValueError):
        chain_report(Grid(N), 1)


@pytest.mark.parametrize("N", [6, 21, 81])
def test_boundary_difference_spectrum(N):
    g = Grid(N)
    f = build_forms(1, g)
    h = g.h
    # generalized eigenproblem h A v = lambda h I v, solved independently
    diff = f["s"].matrix - f["s_hat"].matrix
    lam = np.sort(scipy.linalg.eigh(h * diff, h * np.eye(N), eigvals_only=True))
    expected = np.zeros(N)
    expected[-2:] = 1 / h
    assert np.allclose(lam, expected, atol=1e-9 / h)
    assert np.linalg.matrix_rank(diff) == 2


def test_blowup_examples():
    t = boundary_blowup([Grid.from_h("1/10"), Grid.from_h("1/100")])
    assert t.per_term_norm == pytest.approx([10, 100], rel=1e-9)
    grids = [Grid.from_h(f"1/{k}") for k in (10, 20, 40, 80, 160, 320)]
    t = boundary_blowup(grids)
    assert t.passed and abs(t.slope + 1) <= 0.01
    assert [r["h"] for r in t.rows()] == pytest.approx([1 / k for k in (10, 20, 40, 80, 160, 320)])
    with pytest.raises(ValueError):
        boundary_blowup([Grid(11), Grid(11)])
    with pytest.raises(ValueError):
        boundary_blowup([Grid(11)])


def test_nikodym_examples(rng):
    d = 4
    T = random_hermitian(d, rng)
    rep = nikodym_demo(T, np.zeros((d, d)), 10, 5, rng=rng)
    assert rep.passed and np.all(rep.deviations <= 1e-12)
    S = np.diag([1.0, 0, 0, 0])
    rep = nikodym_demo(np.eye(d), S, 30, [Subspace.coordinate(d, [0])])
    ns = np.arange(1, 31)
    assert np.allclose(rep.deviations[:, 0], 1 / ns)
    assert rep.passed
    with pytest.raises(ValueError):
        nikodym_demo(np.eye(2), np.eye(3), 5, 2)


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_nikodym_random_pairs(seed, d):
    rng = np.random.default_rng(seed)
    rep = nikodym_demo(random_hermitian(d, rng), random_hermitian(d, rng), 40, 20, rng=rng)
    assert rep.passed
    assert np.all(np.diff(rep.max_deviation) <= 1e-12)
    assert np.all(rep.deviations <= rep.bounds + 1e-12)
