import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gleason_lab.hilbert import (
    DimensionError,
    HermitianOp,
    Subspace,
    compressed_trace,
    decode_matrix,
    encode_matrix,
    inner,
    is_orthogonal,
    join,
    meet,
    ortho_complement,
    orthonormalize,
    projector,
    random_hermitian,
    random_subspace,
    random_unitary,
    span,
    trace,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 7)


def test_inner_is_linear_in_left_argument():
    x, y = np.array([1.0, 2j]), np.array([1j, 1.0])
    assert inner(2j * x, y) == pytest.approx(2j * inner(x, y))
    assert inner(x, 2j * y) == pytest.approx(-2j * inner(x, y))


def test_orthonormalize_full_space_from_two_vectors():
    M = orthonormalize([[1, 0], [1, 1]])
    assert M.dim == 2 and M.equiv(Subspace.full(2))


def test_orthonormalize_drops_dependent_vector():
    M = orthonormalize([[1, 0], [2, 0]])
    assert M.dim == 1 and M.equiv(Subspace.coordinate(2, [0]))


def test_orthonormalize_random_rank(rng):
    vecs = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    M = orthonormalize(vecs)
    assert M.dim == 3
    assert np.max(np.abs(M.basis.conj().T @ M.basis - np.eye(3))) <= 1e-10


def test_orthonormalize_dimension_mismatch():
    with pytest.raises(DimensionError):
        orthonormalize([[1, 0], [1, 0, 0]])
    with pytest.raises(ValueError):
        orthonormalize([])


def test_subspace_rejects_non_orthonormal_basis():
    with pytest.raises(ValueError):
        Subspace(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_projector_examples(rng):
    assert np.allclose(projector(Subspace.coordinate(2, [0])).matrix, [[1, 0], [0, 0]])
    assert np.allclose(projector(Subspace.zero(3)).matrix, 0)
    M = random_subspace(6, 4, rng)
    P = projector(M).matrix
    assert np.max(np.abs(P @ P - P)) <= 1e-9
    assert abs(trace(P) - 4) <= 1e-9


def test_lattice_examples():
    e = lambda *i: Subspace.coordinate(3, list(i))
    assert join(e(0), e(1)).dim == 2
    assert meet(e(0, 1), e(1, 2)).equiv(e(1))
    assert (e(0) | e(1)).equiv(e(0, 1))
    assert (~e(0)).equiv(e(1, 2))
    assert is_orthogonal(e(0), e(1, 2)) and not is_orthogonal(e(0, 1), e(1))


def test_dimension_mismatch_errors():
    with pytest.raises(DimensionError):
        join(Subspace.full(2), Subspace.full(3))
    with pytest.raises(DimensionError):
        compressed_trace(HermitianOp(np.eye(2)), Subspace.full(3))


def test_trace_examples():
    T = HermitianOp(np.diag([1 / 2, 1 / 3, 1 / 6]))
    M = Subspace.coordinate(3, [0, 1])
    assert compressed_trace(T, M) == pytest.approx(5 / 6, abs=1e-12)
    assert compressed_trace(HermitianOp(np.eye(4)), Subspace.coordinate(4, [1, 3])) == pytest.approx(2)


def test_hermitian_op_validation():
    with pytest.raises(ValueError):
        HermitianOp([[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        HermitianOp([[np.inf]])
    with pytest.raises(ValueError):
        HermitianOp(np.zeros((2, 3)))
    T = HermitianOp([[1, 1j], [-1j, 2]])
    assert T.is_positive()
    assert (np.float64(2.0) * T).close_to(HermitianOp([[2, 2j], [-2j, 4]]))


def test_matrix_json_round_trip(rng):
    T = random_hermitian(4, rng)
    assert np.array_equal(decode_matrix(encode_matrix(T.matrix)), T.matrix)
    with pytest.raises(ValueError):
        decode_matrix([[1, 2], [3]])
    with pytest.raises(ValueError):
        decode_matrix([[[1, 2, 3]]])


@given(seeds, dims, st.data())
def test_orthogonal_join_projector_is_sum(seed, d, data):
    rng = np.random.default_rng(seed)
    U = random_unitary(d + 1, rng)
    k = data.draw(st.integers(0, d + 1))
    M, N = Subspace(U[:, :k]), Subspace(U[:, k:])
    assert is_orthogonal(M, N)
    assert np.max(np.abs(join(M, N).projector - M.projector - N.projector)) <= 1e-9


@given(seeds, dims, st.data())
def test_complement_is_involution(seed, d, data):
    rng = np.random.default_rng(seed)
    M = random_subspace(d, data.draw(st.integers(0, d)), rng)
    assert M.dim + (~M).dim == d
    assert (~~M).equiv(M)


@given(seeds, dims)
def test_trace_identities(seed, d):
    rng = np.random.default_rng(seed)
    T = random_hermitian(d, rng)
    assert compressed_trace(T, Subspace.full(d)) == pytest.approx(trace(T), abs=1e-10)
    x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    x /= np.linalg.norm(x)
    val = np.real(inner(T.matrix @ x, x))
    assert abs(compressed_trace(T, span(x)) - val) <= 1e-10


@given(seeds, dims, st.data())
def test_onb_invariance_of_compressed_trace(seed, d, data):
    rng = np.random.default_rng(seed)
    T = random_hermitian(d, rng)
    M = random_subspace(d, data.draw(st.integers(1, d)), rng)
    B2 = M.basis @ random_unitary(M.dim, rng)
    s1 = sum(np.real(inner(T.matrix @ x, x)) for x in M.basis.T)
    s2 = sum(np.real(inner(T.matrix @ x, x)) for x in B2.T)
    assert abs(s1 - s2) <= 1e-9


@given(seeds, st.integers(2, 6), st.data())
def test_meet_is_intersection(seed, d, data):
    rng = np.random.default_rng(seed)
    U = random_unitary(d, rng)
    a = data.draw(st.integers(0, d))
    b = data.draw(st.integers(a, d))
    c = data.draw(st.integers(b, d))
    # M = span U[:, :b], N = span U[:, a:c] share exactly U[:, a:b]
    M, N = Subspace(U[:, :b]), Subspace(U[:, a:c])
    assert meet(M, N).equiv(Subspace(U[:, a:b], d))
