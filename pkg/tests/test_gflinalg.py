import itertools
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from attenuated.gflinalg import (
    CapacityError,
    GFMatrix,
    Vertex,
    covers,
    enumerate_vertices,
    gf_rank,
    is_subspace_of,
    rref,
    vertex_count,
)
from attenuated.poset import same_subspace
from attenuated.qcomb import q_binomial


def test_rref_zero():
    m = GFMatrix.from_rows([[0, 0], [0, 0]], 3)
    form, piv, rank = rref(m)
    assert form == m and piv == [] and rank == 0


def test_rref_identity():
    m = GFMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert rref(m) == (m, [0, 1, 2], 3)


def test_rref_hand_example():
    form, piv, rank = rref(GFMatrix.from_rows([[1, 1], [1, 0]], 2))
    assert form.entries == ((1, 0), (0, 1)) and piv == [0, 1] and rank == 2


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 2), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_rref_idempotent(rows):
    m = GFMatrix.from_rows(rows, 3)
    form, piv, rank = rref(m)
    assert rref(form) == (form, piv, rank)
    assert piv == sorted(piv) and len(set(piv)) == rank
    assert all(any(row) for row in form.entries[:rank])
    assert not any(any(row) for row in form.entries[rank:])


@pytest.mark.parametrize("params, sizes", [
    ((2, 2, 2), [1, 12, 16]),
    ((3, 2, 1), [1, 12, 9]),
    ((2, 3, 2), [1, 28, 112, 64]),
])
def test_enumerate_counts(params, sizes):
    verts = enumerate_vertices(*params)
    counts = Counter(v.dim for v in verts)
    assert [counts[i] for i in range(len(sizes))] == sizes
    q, N, M = params
    assert sizes == [q ** (M * i) * q_binomial(N, i, q) for i in range(N + 1)]


def test_enumeration_matches_exhaustive_subspaces():
    # every subspace of F_2^4 meeting h = span(e3, e4) trivially, by brute force
    q, N, M = 2, 2, 2
    vecs = list(itertools.product(range(q), repeat=N + M))
    h = {v for v in vecs if v[:N] == (0,) * N}
    spaces = set()
    for k in range(N + 1):
        for combo in itertools.combinations(vecs, k):
            span = {tuple([0] * (N + M))}
            for coeffs in itertools.product(range(q), repeat=k):
                span.add(tuple(sum(c * v[j] for c, v in zip(coeffs, combo)) % q for j in range(N + M)))
            if len(span) == q**k and span & h == {tuple([0] * (N + M))}:
                spaces.add(frozenset(span))
    assert len(spaces) == 29
    verts = enumerate_vertices(q, N, M)
    got = set()
    for v in verts:
        rows = [tuple(v.block().entries[r]) for r in range(v.dim)]
        span = {tuple([0] * (N + M))}
        for coeffs in itertools.product(range(q), repeat=v.dim):
            span.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % q for j in range(N + M)))
        got.add(frozenset(span))
    assert got == spaces


def test_canonical_uniqueness():
    verts = enumerate_vertices(2, 2, 2)
    for a, b in itertools.combinations(verts, 2):
        assert not same_subspace(a, b)


def test_ordering_is_dim_major_lexicographic():
    verts = enumerate_vertices(3, 2, 1)
    assert verts == sorted(verts, key=Vertex.sort_key)
    assert [v.dim for v in verts] == sorted(v.dim for v in verts)


def test_vertex_blocks_are_rref_with_trivial_h_meet():
    for v in enumerate_vertices(2, 3, 2):
        form, piv, rank = rref(v.U)
        assert form == v.U and rank == v.dim
        assert gf_rank(v.block()) == v.dim


def _vertex(rows_u, rows_t, q=2, N=2, M=2):
    return Vertex(len(rows_u), GFMatrix.from_rows(rows_u, q, N), GFMatrix.from_rows(rows_t, q, M))


def test_is_subspace_examples():
    verts = enumerate_vertices(2, 2, 2)
    zero = verts[0]
    for v in verts:
        assert is_subspace_of(v, v)
        assert is_subspace_of(zero, v)
    y = _vertex([[1, 0]], [[1, 0]])
    z = _vertex([[1, 0], [0, 1]], [[1, 0], [0, 0]])
    assert is_subspace_of(y, z)
    assert not is_subspace_of(z, y)


def test_covers_examples():
    verts = enumerate_vertices(2, 2, 2)
    zero = verts[0]
    for v in verts:
        assert not covers(v, v)
        if v.dim == 1:
            assert covers(v, zero)
            assert sum(covers(z, v) for z in verts if z.dim == 2) == 4


def test_parameter_mismatch():
    a = enumerate_vertices(2, 2, 2)[1]
    b = enumerate_vertices(2, 2, 1)[1]
    with pytest.raises(ValueError):
        is_subspace_of(a, b)
    with pytest.raises(ValueError):
        covers(a, b)


def test_capacity_error():
    with pytest.raises(CapacityError) as exc:
        enumerate_vertices(2, 5, 5)
    assert exc.value.size == vertex_count(2, 5, 5) == 71299041
    assert len(enumerate_vertices(2, 2, 2, cap=29)) == 29
    with pytest.raises(CapacityError):
        enumerate_vertices(2, 2, 2, cap=28)


def test_non_prime_rejected():
    with pytest.raises(ValueError, match="prime"):
        enumerate_vertices(4, 2, 2)
