from fractions import Fraction

import sympy
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings
from hypothesis import strategies as st

from attenuated.exact import (
    ExactMatrix,
    nullspace,
    poly_from_roots,
    rank,
    tridiagonal_charpoly,
)
from attenuated.qcomb import ExactScalar

Q = 2
ROOT = sympy.sqrt(Q)
FIELD = sympy.QQ.algebraic_field(ROOT)


def to_sympy(m: ExactMatrix) -> DomainMatrix:
    rows = [[FIELD.from_sympy(sympy.Rational(m[i, j].a) + sympy.Rational(m[i, j].b) * ROOT)
             for j in range(m.ncols)] for i in range(m.nrows)]
    return DomainMatrix(rows, m.shape, FIELD)


entry = st.tuples(st.integers(-3, 3), st.integers(-2, 2))
mats = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r)))


def build(rows):
    return ExactMatrix.from_entries(
        [[ExactScalar(Fraction(a), Fraction(b), Q) for a, b in row] for row in rows], Q)


@settings(max_examples=60, deadline=None)
@given(mats)
def test_rank_and_kernel_vs_sympy(rows):
    m = build(rows)
    ref = to_sympy(m)
    assert rank(m) == ref.rank()
    ker = nullspace(m)
    assert ker.ncols == m.ncols - ref.rank()
    assert (m @ ker).is_zero()
    if ker.ncols:
        assert rank(ker) == ker.ncols


@settings(max_examples=40, deadline=None)
@given(mats, mats)
def test_product_vs_sympy(r1, r2):
    a = build(r1)
    b = build([r2[k % len(r2)] for k in range(a.ncols)])
    assert to_sympy(a @ b) == to_sympy(a) * to_sympy(b)


def test_diagonal_fast_path_matches_dense():
    d = ExactMatrix.diag([ExactScalar(Fraction(1, 2), Fraction(1), Q), 3, Fraction(-1, 4)], Q)
    dense = ExactMatrix.from_entries(d.entries(), Q)
    m = ExactMatrix.from_ints([[1, 2, 3], [4, 5, 6], [7, 8, 9]], Q)
    assert d @ m == dense @ m
    assert m @ d == m @ dense


def test_identity_and_power():
    m = ExactMatrix.from_ints([[0, 1], [1, 0]], Q)
    assert m**2 == ExactMatrix.identity(2, Q)
    assert m**0 == ExactMatrix.identity(2, Q)


def test_tridiagonal_charpoly_matches_roots():
    # [[0,12,0],[1,0,24],[0,1,0]] has eigenvalues 6, 0, -6
    cp = tridiagonal_charpoly([1, 1], [0, 0, 0], [12, 24], Q)
    assert cp == poly_from_roots([ExactScalar.of(x, Q) for x in (6, 0, -6)], Q)


def test_trace_and_transpose():
    m = ExactMatrix.from_ints([[1, 2], [3, 4]], Q)
    assert m.trace() == 5
    assert m.T == ExactMatrix.from_ints([[1, 3], [2, 4]], Q)
