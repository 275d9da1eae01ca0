import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attenuated.gflinalg import _rref_matrices
from attenuated.qcomb import ExactScalar, ext_inv, ext_mul, mu, q_binomial, q_int
from conftest import rref_pattern_count


@pytest.mark.parametrize("n, q, want", [(0, 2, 0), (3, 2, 7), (2, 3, 4)])
def test_q_int(n, q, want):
    assert q_int(n, q) == want


@pytest.mark.parametrize("n, i, q, want", [(3, 1, 2, 7), (4, 2, 2, 35), (2, 5, 3, 0), (3, -1, 2, 0)])
def test_q_binomial_examples(n, i, q, want):
    assert q_binomial(n, i, q) == want


def _span(vectors, q):
    out = {tuple([0] * len(vectors[0]))}
    for coeffs in itertools.product(range(q), repeat=len(vectors)):
        out.add(tuple(sum(c * v[k] for c, v in zip(coeffs, vectors)) % q for k in range(len(vectors[0]))))
    return frozenset(out)


@pytest.mark.parametrize("n, q", [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
def test_q_binomial_vs_span_enumeration(n, q):
    # independent oracle: distinct spans of all i-tuples of vectors
    vectors = list(itertools.product(range(q), repeat=n))
    for i in range(n + 1):
        spans = set()
        for combo in itertools.combinations(vectors, i):
            s = _span(list(combo), q) if combo else frozenset({tuple([0] * n)})
            if len(s) == q**i:
                spans.add(s)
        assert q_binomial(n, i, q) == len(spans)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_q_binomial_vs_rref_count(q):
    # every (n, i) with n <= 12 whose count is small enough to enumerate
    checked = 0
    for n in range(13):
        for i in range(n + 1):
            if q_binomial(n, i, q) <= 40_000:
                assert q_binomial(n, i, q) == sum(1 for _ in _rref_matrices(n, i, q))
                checked += 1
    assert checked >= 30


@pytest.mark.parametrize("q", [2, 3, 5])
def test_q_binomial_vs_pivot_patterns(q):
    for n in range(13):
        for i in range(n + 1):
            assert q_binomial(n, i, q) == rref_pattern_count(n, i, q)


@given(st.integers(1, 14), st.integers(0, 14), st.sampled_from([2, 3, 5, 7]))
def test_pascal_identity(n, i, q):
    if i > n:
        return
    assert q_binomial(n, i, q) == q_binomial(n - 1, i - 1, q) + q**i * q_binomial(n - 1, i, q)


def test_q_binomial_integer_valued():
    for n in range(10):
        for i in range(-1, n + 2):
            assert q_binomial(n, i, 3).denominator == 1


@pytest.mark.parametrize("r, N, M, q, want", [(0, 2, 2, 2, 1), (1, 2, 2, 2, 9), (2, 2, 1, 3, 0), (2, 2, 2, 2, 6)])
def test_mu_examples(r, N, M, q, want):
    assert mu(r, N, M, q) == want


@pytest.mark.parametrize("N, M, q", [(2, 2, 2), (3, 1, 2), (2, 3, 3), (4, 2, 2)])
def test_mu_support(N, M, q):
    for r in range(-2, max(N, M) + 3):
        assert (mu(r, N, M, q) != 0) == (0 <= r <= min(N, M))


def S(a, b, q=2):
    return ExactScalar(Fraction(a), Fraction(b), q)


def test_ext_mul_examples():
    assert ext_mul(S(1, 1), S(1, -1)) == -1
    assert ext_mul(S(0, 1), S(0, 1)) == 2
    x = S(Fraction(3, 7), -2, 3)
    assert ext_mul(S(1, 0, 3), x) == x


def test_ext_inv_examples():
    assert ext_inv(S(2, 0)) == S(Fraction(1, 2), 0)
    assert ext_inv(S(0, 1)) == S(0, Fraction(1, 2))
    assert ext_inv(S(1, 1)) == S(-1, 1)
    assert ext_mul(S(1, 1), S(-1, 1)) == 1


def test_ext_inv_zero():
    with pytest.raises(ZeroDivisionError):
        ext_inv(S(0, 0))


def test_base_mismatch():
    with pytest.raises(ValueError):
        ext_mul(S(1, 1, 2), S(1, 1, 3))
    with pytest.raises(ValueError):
        S(1, 1, 2) + S(1, 1, 3)


def test_square_base_folds():
    x = ExactScalar(Fraction(1), Fraction(2), 4)
    assert x.b == 0 and x.a == 5
    assert ExactScalar.sqrt_q(9) == 3


def test_sqrt_q_power():
    for q in (2, 3, 5):
        r = ExactScalar.sqrt_q(q)
        for k in range(-4, 7):
            assert ExactScalar.sqrt_q_power(q, k) == r**k


def test_str_format():
    assert str(S(0, 2)) == "2*sqrt(2)"
    assert str(S(1, -1, 3)) == "1 - sqrt(3)"
    assert str(S(Fraction(1, 2), 0)) == "1/2"


small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(lambda a, b: ExactScalar(a, b, 3), small, small)


@settings(max_examples=200)
@given(scalars, scalars, scalars)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(scalars)
def test_nonzero_has_nonzero_norm(x):
    assert (x.norm() == 0) == x.is_zero()
