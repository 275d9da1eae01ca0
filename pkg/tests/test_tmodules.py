from fractions import Fraction

import pytest

from attenuated.exact import poly_from_roots, tridiagonal_charpoly
from attenuated.qcomb import ExactScalar
from attenuated.tmodules import (
    action_matrix,
    decompose,
    in_psi,
    isomorphism_separation,
    leonard_profile,
    observed_multiplicities,
    psi_set,
    verify_module,
    verify_psisum,
    xi,
    xi_prime,
)
from conftest import SMALL, ops, poset

_witnesses: dict = {}


def witnesses(*params):
    if params not in _witnesses:
        _witnesses[params] = decompose(poset(*params), ops(*params))
    return _witnesses[params]


def mults(q, N, M):
    return {(e.r, e.d): int(e.mult) for e in psi_set(q, N, M)}


@pytest.mark.parametrize("params, want", [
    ((2, 2, 2), {(0, 2): 1, (1, 0): 2, (1, 1): 9, (2, 0): 6}),
    ((3, 2, 1), {(0, 2): 1, (1, 0): 3, (1, 1): 8}),
    ((2, 1, 1), {(0, 1): 1, (1, 0): 1}),
    ((2, 3, 2), {(0, 3): 1, (1, 1): 6, (1, 2): 21, (2, 0): 42, (2, 1): 42}),
])
def test_psi_set(params, want):
    assert mults(*params) == want


def test_excluded_by_diameter_bound():
    assert not in_psi(2, 0, 2, 1)
    assert in_psi(2, 0, 2, 2)


@pytest.mark.parametrize("params", [(2, 2, 2), (3, 2, 1), (2, 3, 2), (3, 3, 3), (2, 4, 1), (5, 3, 4)])
def test_psisum(params):
    rep = verify_psisum(*params)
    assert rep.passed and rep.rows


def test_psisum_includes_chain_example():
    row = next(r for r in verify_psisum(2, 3, 2).rows if (r["r"], r["d"]) == (1, 2))
    assert row["pass"] and row["lhs"] == row["rhs"]


def test_completeness_identity():
    for params in [(2, 2, 2), (3, 2, 1), (2, 3, 2), (3, 4, 2)]:
        from attenuated.gflinalg import vertex_count

        total = sum(int(e.mult) * (e.d + 1) for e in psi_set(*params))
        assert total == vertex_count(*params)


def test_xi_examples():
    assert xi(1, 0, 2, 2, 2, 2) == 12
    assert xi(2, 0, 2, 2, 2, 2) == 24
    assert xi_prime(1, 0, 2, 2, 2, 2) == 12
    assert xi_prime(2, 0, 2, 2, 2, 2) == 12
    assert xi_prime(1, 1, 1, 2, 2, 2) == 4
    with pytest.raises(ValueError):
        xi(0, 0, 2, 2, 2, 2)
    with pytest.raises(ValueError):
        xi_prime(3, 0, 2, 2, 2, 2)


@pytest.mark.parametrize("params", SMALL)
def test_decomposition_counts(params):
    w = witnesses(*params)
    assert observed_multiplicities(w) == dict(sorted(mults(*params).items()))
    assert sum(len(x.basis) for x in w) == poset(*params).size


def test_decomposition_222_size():
    assert len(witnesses(2, 2, 2)) == 18


@pytest.mark.parametrize("params", SMALL)
def test_every_witness_passes(params):
    p, o = poset(*params), ops(*params)
    for w in witnesses(*params):
        rep = verify_module(p, w, o)
        assert rep.passed, (w.r, w.d, rep.checks)


def test_module_02_tridiagonal():
    w = next(w for w in witnesses(2, 2, 2) if (w.r, w.d) == (0, 2))
    mat = action_matrix(w.basis, ops(2, 2, 2).A)
    assert mat == [[0, 12, 0], [1, 0, 24], [0, 1, 0]]
    cp = tridiagonal_charpoly([1, 1], [0, 0, 0], [12, 24], 2)
    assert cp == poly_from_roots([ExactScalar.of(x, 2) for x in (6, 0, -6)], 2)


def test_module_20_is_zero_scalar():
    w = next(w for w in witnesses(2, 2, 2) if (w.r, w.d) == (2, 0))
    assert action_matrix(w.basis, ops(2, 2, 2).A) == [[0]]


@pytest.mark.parametrize("params", SMALL)
def test_isomorphism_separation(params):
    assert isomorphism_separation(poset(*params), witnesses(*params), ops(*params))


def test_leonard_222_top_module():
    w = next(w for w in witnesses(2, 2, 2) if (w.r, w.d) == (0, 2))
    lp = leonard_profile(w, 2, 2, 2, ops(2, 2, 2))
    assert lp.passed and lp.bipartite
    assert lp.h == 8 and lp.h_star == 1 and lp.s == Fraction(-1, 8) and lp.theta0 == 6


def test_leonard_321_irrational():
    w = next(w for w in witnesses(3, 2, 1) if (w.r, w.d) == (1, 0))
    lp = leonard_profile(w, 3, 2, 1, ops(3, 2, 1))
    assert lp.passed
    assert lp.h == ExactScalar(Fraction(0), Fraction(3, 2), 3)
    assert lp.theta0 == 0


@pytest.mark.parametrize("params", SMALL)
def test_leonard_all(params):
    o = ops(*params)
    for w in witnesses(*params):
        lp = leonard_profile(w, *params, o)
        assert lp.passed, (w.r, w.d, lp.checks)
