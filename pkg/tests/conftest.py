from __future__ import annotations

import itertools

import pytest

from attenuated.operators import build_operators
from attenuated.poset import build_poset

SMALL = [(2, 1, 1), (2, 2, 1), (2, 1, 2), (2, 2, 2), (3, 2, 1)]

_cache: dict = {}


def poset(q, N, M):
    key = ("poset", q, N, M)
    if key not in _cache:
        _cache[key] = build_poset(q, N, M)
    return _cache[key]


def ops(q, N, M):
    key = ("ops", q, N, M)
    if key not in _cache:
        _cache[key] = build_operators(poset(q, N, M))
    return _cache[key]


@pytest.fixture
def p222():
    return poset(2, 2, 2)


@pytest.fixture
def p321():
    return poset(3, 2, 1)


@pytest.fixture
def p211():
    return poset(2, 1, 1)


def rref_pattern_count(n: int, i: int, q: int) -> int:
    """Number of i x n full-rank RREF matrices over F_q, summed over pivot patterns.

    Each pivot pattern contributes q to the power of its free cells, counted cell by cell.
    """
    total = 0
    for piv in itertools.combinations(range(n), i):
        free = sum(1 for r in range(i) for c in range(piv[r] + 1, n) if c not in piv)
        total += q**free
    return total


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
