"""Linear algebra over a prime field F_q and enumeration of the vertex set.

The ambient space is F_q^(N+M) and the fixed subspace ``h`` is the span of
the last M coordinates. A subspace meeting ``h`` trivially is then the row
space of a unique block matrix ``[U | T]`` with ``U`` a full-rank RREF
matrix on the first N coordinates and ``T`` arbitrary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from attenuated.qcomb import q_binomial

DEFAULT_CAP = 100_000


class CapacityError(RuntimeError):
    """The requested instance exceeds the configured vertex cap."""

    def __init__(self, size: int, cap: int) -> None:
        super().__init__(f"|X| = {size} exceeds the size cap {cap}")
        self.size = size
        self.cap = cap


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


def _check_prime(q: int) -> None:
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")


@dataclass(frozen=True)
class GFMatrix:
    q: int
    nrows: int
    ncols: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], q: int, ncols: int | None = None) -> GFMatrix:
        rows = tuple(tuple(int(x) % q for x in row) for row in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for an empty matrix")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(q, len(rows), ncols, rows)

    def hstack(self, other: GFMatrix) -> GFMatrix:
        if self.nrows != other.nrows or self.q != other.q:
            raise ValueError("hstack shape/field mismatch")
        rows = tuple(a + b for a, b in zip(self.entries, other.entries))
        return GFMatrix(self.q, self.nrows, self.ncols + other.ncols, rows)

    def vstack(self, other: GFMatrix) -> GFMatrix:
        if self.ncols != other.ncols or self.q != other.q:
            raise ValueError("vstack shape/field mismatch")
        return GFMatrix(self.q, self.nrows + other.nrows, self.ncols, self.entries + other.entries)

    def digits(self) -> tuple[int, ...]:
        return tuple(x for row in self.entries for x in row)


def rref(m: GFMatrix) -> tuple[GFMatrix, list[int], int]:
    """Reduced row echelon form over F_q; returns ``(form, pivots, rank)``."""
    q = m.q
    rows = [list(r) for r in m.entries]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        if r == len(rows):
            break
        k = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][c], -1, q)
        rows[r] = [(x * inv) % q for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return GFMatrix(q, m.nrows, m.ncols, tuple(map(tuple, rows))), pivots, r


def gf_rank(m: GFMatrix) -> int:
    return rref(m)[2]


@dataclass(frozen=True)
class Vertex:
    """A subspace y of F_q^(N+M) with y meeting h trivially, in canonical form."""

    dim: int
    U: GFMatrix
    T: GFMatrix

    @property
    def q(self) -> int:
        return self.U.q

    @property
    def params(self) -> tuple[int, int, int]:
        return self.U.q, self.U.ncols, self.T.ncols

    def block(self) -> GFMatrix:
        return self.U.hstack(self.T)

    def sort_key(self) -> tuple:
        return (self.dim, self.U.digits() + self.T.digits())


def _rref_matrices(N: int, i: int, q: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All i x N full-rank RREF matrices over F_q."""
    for piv in itertools.combinations(range(N), i):
        free = [(r, c) for r in range(i) for c in range(piv[r] + 1, N) if c not in piv]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * N for _ in range(i)]
            for r, c in enumerate(piv):
                rows[r][c] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield tuple(map(tuple, rows))


def vertex_count(q: int, N: int, M: int) -> int:
    return sum(int(q ** (M * i) * q_binomial(N, i, q)) for i in range(N + 1))


def enumerate_vertices(q: int, N: int, M: int, cap: int = DEFAULT_CAP) -> list[Vertex]:
    """All vertices of the poset, ordered by dimension then by (U, T) digits."""
    _check_prime(q)
    if N < 1 or M < 1:
        raise ValueError(f"N and M must be positive, got N={N}, M={M}")
    size = vertex_count(q, N, M)
    if size > cap:
        raise CapacityError(size, cap)
    out: list[Vertex] = []
    for i in range(N + 1):
        block: list[Vertex] = []
        for u in _rref_matrices(N, i, q):
            U = GFMatrix(q, i, N, u)
            for t in itertools.product(range(q), repeat=i * M):
                rows = tuple(tuple(t[r * M:(r + 1) * M]) for r in range(i))
                block.append(Vertex(i, U, GFMatrix(q, i, M, rows)))
        block.sort(key=Vertex.sort_key)
        out.extend(block)
    return out


def _check_same(y: Vertex, z: Vertex) -> None:
    if y.params != z.params:
        raise ValueError(f"parameter mismatch: {y.params} vs {z.params}")


def is_subspace_of(y: Vertex, z: Vertex) -> bool:
    """True iff the subspace of ``y`` lies inside that of ``z``."""
    _check_same(y, z)
    if y.dim == 0:
        return True
    if y.dim > z.dim:
        return False
    if z.dim == 0:
        return False
    return gf_rank(z.block().vstack(y.block())) == z.dim


def covers(z: Vertex, y: Vertex) -> bool:
    """True iff ``z`` covers ``y``."""
    _check_same(y, z)
    return z.dim == y.dim + 1 and is_subspace_of(y, z)
