"""Dense exact matrices over Q(sqrt(q)) and exact Gaussian elimination.

A matrix is stored as ``(A + B*sqrt(q)) / den`` with ``A`` and ``B`` numpy
object arrays of Python ints and a positive integer ``den``. The triple is
kept in lowest terms, so equality is structural. ``B`` is ``None`` for a
rational matrix, which keeps the common case at one integer product.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from attenuated.qcomb import ExactScalar, Number, _is_square


def _int_array(x, shape=None) -> np.ndarray:
    arr = np.empty(shape if shape is not None else np.shape(x), dtype=object)
    if shape is None:
        arr[...] = x
    else:
        arr.fill(0)
    return arr


def _scalar_parts(x: Number, q: int) -> tuple[int, int, int]:
    """``x = (sa + sb*sqrt(q)) / sd`` with integers."""
    s = ExactScalar.of(x, q)
    d = math.lcm(s.a.denominator, s.b.denominator)
    return int(s.a * d), int(s.b * d), d


class ExactMatrix:
    __slots__ = ("q", "A", "B", "den", "_diag")

    def __init__(self, A: np.ndarray, B: np.ndarray | None, den: int, q: int, *, diag: bool = False) -> None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if A.ndim != 2:
            raise ValueError("ExactMatrix needs a 2-D array")
        if den < 0:
            A, B, den = -A, (None if B is None else -B), -den
        if B is not None and _is_square(q):
            A = A + math.isqrt(q) * B
            B = None
        if B is not None and not B.any():
            B = None
        flat = A.ravel().tolist()
        if B is not None:
            flat += B.ravel().tolist()
        g = math.gcd(den, *flat)
        if g > 1:
            A = A // g
            B = None if B is None else B // g
            den //= g
        self.A = A
        self.B = B
        self.den = den
        self.q = q
        self._diag = diag

    # -- construction -------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int, q: int) -> ExactMatrix:
        return cls(_int_array(None, (nrows, ncols)), None, 1, q)

    @classmethod
    def identity(cls, n: int, q: int) -> ExactMatrix:
        A = _int_array(None, (n, n))
        for i in range(n):
            A[i, i] = 1
        return cls(A, None, 1, q, diag=True)

    @classmethod
    def from_ints(cls, rows, q: int, den: int = 1) -> ExactMatrix:
        A = np.array(rows, dtype=object)
        if A.ndim == 1:
            A = A.reshape(-1, 1)
        return cls(np.vectorize(int, otypes=[object])(A) if A.size else A, None, den, q)

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[Number]], q: int, ncols: int | None = None) -> ExactMatrix:
        """Build from a grid of ints, Fractions or ExactScalars."""
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        parts = [[_scalar_parts(x, q) for x in row] for row in rows]
        den = math.lcm(1, *(p[2] for row in parts for p in row))
        A = _int_array(None, (nrows, ncols))
        B = _int_array(None, (nrows, ncols))
        for i, row in enumerate(parts):
            for j, (sa, sb, sd) in enumerate(row):
                A[i, j] = sa * (den // sd)
                B[i, j] = sb * (den // sd)
        return cls(A, B, den, q)

    @classmethod
    def diag(cls, values: Sequence[Number], q: int) -> ExactMatrix:
        n = len(values)
        m = cls.from_entries([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], q)
        m._diag = True
        return m

    @classmethod
    def column(cls, values: Sequence[Number], q: int) -> ExactMatrix:
        return cls.from_entries([[v] for v in values], q, ncols=1)

    # -- shape and access ---------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    @property
    def nrows(self) -> int:
        return self.A.shape[0]

    @property
    def ncols(self) -> int:
        return self.A.shape[1]

    @property
    def is_rational(self) -> bool:
        return self.B is None

    def _b(self) -> np.ndarray:
        return self.B if self.B is not None else _int_array(None, self.A.shape)

    def __getitem__(self, key: tuple[int, int]) -> ExactScalar:
        i, j = key
        b = 0 if self.B is None else self.B[i, j]
        return ExactScalar(Fraction(self.A[i, j], self.den), Fraction(b, self.den), self.q)

    def entries(self) -> list[list[ExactScalar]]:
        return [[self[i, j] for j in range(self.ncols)] for i in range(self.nrows)]

    def take(self, rows=None, cols=None) -> ExactMatrix:
        """Submatrix by slices or index lists."""
        rsel = slice(None) if rows is None else rows
        csel = slice(None) if cols is None else cols
        A = self.A[rsel][:, csel]
        B = None if self.B is None else self.B[rsel][:, csel]
        return ExactMatrix(np.array(A, dtype=object), None if B is None else np.array(B, dtype=object), self.den, self.q)

    def col(self, j: int) -> ExactMatrix:
        return self.take(cols=[j])

    @property
    def T(self) -> ExactMatrix:
        B = None if self.B is None else self.B.T.copy()
        return ExactMatrix(self.A.T.copy(), B, self.den, self.q, diag=self._diag)

    def diagonal(self) -> list[ExactScalar]:
        return [self[i, i] for i in range(min(self.shape))]

    def trace(self) -> ExactScalar:
        out = ExactScalar.of(0, self.q)
        for x in self.diagonal():
            out = out + x
        return out

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.A.any() and self.B is None

    def nonzero_count(self) -> int:
        nz = self.A != 0
        if self.B is not None:
            nz = nz | (self.B != 0)
        return int(np.count_nonzero(nz))

    def nonzero_mask(self) -> np.ndarray:
        nz = self.A != 0
        if self.B is not None:
            nz = nz | (self.B != 0)
        return np.asarray(nz, dtype=bool)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape or self.q != other.q or self.den != other.den:
            return False
        if (self.B is None) != (other.B is None):
            return False
        if not np.array_equal(self.A, other.A):
            return False
        return self.B is None or np.array_equal(self.B, other.B)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        kind = "rational" if self.B is None else "quadratic"
        return f"ExactMatrix({self.nrows}x{self.ncols}, q={self.q}, {kind}, den={self.den})"

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: ExactMatrix) -> None:
        if self.q != other.q:
            raise ValueError(f"base mismatch: {self.q} vs {other.q}")

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        den = math.lcm(self.den, other.den)
        fs, fo = den // self.den, den // other.den
        A = self.A * fs + other.A * fo
        if self.B is None and other.B is None:
            B = None
        else:
            B = self._b() * fs + other._b() * fo
        return ExactMatrix(A, B, den, self.q, diag=self._diag and other._diag)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix(-self.A, None if self.B is None else -self.B, self.den, self.q, diag=self._diag)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, x: Number) -> ExactMatrix:
        sa, sb, sd = _scalar_parts(x, self.q)
        A = self.A * sa
        if self.B is not None:
            A = A + self.B * (self.q * sb)
        if sb == 0 and self.B is None:
            B = None
        else:
            B = self._b() * sa + self.A * sb
        return ExactMatrix(A, B, self.den * sd, self.q, diag=self._diag)

    def __mul__(self, x: Number) -> ExactMatrix:
        if isinstance(x, ExactMatrix):
            return NotImplemented
        return self.scale(x)

    __rmul__ = __mul__

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        q = self.q
        if self._diag:
            da = self.A.diagonal()[:, None]
            db = None if self.B is None else self.B.diagonal()[:, None]
            return self._combine(da, db, other.A, other.B, lambda x, y: x * y, other, diag=other._diag)
        if other._diag:
            da = other.A.diagonal()[None, :]
            db = None if other.B is None else other.B.diagonal()[None, :]
            return self._combine(self.A, self.B, da, db, lambda x, y: x * y, other, diag=False)
        return self._combine(self.A, self.B, other.A, other.B, lambda x, y: x.dot(y), other, diag=False)

    def _combine(self, a1, b1, a2, b2, op, other: ExactMatrix, diag: bool) -> ExactMatrix:
        q = self.q
        A = op(a1, a2)
        if b1 is not None and b2 is not None:
            A = A + q * op(b1, b2)
        B = None
        if b2 is not None:
            B = op(a1, b2)
        if b1 is not None:
            B = op(b1, a2) if B is None else B + op(b1, a2)
        return ExactMatrix(A, B, self.den * other.den, q, diag=diag)

    def __pow__(self, k: int) -> ExactMatrix:
        if k < 0:
            raise ValueError("negative matrix power")
        out = ExactMatrix.identity(self.nrows, self.q)
        base = self
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    # -- serialization ------------------------------------------------------
    def to_json(self) -> list[list[dict[str, str]]]:
        return [[x.to_json() for x in row] for row in self.entries()]


def hstack(mats: Iterable[ExactMatrix], nrows: int | None = None, q: int | None = None) -> ExactMatrix:
    mats = list(mats)
    if not mats:
        if nrows is None or q is None:
            raise ValueError("hstack of nothing needs nrows and q")
        return ExactMatrix.zeros(nrows, 0, q)
    q = mats[0].q
    den = math.lcm(*(m.den for m in mats))
    A = np.concatenate([m.A * (den // m.den) for m in mats], axis=1)
    if all(m.B is None for m in mats):
        B = None
    else:
        B = np.concatenate([m._b() * (den // m.den) for m in mats], axis=1)
    return ExactMatrix(A, B, den, q)


def embed_rows(m: ExactMatrix, n: int, offset: int) -> ExactMatrix:
    """Place ``m`` into rows ``offset..`` of an ``n``-row zero matrix."""
    A = _int_array(None, (n, m.ncols))
    A[offset:offset + m.nrows] = m.A
    B = None
    if m.B is not None:
        B = _int_array(None, (n, m.ncols))
        B[offset:offset + m.nrows] = m.B
    return ExactMatrix(A, B, m.den, m.q)


# -- elimination ----------------------------------------------------------------

def _content_reduce(A: np.ndarray, B: np.ndarray | None, rows) -> None:
    for i in rows:
        flat = A[i].tolist()
        if B is not None:
            flat += B[i].tolist()
        g = math.gcd(*flat)
        if g > 1:
            A[i] //= g
            if B is not None:
                B[i] //= g


def row_reduce(m: ExactMatrix) -> tuple[np.ndarray, np.ndarray | None, list[int]]:
    """Fraction-free Gauss-Jordan elimination over Z[sqrt(q)].

    Returns integer arrays ``(A, B)`` of the reduced form and the pivot
    columns. Each pivot row carries a positive rational-integer pivot and
    every other row is zero in that column. Pivots are taken at the lowest
    row index available, so the output is deterministic.
    """
    q = m.q
    A = m.A.copy()
    B = None if m.B is None else m.B.copy()
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = A[r:, c] != 0
        if B is not None:
            nz = nz | (B[r:, c] != 0)
        hits = np.flatnonzero(nz)
        if hits.size == 0:
            continue
        k = r + int(hits[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
            if B is not None:
                B[[r, k]] = B[[k, r]]
        if B is not None and B[r, c] != 0:
            # multiply the pivot row by the conjugate of its pivot
            pa, pb = A[r, c], B[r, c]
            ra, rb = A[r].copy(), B[r].copy()
            A[r] = ra * pa - q * pb * rb
            B[r] = rb * pa - ra * pb
        _content_reduce(A, B, [r])
        if A[r, c] < 0:
            A[r] = -A[r]
            if B is not None:
                B[r] = -B[r]
        p = A[r, c]
        others = A[:, c] != 0
        if B is not None:
            others = others | (B[:, c] != 0)
        others[r] = False
        idx = np.flatnonzero(others)
        if idx.size:
            fa = A[idx, c][:, None]
            if B is None:
                A[idx] = A[idx] * p - fa * A[r][None, :]
            else:
                fb = B[idx, c][:, None]
                newA = A[idx] * p - (fa * A[r][None, :] + q * fb * B[r][None, :])
                newB = B[idx] * p - (fa * B[r][None, :] + fb * A[r][None, :])
                A[idx] = newA
                B[idx] = newB
            _content_reduce(A, B, idx.tolist())
        pivots.append(c)
        r += 1
    return A, B, pivots


def rank(m: ExactMatrix) -> int:
    return len(row_reduce(m)[2])


def pivot_columns(m: ExactMatrix) -> list[int]:
    """Indices of the greedy lowest-index set of independent columns."""
    return row_reduce(m)[2]


def nullspace(m: ExactMatrix) -> ExactMatrix:
    """Exact kernel basis as columns, one per free column of the RREF.

    Column ``k`` has a 1 at the ``k``-th free coordinate and zeros at the
    other free coordinates.
    """
    A, B, pivots = row_reduce(m)
    n = m.ncols
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return ExactMatrix.zeros(n, 0, m.q)
    den = math.lcm(*(int(A[r, c]) for r, c in enumerate(pivots))) if pivots else 1
    KA = _int_array(None, (n, len(free)))
    KB = _int_array(None, (n, len(free))) if B is not None else None
    for k, f in enumerate(free):
        KA[f, k] = den
        for r, c in enumerate(pivots):
            s = den // A[r, c]
            KA[c, k] = -A[r, f] * s
            if KB is not None:
                KB[c, k] = -B[r, f] * s
    return ExactMatrix(KA, KB, den, m.q)


# -- polynomials over Q(sqrt(q)), coefficient lists lowest degree first ---------

def poly_mul(f: Sequence[ExactScalar], g: Sequence[ExactScalar]) -> list[ExactScalar]:
    q = (f[0] if f else g[0]).q
    out = [ExactScalar.of(0, q) for _ in range(len(f) + len(g) - 1)]
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] = out[i + j] + x * y
    return out


def poly_from_roots(roots: Sequence[ExactScalar], q: int) -> list[ExactScalar]:
    """Monic polynomial ``prod (x - root)``."""
    out = [ExactScalar.of(1, q)]
    for r in roots:
        out = poly_mul(out, [-r, ExactScalar.of(1, q)])
    return out


def tridiagonal_charpoly(sub: Sequence[Number], diag: Sequence[Number], sup: Sequence[Number],
                         q: int) -> list[ExactScalar]:
    """``det(x I - T)`` for a tridiagonal ``T`` via the three-term recurrence."""
    one = ExactScalar.of(1, q)
    prev: list[ExactScalar] = [one]
    if not diag:
        return prev
    cur = [-ExactScalar.of(diag[0], q), one]
    for k in range(1, len(diag)):
        shifted = [ExactScalar.of(0, q)] + cur
        nxt = [x - ExactScalar.of(diag[k], q) * (cur[i] if i < len(cur) else 0)
               for i, x in enumerate(shifted)]
        c = ExactScalar.of(sub[k - 1], q) * ExactScalar.of(sup[k - 1], q)
        for i, x in enumerate(prev):
            nxt[i] = nxt[i] - c * x
        prev, cur = cur, nxt
    return cur
