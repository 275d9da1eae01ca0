"""Spectrum of the q-adjacency matrix and the band structure of A* on it.

Eigenvalues are indexed by half-integers ``0, 1/2, 1, ..., N``. Each one is
either rational or a rational multiple of sqrt(q), so it lives exactly in
Q(sqrt(q)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from attenuated.exact import ExactMatrix, nullspace, poly_from_roots, rank
from attenuated.operators import matrix_A, matrix_Astar, matrix_S
from attenuated.poset import PosetInstance
from attenuated.qcomb import ExactScalar, mu, q_binomial


@dataclass(frozen=True, order=True)
class HalfIndex:
    """The half-integer ``twice / 2``."""

    twice: int

    @classmethod
    def of(cls, value: int | Fraction | str) -> HalfIndex:
        v = Fraction(value)
        if (2 * v).denominator != 1:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(2 * v))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def mirror(self, N: int) -> HalfIndex:
        """The index ``N - i``."""
        return HalfIndex(2 * N - self.twice)

    def __str__(self) -> str:
        return str(self.value)


def half_indices(N: int) -> list[HalfIndex]:
    return [HalfIndex(k) for k in range(2 * N + 1)]


def theta(i: HalfIndex, q: int, N: int, M: int) -> ExactScalar:
    """``(q**(N-i) - q**i) / (q - 1) * q**(M/2)`` in Q(sqrt(q))."""
    hi = ExactScalar.sqrt_q_power(q, 2 * N - i.twice + M)
    lo = ExactScalar.sqrt_q_power(q, i.twice + M)
    return (hi - lo) * Fraction(1, q - 1)


def eigenvalues(q: int, N: int, M: int) -> list[tuple[HalfIndex, ExactScalar]]:
    return [(i, theta(i, q, N, M)) for i in half_indices(N)]


def predicted_dims(q: int, N: int, M: int) -> list[tuple[HalfIndex, int]]:
    """Eigenspace dimensions from the alternating mu-sums.

    For ``i <= N/2`` the sum runs over ``m = 2i, 2i-2, ...`` (same parity as
    ``2i``) of ``mu_m * binom(N - m, i - m/2)``; larger ``i`` mirror ``N - i``.
    """
    out = []
    for i in half_indices(N):
        j = i if i.twice <= N else i.mirror(N)
        total = Fraction(0)
        for m in range(j.twice % 2, j.twice + 1, 2):
            total += mu(m, N, M, q) * q_binomial(N - m, (j.twice - m) // 2, q)
        out.append((i, int(total)))
    return out


@dataclass
class SpectrumEntry:
    index: HalfIndex
    theta: ExactScalar
    dim: int
    basis: ExactMatrix

    def to_json(self) -> dict[str, Any]:
        return {"index": str(self.index), "theta": self.theta.to_json(), "dim": self.dim}


@dataclass
class Spectrum:
    entries: list[SpectrumEntry]

    def dims(self) -> list[int]:
        return [e.dim for e in self.entries]

    def by_index(self) -> dict[HalfIndex, SpectrumEntry]:
        return {e.index: e for e in self.entries}

    def to_json(self) -> list[dict[str, Any]]:
        return [e.to_json() for e in self.entries]


def eigenspace_basis(p: PosetInstance, i: HalfIndex, A: ExactMatrix | None = None) -> ExactMatrix:
    """Exact kernel basis of ``A - theta_i I``."""
    if A is None:
        A = matrix_A(p)
    th = theta(i, *p.params)
    return nullspace(A - th * ExactMatrix.identity(p.size, p.q))


def spectrum(p: PosetInstance) -> Spectrum:
    A = matrix_A(p)
    entries = []
    for i, th in eigenvalues(*p.params):
        basis = eigenspace_basis(p, i, A)
        entries.append(SpectrumEntry(i, th, basis.ncols, basis))
    return Spectrum(entries)


def minimal_polynomial_residual(p: PosetInstance) -> ExactMatrix:
    """``prod_i (A - theta_i I)`` over all ``2N + 1`` eigenvalues."""
    A = matrix_A(p)
    out = ExactMatrix.identity(p.size, p.q)
    for _, th in eigenvalues(*p.params):
        out = out @ A - th * out
    return out


def _powers(A: ExactMatrix, k: int) -> list[ExactMatrix]:
    out = [ExactMatrix.identity(A.nrows, A.q)]
    for _ in range(k):
        out.append(out[-1] @ A)
    return out


def lagrange_coefficients(q: int, N: int, M: int) -> dict[HalfIndex, list[ExactScalar]]:
    """Coefficients of ``prod_{j != i} (x - theta_j) / (theta_i - theta_j)``."""
    ev = eigenvalues(q, N, M)
    out = {}
    for i, ti in ev:
        others = [tj for j, tj in ev if j != i]
        denom = ExactScalar.of(1, q)
        for tj in others:
            denom = denom * (ti - tj)
        inv = denom.inverse()
        out[i] = [c * inv for c in poly_from_roots(others, q)]
    return out


def _poly_eval(coeffs: Sequence[ExactScalar], powers: Sequence[ExactMatrix]) -> ExactMatrix:
    out = ExactMatrix.zeros(*powers[0].shape, powers[0].q)
    for c, P in zip(coeffs, powers):
        if c:
            out = out + c * P
    return out


def primitive_idempotents(p: PosetInstance) -> dict[HalfIndex, ExactMatrix]:
    """All projectors ``E_i``, evaluated as polynomials in the integer matrix A."""
    A = matrix_A(p)
    powers = _powers(A, 2 * p.N)
    return {i: _poly_eval(c, powers) for i, c in lagrange_coefficients(*p.params).items()}


def primitive_idempotent(p: PosetInstance, i: HalfIndex) -> ExactMatrix:
    return primitive_idempotents(p)[i]


@dataclass
class IdempotentReport:
    checks: dict[str, bool] = field(default_factory=dict)
    traces: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict[str, Any]:
        return {"checks": self.checks, "traces": self.traces, "pass": self.passed}


def verify_idempotents(p: PosetInstance, E: Mapping[HalfIndex, ExactMatrix] | None = None,
                       spec: Spectrum | None = None, pairwise: bool = True) -> IdempotentReport:
    """Projector identities; with ``pairwise`` every product ``E_i E_j`` is formed."""
    if E is None:
        E = primitive_idempotents(p)
    A = matrix_A(p)
    S = matrix_S(p)
    n, q = p.size, p.q
    I = ExactMatrix.identity(n, q)
    th = dict(eigenvalues(*p.params))
    dims = dict(predicted_dims(*p.params))
    rep = IdempotentReport()
    total = ExactMatrix.zeros(n, n, q)
    recon = ExactMatrix.zeros(n, n, q)
    for i, Ei in E.items():
        total = total + Ei
        recon = recon + th[i] * Ei
        rep.checks[f"A E_{i} = theta E_{i}"] = (A @ Ei - th[i] * Ei).is_zero()
        tr = Ei.trace()
        rep.traces[str(i)] = str(tr)
        rep.checks[f"trace E_{i} = dim"] = tr == dims[i]
        rep.checks[f"S E_{i} S = E_{i.mirror(p.N)}"] = (S @ Ei @ S) == E[i.mirror(p.N)]
        if spec is not None:
            basis = spec.by_index()[i].basis
            rep.checks[f"E_{i} fixes eigenspace"] = (Ei @ basis) == basis
    rep.checks["sum E_i = I"] = total == I
    rep.checks["A = sum theta_i E_i"] = recon == A
    if pairwise:
        keys = list(E)
        for a, i in enumerate(keys):
            for j in keys[a:]:
                prod = E[i] @ E[j]
                rep.checks[f"E_{i} E_{j}"] = prod == E[i] if i == j else prod.is_zero()
    return rep


def dim_bookkeeping(q: int, N: int, M: int) -> dict[str, tuple[int, int]]:
    """Eigenspace dims against sums of module multiplicities, for ``i <= N/2``.

    A module of diameter d contributes to index i exactly when
    ``i - (N - d)/2`` is a nonnegative integer.
    """
    from attenuated.tmodules import psi_set

    psi = psi_set(q, N, M)
    out = {}
    for i, dim in predicted_dims(q, N, M):
        if i.twice > N:
            continue
        s = sum(int(e.mult) for e in psi
                if i.twice - (N - e.d) >= 0 and (i.twice - (N - e.d)) % 2 == 0)
        out[str(i)] = (dim, s)
    return out


ORDERINGS = ("integers_then_halves", "halves_then_integers")


def ordering(N: int, name: str) -> list[HalfIndex]:
    ints = [HalfIndex(2 * k) for k in range(N + 1)]
    halves = [HalfIndex(2 * k + 1) for k in range(N)]
    if name == ORDERINGS[0]:
        return ints + halves
    if name == ORDERINGS[1]:
        return halves + ints
    raise ValueError(f"unknown ordering {name!r}")


@dataclass
class BandProfile:
    N: int
    nonzero: dict[tuple[HalfIndex, HalfIndex], bool]
    band_ok: bool
    tridiagonal: dict[str, bool]
    distinct_dual_eigenvalues: bool

    @property
    def passed(self) -> bool:
        return self.band_ok and all(self.tridiagonal.values()) and self.distinct_dual_eigenvalues

    def grid(self, name: str) -> list[list[int]]:
        order = ordering(self.N, name)
        return [[int(self.nonzero[(i, j)]) for j in order] for i in order]

    def to_json(self) -> dict[str, Any]:
        return {
            "band_ok": self.band_ok,
            "distinct_dual_eigenvalues": self.distinct_dual_eigenvalues,
            "orderings": {
                name: {
                    "order": [str(i) for i in ordering(self.N, name)],
                    "grid": self.grid(name),
                    "tridiagonal": self.tridiagonal[name],
                }
                for name in ORDERINGS
            },
            "pass": self.passed,
        }


def qpoly_band_profile(p: PosetInstance, spec: Spectrum | None = None) -> BandProfile:
    """Which blocks ``E_i A* E_j`` are nonzero.

    ``E_i A* E_j = 0`` iff ``E_i A* v = 0`` for v in an eigenbasis of
    ``theta_j``, and ``E_i`` is a polynomial in A, so every block comes
    from the products ``A^k A* B_j`` against the Lagrange coefficients.
    """
    if spec is None:
        spec = spectrum(p)
    A = matrix_A(p)
    As = matrix_Astar(p)
    coeffs = lagrange_coefficients(*p.params)
    idx = half_indices(p.N)
    nonzero: dict[tuple[HalfIndex, HalfIndex], bool] = {}
    for e in spec.entries:
        Z = As @ e.basis
        powers = [Z]
        for _ in range(2 * p.N):
            powers.append(A @ powers[-1])
        for i in idx:
            nonzero[(i, e.index)] = not _poly_eval(coeffs[i], powers).is_zero()

    band_ok = all(nonzero[(i, j)] == (abs(i.twice - j.twice) == 2)
                  for i in idx for j in idx if i != j)
    tri = {}
    for name in ORDERINGS:
        order = ordering(p.N, name)
        pos = {k: n for n, k in enumerate(order)}
        tri[name] = all(not nonzero[(i, j)] for i in idx for j in idx if abs(pos[i] - pos[j]) > 1)
    diag = As.diagonal()
    distinct = len({diag[p.rank_offsets[i]] for i in range(p.N + 1)}) == p.N + 1
    return BandProfile(p.N, nonzero, band_ok, tri, distinct)
