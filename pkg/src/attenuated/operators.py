"""The matrices E*_i, A*, S, R, L', L and A, and their exact identities.

Matrices are indexed by the vertex order of a :class:`PosetInstance`. The
standard module is the column space; the basis vector of a vertex is the
unit column at its index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from attenuated.exact import ExactMatrix
from attenuated.poset import PosetInstance


def _zeros(p: PosetInstance) -> np.ndarray:
    a = np.empty((p.size, p.size), dtype=object)
    a.fill(0)
    return a


def matrix_Estar(p: PosetInstance, i: int) -> ExactMatrix:
    """Diagonal projector onto the rank-``i`` subconstituent."""
    if not 0 <= i <= p.N:
        raise ValueError(f"subconstituent index {i} outside 0..{p.N}")
    a = _zeros(p)
    for y in range(p.rank_offsets[i], p.rank_offsets[i + 1]):
        a[y, y] = 1
    return ExactMatrix(a, None, 1, p.q, diag=True)


def matrix_Astar(p: PosetInstance) -> ExactMatrix:
    """Diagonal matrix with entry ``q**(-dim y)``."""
    a = _zeros(p)
    top = p.q**p.N
    for y, v in enumerate(p.vertices):
        a[y, y] = p.q ** (p.N - v.dim)
    return ExactMatrix(a, None, top, p.q, diag=True)


def matrix_S(p: PosetInstance) -> ExactMatrix:
    a = _zeros(p)
    for y, v in enumerate(p.vertices):
        a[y, y] = -1 if v.dim % 2 else 1
    return ExactMatrix(a, None, 1, p.q, diag=True)


def matrix_R(p: PosetInstance) -> ExactMatrix:
    """Raising matrix: entry (y, z) is 1 when y covers z."""
    a = _zeros(p)
    for z, y in p.edges():
        a[y, z] = 1
    return ExactMatrix(a, None, 1, p.q)


def matrix_Lprime(p: PosetInstance) -> ExactMatrix:
    """Lowering matrix: entry (y, z) is 1 when z covers y."""
    a = _zeros(p)
    for y, z in p.edges():
        a[y, z] = 1
    return ExactMatrix(a, None, 1, p.q)


def matrix_L(p: PosetInstance) -> ExactMatrix:
    """q-lowering matrix: entry (y, z) is ``q**dim y`` when z covers y."""
    a = _zeros(p)
    for y, z in p.edges():
        a[y, z] = p.q ** p.rank(y)
    return ExactMatrix(a, None, 1, p.q)


def matrix_A(p: PosetInstance) -> ExactMatrix:
    """q-adjacency matrix ``R + L``."""
    a = _zeros(p)
    for y, z in p.edges():
        a[z, y] = 1
        a[y, z] = p.q ** p.rank(y)
    return ExactMatrix(a, None, 1, p.q)


@dataclass
class Operators:
    poset: PosetInstance
    Estar: list[ExactMatrix]
    Astar: ExactMatrix
    S: ExactMatrix
    R: ExactMatrix
    Lprime: ExactMatrix
    L: ExactMatrix
    A: ExactMatrix

    @property
    def I(self) -> ExactMatrix:  # noqa: E743
        return ExactMatrix.identity(self.poset.size, self.poset.q)


def build_operators(p: PosetInstance) -> Operators:
    return Operators(
        poset=p,
        Estar=[matrix_Estar(p, i) for i in range(p.N + 1)],
        Astar=matrix_Astar(p),
        S=matrix_S(p),
        R=matrix_R(p),
        Lprime=matrix_Lprime(p),
        L=matrix_L(p),
        A=matrix_A(p),
    )


@dataclass
class RelationCheck:
    name: str
    locator: str
    degree: int
    residual_nonzeros: int

    @property
    def passed(self) -> bool:
        return self.residual_nonzeros == 0

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "locator": self.locator,
            "degree": self.degree,
            "residual_nonzeros": self.residual_nonzeros,
            "pass": self.passed,
        }


@dataclass
class RelationReport:
    rows: list[RelationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failed(self) -> list[str]:
        return [r.name for r in self.rows if not r.passed]

    def to_json(self) -> dict[str, Any]:
        return {"identities": [r.to_json() for r in self.rows], "pass": self.passed}


def _sum(mats: list[ExactMatrix], n: int, q: int) -> ExactMatrix:
    out = ExactMatrix.zeros(n, n, q)
    for m in mats:
        out = out + m
    return out


def verify_relations(ops: Operators | PosetInstance) -> RelationReport:
    """Evaluate every identity as a residual and require it to be exactly zero.

    Accepts a prebuilt :class:`Operators` bundle so callers can inject faults.
    """
    if isinstance(ops, PosetInstance):
        ops = build_operators(ops)
    p = ops.poset
    q, N, M, n = p.q, p.N, p.M, p.size
    Es, As, S, R, Lp, L, A = ops.Estar, ops.Astar, ops.S, ops.R, ops.Lprime, ops.L, ops.A
    I = ops.I
    Z = ExactMatrix.zeros(n, n, q)
    qi = Fraction(1, q)
    beta = q + qi
    qNM = q ** (N + M)

    report = RelationReport()

    def check(name: str, locator: str, degree: int, residual: Callable[[], ExactMatrix]) -> None:
        report.rows.append(RelationCheck(name, locator, degree, residual().nonzero_count()))

    check("R_Astar_commutation", "R A* = q A* R", 2, lambda: R @ As - q * (As @ R))
    check("Lprime_Astar_commutation", "L' A* = q^-1 A* L'", 2, lambda: Lp @ As - qi * (As @ Lp))

    Lp2 = Lp @ Lp
    R2 = R @ R
    check("Lprime_cubic_1",
          "L'^2 R - (q+1) L' R L' + q R L'^2 = -(q+1) q^(N+M) L' A*", 3,
          lambda: Lp2 @ R - (q + 1) * (Lp @ R @ Lp) + q * (R @ Lp2) + ((q + 1) * qNM) * (Lp @ As))
    check("Lprime_cubic_2",
          "L' R^2 - (q+1) R L' R + q R^2 L' = -(q+1) q^(N+M) A* R", 3,
          lambda: Lp @ R2 - (q + 1) * (R @ Lp @ R) + q * (R2 @ Lp) + ((q + 1) * qNM) * (As @ R))

    check("L_Astar_commutation", "L A* = q^-1 A* L", 2, lambda: L @ As - qi * (As @ L))
    L2 = L @ L
    check("down_up_1", "L^2 R - q(q+1) L R L + q^3 R L^2 = -q^(N+M) (q+1) L", 3,
          lambda: L2 @ R - (q * (q + 1)) * (L @ R @ L) + q**3 * (R @ L2) + (qNM * (q + 1)) * L)
    check("down_up_2", "L R^2 - q(q+1) R L R + q^3 R^2 L = -q^(N+M) (q+1) R", 3,
          lambda: L @ R2 - (q * (q + 1)) * (R @ L @ R) + q**3 * (R2 @ L) + (qNM * (q + 1)) * R)

    A2 = A @ A
    A3 = A2 @ A
    AsA = As @ A
    check("tridiagonal_A",
          "A^3 A* - (b+1) A^2 A* A + (b+1) A A* A^2 - A* A^3 = q^(N+M-2) (q+1)^2 (A A* - A* A), b = q + 1/q",
          4,
          lambda: A3 @ As - (beta + 1) * (A2 @ AsA) + (beta + 1) * (A @ (As @ A2)) - As @ A3
          - (Fraction(qNM, q**2) * (q + 1) ** 2) * (A @ As - AsA))
    As2 = As @ As
    check("tridiagonal_Astar_quadratic", "A*^2 A - b A* A A* + A A*^2 = 0", 3,
          lambda: As2 @ A - beta * (AsA @ As) + A @ As2)
    As3 = As2 @ As
    check("tridiagonal_Astar",
          "A*^3 A - (b+1) A*^2 A A* + (b+1) A* A A*^2 - A A*^3 = 0", 4,
          lambda: As3 @ A - (beta + 1) * (As2 @ A @ As) + (beta + 1) * (AsA @ As2) - A @ As3)

    check("S_involution", "S^2 = I", 2, lambda: S @ S - I)
    check("S_Astar_commute", "S A* = A* S", 2, lambda: S @ As - As @ S)
    check("S_R_anticommute", "S R = -R S", 2, lambda: S @ R + R @ S)
    check("S_Lprime_anticommute", "S L' = -L' S", 2, lambda: S @ Lp + Lp @ S)
    check("S_L_anticommute", "S L = -L S", 2, lambda: S @ L + L @ S)
    check("S_A_anticommute", "S A = -A S", 2, lambda: S @ A + A @ S)

    check("Lprime_factor", "L' = A* L", 2, lambda: Lp - As @ L)
    check("A_split", "A = R + L", 1, lambda: A - R - L)
    check("Lprime_transpose", "L' = R^t", 1, lambda: Lp - R.T)

    def idempotents() -> ExactMatrix:
        bad = Z
        for i in range(N + 1):
            for j in range(N + 1):
                target = Es[i] if i == j else Z
                bad = bad + _abs_pattern(Es[i] @ Es[j] - target)
        return bad

    check("Estar_orthogonal_idempotents", "E*_i E*_j = delta_ij E*_i", 2, idempotents)
    check("Estar_resolution", "sum_i E*_i = I", 1, lambda: _sum(Es, n, q) - I)
    check("Astar_spectral", "A* = sum_i q^-i E*_i", 1,
          lambda: As - _sum([Fraction(1, q**i) * Es[i] for i in range(N + 1)], n, q))

    check("R_nilpotent", "R^(N+1) = 0", N + 1, lambda: R ** (N + 1))
    check("L_nilpotent", "L^(N+1) = 0", N + 1, lambda: L ** (N + 1))
    check("Lprime_nilpotent", "L'^(N+1) = 0", N + 1, lambda: Lp ** (N + 1))

    check("R_from_A", "R = sum_i E*_(i+1) A E*_i", 3,
          lambda: R - _sum([Es[i + 1] @ A @ Es[i] for i in range(N)], n, q))
    check("L_from_A", "L = sum_i E*_(i-1) A E*_i", 3,
          lambda: L - _sum([Es[i - 1] @ A @ Es[i] for i in range(1, N + 1)], n, q))
    check("A_block_tridiagonal", "E*_j A E*_i = 0 for |i-j| != 1", 3,
          lambda: _sum([_abs_pattern(Es[j] @ A @ Es[i])
                        for i in range(N + 1) for j in range(N + 1) if abs(i - j) != 1], n, q))
    return report


def _abs_pattern(m: ExactMatrix) -> ExactMatrix:
    """0/1 matrix marking the nonzero entries, so residuals never cancel."""
    a = np.vectorize(int, otypes=[object])(m.nonzero_mask()) if m.A.size else m.A
    return ExactMatrix(a, None, 1, m.q)
