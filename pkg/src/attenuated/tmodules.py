"""Irreducible modules of the subconstituent algebra T = <A, A*>.

A module class is labelled by its endpoint ``r`` and diameter ``d``. The
standard module is split into explicit irreducible pieces, each given by a
lowest-weight vector ``w_0`` and its raising string ``w_i = R^i w_0``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from attenuated.exact import (
    ExactMatrix,
    embed_rows,
    hstack,
    nullspace,
    pivot_columns,
    poly_from_roots,
    rank,
    tridiagonal_charpoly,
)
from attenuated.operators import Operators, build_operators
from attenuated.poset import PosetInstance
from attenuated.qcomb import ExactScalar, mu, q_binomial
from attenuated.spectral import HalfIndex, theta


class DecompositionError(RuntimeError):
    pass


@dataclass(frozen=True)
class PsiEntry:
    r: int
    d: int
    mult: Fraction
    t: HalfIndex

    def to_json(self) -> dict[str, Any]:
        return {"r": self.r, "d": self.d, "mult": str(self.mult), "t": str(self.t)}


def psi_t(d: int, N: int) -> HalfIndex:
    return HalfIndex(N - d)


def in_psi(r: int, d: int, N: int, M: int) -> bool:
    return 0 <= r <= N and 0 <= d <= N and N - 2 * r <= d <= N - r and d <= N + M - 2 * r


def predicted_mult(r: int, d: int, q: int, N: int, M: int) -> Fraction:
    if r + d == N:
        return mu(r, N, M, q)
    top = 2 * N - 2 * r - d
    return mu(2 * r + d - N, N, M, q) * (q_binomial(top, N - r - d, q) - q_binomial(top, N - r - d - 1, q))


def psi_set(q: int, N: int, M: int) -> list[PsiEntry]:
    """All isomorphism classes with their predicted multiplicities, by (r, d)."""
    return [PsiEntry(r, d, predicted_mult(r, d, q, N, M), psi_t(d, N))
            for r in range(N + 1) for d in range(N + 1) if in_psi(r, d, N, M)]


@dataclass
class PsiSumReport:
    rows: list[dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.rows)

    def to_json(self) -> dict[str, Any]:
        return {"rows": self.rows, "pass": self.passed}


def verify_psisum(q: int, N: int, M: int) -> PsiSumReport:
    """Sum of ``mult(r - l, d + 2l)`` over ``0 <= l <= N - r - d`` against its closed form."""
    rep = PsiSumReport()
    for e in psi_set(q, N, M):
        chain = [(e.r - l, e.d + 2 * l) for l in range(N - e.r - e.d + 1)]
        closed = all(in_psi(r, d, N, M) for r, d in chain)
        lhs = sum((predicted_mult(r, d, q, N, M) for r, d in chain), Fraction(0))
        top = 2 * N - 2 * e.r - e.d
        rhs = mu(2 * e.r + e.d - N, N, M, q) * q_binomial(top, N - e.r - e.d, q)
        rep.rows.append({
            "r": e.r, "d": e.d, "chain_in_psi": closed,
            "lhs": str(lhs), "rhs": str(rhs), "pass": bool(closed and lhs == rhs),
        })
    return rep


def _check_i(i: int, d: int) -> None:
    if not 1 <= i <= d:
        raise ValueError(f"index {i} outside 1..{d}")


def xi(i: int, r: int, d: int, q: int, N: int, M: int) -> Fraction:
    """Coefficient of ``L`` on the raising basis: ``L w_i = xi_i w_(i-1)``."""
    _check_i(i, d)
    return Fraction(q ** (N + M - d) * (q**i - 1) * (q**d - q ** (i - 1)), (q - 1) ** 2)


def xi_prime(i: int, r: int, d: int, q: int, N: int, M: int) -> Fraction:
    """Coefficient of ``L'`` on the raising basis."""
    _check_i(i, d)
    return Fraction(q ** (N + M - r - d) * (q**i - 1) * (q ** (d + 1 - i) - 1), (q - 1) ** 2)


@dataclass
class ModuleWitness:
    r: int
    d: int
    basis: list[ExactMatrix]

    @property
    def w0(self) -> ExactMatrix:
        return self.basis[0]

    def to_json(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "d": self.d,
            "basis": [[row[0] for row in w.to_json()] for w in self.basis],
        }


def _apply_power(X: ExactMatrix, m: ExactMatrix, k: int) -> ExactMatrix:
    for _ in range(k):
        X = m @ X
    return X


def decompose(p: PosetInstance, ops: Operators | None = None) -> list[ModuleWitness]:
    """Split the standard module into irreducible T-modules.

    For each endpoint r the lowest-weight space ``K_r = ker L`` on rank r is
    filtered by ``K_r cap ker R^(d+1)``. The class-(r, d) lowest-weight
    vectors are the image of that filtration step under ``L^d R^d``: this
    operator kills the smaller-diameter part and is a nonzero scalar on the
    class-(r, d) part, so its image is exactly that isotypic piece.
    """
    if ops is None:
        ops = build_operators(p)
    q, N, M = p.params
    n = p.size
    R, L = ops.R, ops.L
    witnesses: list[ModuleWitness] = []
    observed: Counter = Counter()
    for r in range(N + 1):
        rows = p.rank_slice(r)
        if r == 0:
            K = ExactMatrix.identity(rows.stop - rows.start, q)
        else:
            K = nullspace(L.take(p.rank_slice(r - 1), rows))
        if K.ncols == 0:
            continue
        Kfull = embed_rows(K, n, rows.start)
        # strings R^j K until they vanish
        chain = [Kfull]
        while not chain[-1].is_zero():
            chain.append(R @ chain[-1])
        nested = [K.ncols - rank(Y) for Y in chain]  # dim(K cap ker R^j)
        for d in range(len(chain) - 1):
            m = nested[d + 1] - nested[d]
            if m == 0:
                continue
            if not in_psi(r, d, N, M):
                raise DecompositionError(f"module class (r={r}, d={d}) observed but not admissible")
            C = nullspace(chain[d + 1])
            P = _apply_power(_apply_power(Kfull @ C, R, d), L, d)
            picks = pivot_columns(P)
            if len(picks) != m:
                raise DecompositionError(f"(r={r}, d={d}): stratum rank {len(picks)} != {m}")
            for c in picks:
                w = P.col(c)
                basis = [w]
                for _ in range(d):
                    basis.append(R @ basis[-1])
                witnesses.append(ModuleWitness(r, d, basis))
            observed[(r, d)] = m

    for e in psi_set(q, N, M):
        if observed.get((e.r, e.d), 0) != e.mult:
            raise DecompositionError(
                f"(r={e.r}, d={e.d}): observed multiplicity {observed.get((e.r, e.d), 0)}, predicted {e.mult}")
    stacked = hstack([w for wit in witnesses for w in wit.basis], nrows=n, q=q)
    if stacked.ncols != n or rank(stacked) != n:
        raise DecompositionError(f"witness bases span {rank(stacked)} of {n} dimensions")
    return witnesses


def observed_multiplicities(witnesses: list[ModuleWitness]) -> dict[tuple[int, int], int]:
    return dict(sorted(Counter((w.r, w.d) for w in witnesses).items()))


def coordinates(basis: list[ExactMatrix], v: ExactMatrix) -> list[ExactScalar] | None:
    """Coefficients of ``v`` on a basis with disjoint supports, or None if ``v`` is outside the span."""
    q = v.q
    coeffs = []
    recon = ExactMatrix.zeros(v.nrows, 1, q)
    for w in basis:
        mask = w.nonzero_mask()[:, 0]
        k = int(mask.argmax())
        c = v[k, 0] / w[k, 0]
        coeffs.append(c)
        recon = recon + c * w
    return coeffs if recon == v else None


def action_matrix(basis: list[ExactMatrix], m: ExactMatrix) -> list[list[ExactScalar]] | None:
    """Matrix of ``m`` on the span of ``basis``; column j holds the image of ``w_j``."""
    cols = []
    for w in basis:
        c = coordinates(basis, m @ w)
        if c is None:
            return None
        cols.append(c)
    return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]


@dataclass
class ModuleReport:
    r: int
    d: int
    checks: dict[str, bool] = field(default_factory=dict)
    tridiagonal: list[list[str]] | None = None
    dual_diagonal: list[str] | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict[str, Any]:
        return {"r": self.r, "d": self.d, "checks": self.checks,
                "tridiagonal": self.tridiagonal, "dual_diagonal": self.dual_diagonal, "pass": self.passed}


def verify_module(p: PosetInstance, w: ModuleWitness, ops: Operators | None = None) -> ModuleReport:
    if ops is None:
        ops = build_operators(p)
    q, N, M = p.params
    r, d, W = w.r, w.d, w.basis
    rep = ModuleReport(r, d)
    rep.checks["w_i in E*_(r+i) V"] = all(
        not W[i].is_zero() and (ops.Estar[r + i] @ W[i]) == W[i] for i in range(d + 1))
    rep.checks["R w_i = w_(i+1)"] = all((ops.R @ W[i]) == W[i + 1] for i in range(d))
    rep.checks["R w_d = 0"] = (ops.R @ W[d]).is_zero()
    rep.checks["L w_0 = 0"] = (ops.L @ W[0]).is_zero()
    rep.checks["L w_i = xi_i w_(i-1)"] = all(
        (ops.L @ W[i]) == xi(i, r, d, q, N, M) * W[i - 1] for i in range(1, d + 1))
    rep.checks["L' w_0 = 0"] = (ops.Lprime @ W[0]).is_zero()
    rep.checks["L' w_i = xi'_i w_(i-1)"] = all(
        (ops.Lprime @ W[i]) == xi_prime(i, r, d, q, N, M) * W[i - 1] for i in range(1, d + 1))
    rep.checks["A* w_i = q^(-r-i) w_i"] = all(
        (ops.Astar @ W[i]) == Fraction(1, q ** (r + i)) * W[i] for i in range(d + 1))

    mat = action_matrix(W, ops.A)
    if mat is None:
        rep.checks["A-invariant span"] = False
        return rep
    rep.checks["A-invariant span"] = True
    rep.tridiagonal = [[str(x) for x in row] for row in mat]
    want = [[(xi(j, r, d, q, N, M) if j == i + 1 else 1 if i == j + 1 else 0) for j in range(d + 1)]
            for i in range(d + 1)]
    rep.checks["A tridiagonal (0 diag, 1 sub, xi sup)"] = all(
        mat[i][j] == want[i][j] for i in range(d + 1) for j in range(d + 1))
    dual = action_matrix(W, ops.Astar)
    rep.dual_diagonal = None if dual is None else [str(dual[i][i]) for i in range(d + 1)]

    t = psi_t(d, N)
    sub = [mat[i + 1][i] for i in range(d)]
    sup = [mat[i][i + 1] for i in range(d)]
    diag = [mat[i][i] for i in range(d + 1)]
    charpoly = tridiagonal_charpoly(sub, diag, sup, q)
    roots = [theta(HalfIndex(t.twice + 2 * i), q, N, M) for i in range(d + 1)]
    rep.checks["charpoly = prod (x - theta_(t+i))"] = charpoly == poly_from_roots(roots, q)
    return rep


@dataclass
class LeonardProfile:
    r: int
    d: int
    h: ExactScalar
    h_star: ExactScalar
    s: ExactScalar
    theta0: ExactScalar
    theta0_star: ExactScalar
    bipartite: bool
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.bipartite and all(self.checks.values())

    def to_json(self) -> dict[str, Any]:
        return {
            "r": self.r, "d": self.d,
            "h": self.h.to_json(), "h_star": self.h_star.to_json(), "s": self.s.to_json(),
            "theta0": self.theta0.to_json(), "theta0_star": self.theta0_star.to_json(),
            "bipartite": self.bipartite, "checks": self.checks, "pass": self.passed,
        }


def leonard_closed_forms(r: int, d: int, q: int, N: int, M: int) -> dict[str, ExactScalar]:
    """The six parameters; half-integral exponents are powers of sqrt(q)."""
    inv = Fraction(1, q - 1)
    tw = N - d  # 2t
    return {
        "d": ExactScalar.of(d, q),
        "h": ExactScalar.sqrt_q_power(q, 2 * d + tw + M) * inv,
        "h_star": ExactScalar.of(Fraction(1, q**r), q),
        "s": ExactScalar.of(-Fraction(1, q ** (d + 1)), q),
        "theta0": ExactScalar.sqrt_q_power(q, M + tw) * Fraction(q**d - 1, q - 1),
        "theta0_star": ExactScalar.of(Fraction(1, q**r), q),
    }


def eigenvalue_sequence(d: int, q: int, N: int, M: int) -> list[ExactScalar]:
    """``(q^(d-i) - q^i) / (q - 1) * q^(M/2 + t)`` for ``0 <= i <= d``."""
    tw = N - d
    return [(ExactScalar.sqrt_q_power(q, 2 * (d - i) + M + tw) - ExactScalar.sqrt_q_power(q, 2 * i + M + tw))
            * Fraction(1, q - 1) for i in range(d + 1)]


def leonard_profile(w: ModuleWitness, q: int, N: int, M: int, ops: Operators) -> LeonardProfile:
    r, d, W = w.r, w.d, w.basis
    cf = leonard_closed_forms(r, d, q, N, M)
    seq = eigenvalue_sequence(d, q, N, M)
    dual_seq = [ExactScalar.of(Fraction(1, q ** (r + i)), q) for i in range(d + 1)]
    t = psi_t(d, N)
    mat = action_matrix(W, ops.A)
    bipartite = mat is not None and all(mat[i][i] == 0 for i in range(d + 1))
    prof = LeonardProfile(r, d, cf["h"], cf["h_star"], cf["s"], cf["theta0"], cf["theta0_star"], bipartite)

    prof.checks["diameter"] = len(W) - 1 == d
    prof.checks["theta_i = global theta_(t+i)"] = all(
        seq[i] == theta(HalfIndex(t.twice + 2 * i), q, N, M) for i in range(d + 1))
    if mat is not None:
        sub = [mat[i + 1][i] for i in range(d)]
        sup = [mat[i][i + 1] for i in range(d)]
        diag = [mat[i][i] for i in range(d + 1)]
        prof.checks["eigenvalue sequence = spectrum on W"] = (
            tridiagonal_charpoly(sub, diag, sup, q) == poly_from_roots(seq, q)
            and len(set(seq)) == len(seq))
    else:
        prof.checks["eigenvalue sequence = spectrum on W"] = False
    prof.checks["dual sequence = A* on w_i"] = all(
        (ops.Astar @ W[i]) == dual_seq[i] * W[i] for i in range(d + 1))
    prof.checks["theta0 = first eigenvalue"] = cf["theta0"] == seq[0]
    prof.checks["theta0_star = first dual eigenvalue"] = cf["theta0_star"] == dual_seq[0]
    prof.checks["h_star = theta0_star"] = cf["h_star"] == dual_seq[0]
    # dual q-Krawtchouk parametric forms regenerate both sequences
    one = ExactScalar.of(1, q)
    prof.checks["parametric eigenvalues"] = all(
        seq[i] == cf["theta0"] + cf["h"] * (1 - q**i) * (one - cf["s"] * q ** (i + 1)) * Fraction(1, q**i)
        for i in range(d + 1))
    prof.checks["parametric dual eigenvalues"] = all(
        dual_seq[i] == cf["theta0_star"] + cf["h_star"] * (1 - q**i) * Fraction(1, q**i)
        for i in range(d + 1))
    return prof


def isomorphism_separation(p: PosetInstance, witnesses: list[ModuleWitness], ops: Operators) -> bool:
    """Equal (r, d) iff equal matrices of A and A* on the witness bases."""
    reps = {}
    for w in witnesses:
        a = action_matrix(w.basis, ops.A)
        s = action_matrix(w.basis, ops.Astar)
        key = (tuple(map(tuple, a or [])), tuple(map(tuple, s or [])))
        reps.setdefault((w.r, w.d), set()).add(key)
    if any(len(v) != 1 for v in reps.values()):
        return False
    keys = [next(iter(v)) for v in reps.values()]
    return len(set(keys)) == len(keys)
