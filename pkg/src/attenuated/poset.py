"""The attenuated space poset: vertices, ranks and the cover relation."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any

from attenuated.gflinalg import DEFAULT_CAP, GFMatrix, Vertex, covers, enumerate_vertices, rref
from attenuated.qcomb import q_binomial, q_int


@dataclass(frozen=True)
class PosetInstance:
    q: int
    N: int
    M: int
    vertices: tuple[Vertex, ...]
    rank_offsets: tuple[int, ...]
    covers_up: tuple[tuple[int, ...], ...]
    covers_down: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def params(self) -> tuple[int, int, int]:
        return self.q, self.N, self.M

    def rank(self, idx: int) -> int:
        return self.vertices[idx].dim

    def rank_slice(self, i: int) -> slice:
        """Index range of the rank-``i`` block (empty outside ``0..N``)."""
        if i < 0 or i > self.N:
            return slice(0, 0)
        return slice(self.rank_offsets[i], self.rank_offsets[i + 1])

    def rank_sizes(self) -> list[int]:
        return [self.rank_offsets[i + 1] - self.rank_offsets[i] for i in range(self.N + 1)]

    def edges(self):
        """Cover edges as ``(lower, upper)`` index pairs."""
        for y, ups in enumerate(self.covers_up):
            for z in ups:
                yield y, z

    def to_json(self) -> dict[str, Any]:
        return {
            "params": {"q": self.q, "N": self.N, "M": self.M},
            "vertices": [
                {"dim": v.dim, "U": [list(r) for r in v.U.entries], "T": [list(r) for r in v.T.entries]}
                for v in self.vertices
            ],
            "rank_offsets": list(self.rank_offsets),
            "covers_up": [list(c) for c in self.covers_up],
            "covers_down": [list(c) for c in self.covers_down],
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> PosetInstance:
        q, N, M = doc["params"]["q"], doc["params"]["N"], doc["params"]["M"]
        verts = tuple(
            Vertex(
                v["dim"],
                GFMatrix.from_rows(v["U"], q, N),
                GFMatrix.from_rows(v["T"], q, M),
            )
            for v in doc["vertices"]
        )
        return cls(
            q, N, M, verts,
            tuple(doc["rank_offsets"]),
            tuple(tuple(c) for c in doc["covers_up"]),
            tuple(tuple(c) for c in doc["covers_down"]),
        )


def build_poset(q: int, N: int, M: int, cap: int = DEFAULT_CAP) -> PosetInstance:
    verts = enumerate_vertices(q, N, M, cap=cap)
    offsets = [0] * (N + 2)
    for v in verts:
        offsets[v.dim + 1] += 1
    for i in range(1, N + 2):
        offsets[i] += offsets[i - 1]

    up: list[list[int]] = [[] for _ in verts]
    down: list[list[int]] = [[] for _ in verts]
    for i in range(N):
        lower = range(offsets[i], offsets[i + 1])
        for zi in range(offsets[i + 1], offsets[i + 2]):
            z = verts[zi]
            for yi in lower:
                if covers(z, verts[yi]):
                    up[yi].append(zi)
                    down[zi].append(yi)
    return PosetInstance(
        q, N, M, tuple(verts), tuple(offsets),
        tuple(map(tuple, up)), tuple(map(tuple, down)),
    )


@dataclass
class CountingReport:
    params: tuple[int, int, int]
    ranks: list[dict[str, Any]] = field(default_factory=list)
    failures: list[dict[str, Any]] = field(default_factory=list)
    connected: bool = True
    graded: bool = True
    transposed: bool = True

    @property
    def passed(self) -> bool:
        return not self.failures and self.connected and self.graded and self.transposed

    def to_json(self) -> dict[str, Any]:
        return {
            "ranks": self.ranks,
            "failures": self.failures,
            "connected": self.connected,
            "graded": self.graded,
            "transposed": self.transposed,
            "pass": self.passed,
        }


def _connected(p: PosetInstance) -> bool:
    if p.size == 0:
        return True
    seen = {0}
    todo = deque([0])
    while todo:
        y = todo.popleft()
        for z in p.covers_up[y] + p.covers_down[y]:
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return len(seen) == p.size


def verify_counting(p: PosetInstance) -> CountingReport:
    """Compare block sizes and cover degrees against the closed forms.

    Failures are recorded per vertex rather than raised.
    """
    q, N, M = p.params
    rep = CountingReport(p.params)
    sizes = p.rank_sizes()
    for i in range(N + 1):
        want_size = int(q ** (M * i) * q_binomial(N, i, q))
        want_down = int(q_int(i, q))
        want_up = int(q**M * q_int(N - i, q))
        sl = p.rank_slice(i)
        downs = sorted({len(p.covers_down[y]) for y in range(sl.start, sl.stop)})
        ups = sorted({len(p.covers_up[y]) for y in range(sl.start, sl.stop)})
        rep.ranks.append({
            "rank": i,
            "size": {"expected": want_size, "actual": sizes[i]},
            "down_degree": {"expected": want_down, "actual": downs},
            "up_degree": {"expected": want_up, "actual": ups},
        })
        if sizes[i] != want_size:
            rep.failures.append({"rank": i, "kind": "size", "expected": want_size, "actual": sizes[i]})
        for y in range(sl.start, sl.stop):
            if len(p.covers_down[y]) != want_down:
                rep.failures.append({"vertex": y, "kind": "down_degree",
                                     "expected": want_down, "actual": len(p.covers_down[y])})
            if len(p.covers_up[y]) != want_up:
                rep.failures.append({"vertex": y, "kind": "up_degree",
                                     "expected": want_up, "actual": len(p.covers_up[y])})

    rep.graded = all(p.rank(z) == p.rank(y) + 1 for y, z in p.edges())
    up_pairs = set(p.edges())
    down_pairs = {(y, z) for z, ys in enumerate(p.covers_down) for y in ys}
    rep.transposed = up_pairs == down_pairs
    rep.connected = _connected(p)
    return rep


def same_subspace(y: Vertex, z: Vertex) -> bool:
    """Row-space equality, independent of the canonical form."""
    if y.dim != z.dim or y.params != z.params:
        return False
    return rref(y.block().vstack(z.block()))[2] == y.dim
