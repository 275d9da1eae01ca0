"""Command-line front end.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage
or capacity errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from attenuated.gflinalg import DEFAULT_CAP, CapacityError, is_prime, vertex_count
from attenuated.operators import build_operators, verify_relations
from attenuated.poset import PosetInstance, build_poset, verify_counting
from attenuated.qcomb import ExactScalar
from attenuated.spectral import (
    ORDERINGS,
    dim_bookkeeping,
    eigenvalues,
    minimal_polynomial_residual,
    predicted_dims,
    primitive_idempotents,
    qpoly_band_profile,
    spectrum,
    verify_idempotents,
)
from attenuated.tmodules import (
    DecompositionError,
    action_matrix,
    decompose,
    isomorphism_separation,
    leonard_profile,
    observed_multiplicities,
    psi_set,
    verify_module,
    verify_psisum,
)

DEFAULT_INSTANCES = [(2, 1, 1), (2, 2, 1), (2, 1, 2), (2, 2, 2), (3, 2, 1), (2, 3, 2), (3, 2, 2)]
COMMANDS = ("build", "verify", "spectrum", "decompose", "report")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    q: int | None = None
    N: int | None = None
    M: int | None = None
    out: Path | None = None
    format: str = "json"
    cap: int = DEFAULT_CAP
    all: bool = False
    timings: bool = False
    path: Path | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command == "report" or self.all:
            return
        if self.q is None or self.N is None or self.M is None:
            raise UsageError("--q, --N and --M are required")
        check_params(self.q, self.N, self.M, self.cap)


def check_params(q: int, N: int, M: int, cap: int) -> None:
    if not is_prime(q):
        raise UsageError("q must be prime")
    if N < 1 or M < 1:
        raise UsageError("N and M must be >= 1")
    size = vertex_count(q, N, M)
    if size > cap:
        raise CapacityError(size, cap)


def _params(p: PosetInstance) -> dict[str, int]:
    return {"q": p.q, "N": p.N, "M": p.M, "vertices": p.size}


class _Suite:
    def __init__(self, timings: bool) -> None:
        self.sections: list[dict[str, Any]] = []
        self.timings = timings

    def run(self, name: str, fn: Callable[[], tuple[bool, dict[str, Any]]]) -> None:
        t0 = time.perf_counter()
        try:
            ok, details = fn()
        except DecompositionError as exc:
            ok, details = False, {"error": str(exc)}
        sec: dict[str, Any] = {"name": name, "pass": bool(ok), "details": details}
        if self.timings:
            sec["seconds"] = round(time.perf_counter() - t0, 3)
        self.sections.append(sec)


def spectrum_section(p: PosetInstance, spec=None) -> tuple[bool, dict[str, Any]]:
    spec = spec or spectrum(p)
    predicted = dict(predicted_dims(*p.params))
    records = []
    for e in spec.entries:
        records.append({"index": str(e.index), "theta": e.theta.to_json(),
                        "dim": e.dim, "predicted_dim": predicted[e.index]})
    dims_ok = all(r["dim"] == r["predicted_dim"] for r in records) and sum(spec.dims()) == p.size
    thetas = [t for _, t in eigenvalues(*p.params)]
    distinct = len(set(thetas)) == len(thetas)
    antisym = all(thetas[k] == -thetas[-1 - k] for k in range(len(thetas)))
    minpoly = minimal_polynomial_residual(p).is_zero()
    idem = verify_idempotents(p, primitive_idempotents(p), spec)
    book = dim_bookkeeping(*p.params)
    book_ok = all(a == b for a, b in book.values())
    ok = dims_ok and distinct and antisym and minpoly and idem.passed and book_ok
    return ok, {
        "eigenvalues": records,
        "distinct": distinct,
        "antisymmetric": antisym,
        "minimal_polynomial_zero": minpoly,
        "idempotents": idem.to_json(),
        "module_bookkeeping": {k: {"dim": a, "module_sum": b} for k, (a, b) in book.items()},
    }


def decomposition_section(p: PosetInstance, ops, witnesses) -> tuple[bool, dict[str, Any]]:
    observed = observed_multiplicities(witnesses)
    psi = psi_set(*p.params)
    reports = [verify_module(p, w, ops) for w in witnesses]
    failed = [f"(r={r.r}, d={r.d}) #{k}" for k, r in enumerate(reports) if not r.passed]
    samples = {}
    for w, rep in zip(witnesses, reports):
        samples.setdefault(f"{w.r},{w.d}", rep.to_json())
    iso = isomorphism_separation(p, witnesses, ops)
    psi_rows = [{"r": e.r, "d": e.d, "t": str(e.t), "predicted": int(e.mult),
                 "observed": observed.get((e.r, e.d), 0)} for e in psi]
    mults_ok = all(r["predicted"] == r["observed"] for r in psi_rows) and len(observed) == len(psi)
    completeness = sum(int(e.mult) * (e.d + 1) for e in psi) == p.size
    ok = not failed and iso and mults_ok and completeness and any(e.r == 0 and e.d == p.N for e in psi)
    return ok, {
        "psi": psi_rows,
        "modules": len(witnesses),
        "failed_modules": failed,
        "isomorphism_separation": iso,
        "completeness": completeness,
        "samples": samples,
    }


def leonard_section(p: PosetInstance, ops, witnesses) -> tuple[bool, dict[str, Any]]:
    profiles = [leonard_profile(w, *p.params, ops) for w in witnesses]
    failed = [f"(r={lp.r}, d={lp.d}) #{k}" for k, lp in enumerate(profiles) if not lp.passed]
    samples = {}
    for lp in profiles:
        samples.setdefault(f"{lp.r},{lp.d}", lp.to_json())
    return not failed, {"profiles": len(profiles), "failed": failed,
                        "all_bipartite": all(lp.bipartite for lp in profiles), "samples": samples}


def run_suite(q: int, N: int, M: int, cap: int = DEFAULT_CAP, timings: bool = False) -> dict[str, Any]:
    """Every verification section, in a fixed order, as a JSON-ready dict."""
    p = build_poset(q, N, M, cap=cap)
    ops = build_operators(p)
    suite = _Suite(timings)
    suite.run("counting", lambda: (lambda r: (r.passed, r.to_json()))(verify_counting(p)))
    suite.run("relations", lambda: (lambda r: (r.passed, r.to_json()))(verify_relations(ops)))
    spec = spectrum(p)
    suite.run("spectrum", lambda: spectrum_section(p, spec))
    suite.run("band_profile", lambda: (lambda b: (b.passed, b.to_json()))(qpoly_band_profile(p, spec)))
    holder: dict[str, Any] = {}

    def _decomp():
        holder["w"] = decompose(p, ops)
        return decomposition_section(p, ops, holder["w"])

    suite.run("decomposition", _decomp)
    suite.run("psisum", lambda: (lambda r: (r.passed, r.to_json()))(verify_psisum(q, N, M)))
    if "w" in holder:
        suite.run("leonard", lambda: leonard_section(p, ops, holder["w"]))
    else:
        suite.run("leonard", lambda: (False, {"error": "decomposition failed"}))
    return {
        "params": _params(p),
        "sections": suite.sections,
        "pass": all(s["pass"] for s in suite.sections),
    }


def spectrum_doc(q: int, N: int, M: int, cap: int = DEFAULT_CAP) -> dict[str, Any]:
    p = build_poset(q, N, M, cap=cap)
    spec = spectrum(p)
    predicted = dict(predicted_dims(q, N, M))
    band = qpoly_band_profile(p, spec)
    records = [{"index": str(e.index), "theta": e.theta.to_json(), "dim": e.dim} for e in spec.entries]
    ok = band.passed and all(e.dim == predicted[e.index] for e in spec.entries)
    return {
        "params": _params(p),
        "eigenvalues": records,
        "band_profile": {name: {"order": band.to_json()["orderings"][name]["order"],
                                "grid": band.grid(name),
                                "tridiagonal": band.tridiagonal[name]} for name in ORDERINGS},
        "pass": ok,
    }


def decompose_doc(q: int, N: int, M: int, cap: int = DEFAULT_CAP) -> dict[str, Any]:
    p = build_poset(q, N, M, cap=cap)
    ops = build_operators(p)
    witnesses = decompose(p, ops)
    observed = observed_multiplicities(witnesses)
    classes = []
    for e in psi_set(q, N, M):
        w = next(w for w in witnesses if (w.r, w.d) == (e.r, e.d))
        mat = action_matrix(w.basis, ops.A)
        lp = leonard_profile(w, q, N, M, ops)
        classes.append({
            "r": e.r, "d": e.d,
            "predicted": int(e.mult), "observed": observed.get((e.r, e.d), 0),
            "tridiagonal": [[x.to_json() for x in row] for row in mat],
            "leonard": lp.to_json(),
        })
    ok = bool(classes) and all(c["predicted"] == c["observed"] and c["leonard"]["pass"] for c in classes)
    return {"params": _params(p), "psi": classes, "pass": ok}


# -- rendering -------------------------------------------------------------------

def _is_exact(x: Any) -> bool:
    return isinstance(x, dict) and set(x) == {"a", "b"}


def _render(doc: Any, q: int | None, prefix: str, out: list[str]) -> None:
    if _is_exact(doc) and q is not None:
        out.append(f"{prefix} = {ExactScalar(Fraction(doc['a']), Fraction(doc['b']), q)}")
    elif isinstance(doc, dict):
        if "params" in doc and isinstance(doc["params"], dict):
            q = doc["params"].get("q", q)
        for k, v in doc.items():
            _render(v, q, f"{prefix}.{k}" if prefix else str(k), out)
    elif isinstance(doc, list):
        if not doc:
            out.append(f"{prefix} = []")
        for k, v in enumerate(doc):
            name = v.get("name") if isinstance(v, dict) and "name" in v else str(k)
            _render(v, q, f"{prefix}[{name}]", out)
    else:
        out.append(f"{prefix} = {json.dumps(doc)}")


def render_table(doc: dict[str, Any]) -> str:
    """One ``path = value`` line per leaf; exact pairs print as ``a + b*sqrt(q)``."""
    out: list[str] = []
    _render(doc, None, "", out)
    return "\n".join(out) + "\n"


def _emit(doc: dict[str, Any], cfg: RunConfig) -> None:
    text = render_table(doc) if cfg.format == "table" else json.dumps(doc, indent=2) + "\n"
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)


def _instances(cfg: RunConfig) -> list[tuple[int, int, int]]:
    if cfg.all:
        for params in DEFAULT_INSTANCES:
            check_params(*params, cfg.cap)
        return DEFAULT_INSTANCES
    return [(cfg.q, cfg.N, cfg.M)]  # type: ignore[list-item]


def cmd_verify(cfg: RunConfig) -> int:
    runs = [run_suite(*params, cap=cfg.cap, timings=cfg.timings) for params in _instances(cfg)]
    doc = runs[0] if not cfg.all else {"runs": runs, "pass": all(r["pass"] for r in runs)}
    _emit(doc, cfg)
    for r in runs:
        if not r["pass"]:
            first = next(s["name"] for s in r["sections"] if not s["pass"])
            print(f"FAIL {r['params']}: section {first}", file=sys.stderr)
            return 1
    return 0


def cmd_build(cfg: RunConfig) -> int:
    docs = [build_poset(*params, cap=cfg.cap).to_json() for params in _instances(cfg)]
    _emit(docs[0] if not cfg.all else {"instances": docs}, cfg)
    return 0


def _cmd_doc(fn: Callable[..., dict[str, Any]], cfg: RunConfig) -> int:
    docs = [fn(*params, cap=cfg.cap) for params in _instances(cfg)]
    doc = docs[0] if not cfg.all else {"runs": docs, "pass": all(d["pass"] for d in docs)}
    _emit(doc, cfg)
    return 0 if doc["pass"] else 1


def cmd_spectrum(cfg: RunConfig) -> int:
    return _cmd_doc(spectrum_doc, cfg)


def cmd_decompose(cfg: RunConfig) -> int:
    return _cmd_doc(decompose_doc, cfg)


def cmd_report(cfg: RunConfig) -> int:
    if cfg.path is None:
        raise UsageError("report needs a saved JSON document")
    doc = json.loads(Path(cfg.path).read_text())
    _emit(doc, cfg)
    return 0 if doc.get("pass", False) else 1


HANDLERS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "decompose": cmd_decompose,
    "report": cmd_report,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int)
    common.add_argument("--N", type=int)
    common.add_argument("--M", type=int)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum number of vertices")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", type=Path)
    common.add_argument("--all", action="store_true", help="run every default instance")
    common.add_argument("--timings", action="store_true", help="add per-section wall time (breaks byte stability)")

    parser = argparse.ArgumentParser(prog="attenuated", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("build", "verify", "spectrum", "decompose"):
        sub.add_parser(name, parents=[common])
    rep = sub.add_parser("report", parents=[common], help="render a saved JSON document")
    rep.add_argument("path", type=Path)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command, q=args.q, N=args.N, M=args.M, out=args.out,
        format=args.format, cap=args.cap, all=args.all, timings=args.timings,
        path=getattr(args, "path", None),
    )
    try:
        cfg.validate()
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
