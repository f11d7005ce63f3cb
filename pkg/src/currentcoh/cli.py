"""Command-line frontend.

Inputs are ``catalog:NAME[:PARAM...]``, a file path, or ``-`` for standard
input.  Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import comb
from typing import Any, Sequence

from . import catalog
from . import current as cu
from . import formats
from . import verify as ver
from .comm import CommAlgebra
from .lie import LieAlgebra, cohomology, cohomology_table, homology_h2, make_module

SCHEMA_VERSION = 1
MAX_LAMBDA3 = 50_000
MODULES = ("trivial", "adjoint", "coadjoint", "sym2")


class UsageError(Exception):
    """Bad input reference, wrong algebra kind, or a refused job."""


# ---------------------------------------------------------------- inputs


def resolve(ref: str) -> LieAlgebra | CommAlgebra:
    if ref.startswith("catalog:"):
        try:
            return catalog.lookup(ref[len("catalog:"):]).algebra
        except catalog.CatalogError as exc:
            raise UsageError(str(exc.args[0] if exc.args else exc)) from None
    try:
        return formats.load(ref)
    except formats.InputError as exc:
        raise UsageError(str(exc)) from None


def _verify_ref(ref: str):
    """Catalog names stay strings (so battery workers can rebuild them)."""
    if ref.startswith("catalog:"):
        name = ref[len("catalog:"):]
        try:
            catalog.lookup(name)
        except catalog.CatalogError as exc:
            raise UsageError(str(exc.args[0] if exc.args else exc)) from None
        return name
    return resolve(ref)


def _need(alg, kind, ref: str):
    if not isinstance(alg, kind):
        want = "a Lie algebra" if kind is LieAlgebra else "a commutative algebra"
        raise UsageError(f"{ref}: expected {want}")
    return alg


def _guard(dim: int, force: bool, what: str) -> None:
    size = comb(dim, 3)
    if size > MAX_LAMBDA3 and not force:
        raise UsageError(f"{what}: dim Λ³ = {size} exceeds {MAX_LAMBDA3}; pass --force to run anyway")


def _input_record(ref: str, alg) -> dict[str, Any]:
    return {"ref": ref, "name": alg.name, "dim": alg.dim, "sha256": formats.fingerprint(alg)}


# ---------------------------------------------------------------- commands


def cmd_cohomology(args) -> tuple[dict, bool]:
    lie = _need(resolve(args.input), LieAlgebra, args.input)
    _guard(lie.dim, args.force, args.input)
    mod = make_module(lie, args.module)
    if args.all:
        table = cohomology_table(lie, mod)
        results = {"module": args.module, "degrees": list(range(lie.dim + 1)), **table}
    else:
        if not 0 <= args.p:
            raise UsageError("--p must be non-negative")
        h = cohomology(lie, mod, args.p)
        results = {"module": args.module, "degree": args.p, "C": h.cochain_dim, "Z": h.cocycles.dim,
                   "B": h.coboundaries.dim, "H": h.dim}
    return {"inputs": [_input_record(args.input, lie)], "results": results}, True


def cmd_current(args) -> tuple[dict, bool]:
    A = _need(resolve(args.A), CommAlgebra, args.A)
    k = _need(resolve(args.k), LieAlgebra, args.k)
    _guard(A.dim * k.dim, args.force, f"{args.A} ⊗ {args.k}")
    cur = cu.build_current(A, k)
    wanted = [m for m in ("h2", "b2_check", "zusmanovich", "sequence") if getattr(args, m)] or ["h2"]
    results: dict[str, Any] = {"dim_g": cur.g.dim}
    ok = True
    if "h2" in wanted:
        h = cohomology(cur.g, make_module(cur.g, "trivial"), 2)
        results["h2"] = {"H2(g)": h.dim, "H_2(g)": homology_h2(cur.g).dim}
    if "b2_check" in wanted:
        rep = cu.b2_generators(cur)
        lem = cu.b2_positions(cur)
        results["b2_check"] = {"families": [f.dim for f in rep.families], "span": rep.total.dim,
                               "brute_force": rep.brute_force.dim, "equal": rep.ok,
                               "positions": {n: bool(v) for n, v in vars(lem).items()}}
        ok &= rep.ok and lem.ok
    if "zusmanovich" in wanted:
        z = cu.zusmanovich_dims(cur)
        results["zusmanovich"] = {"terms": z.terms, "predicted": z.predicted,
                                  "brute_force": z.brute_force, "match": z.ok}
        ok &= z.ok
    if "sequence" in wanted:
        r = cu.h2_sequence(cur)
        results["sequence"] = {"H2_quotient_13": r.dim_h2_quotient_13, "Lin(A,H2(k))": r.dim_lin_a_h2k,
                               "Lin-pair": r.dim_lin_pair, "H2(g)": r.dim_h2_g,
                               "identity": r.identity_ok, "phi_injective": r.phi_injective,
                               "ker_psi_eq_im_phi": r.ker_psi_is_im_phi,
                               "psi_surjective": r.psi_surjective, "exactness_ok": r.exactness_ok}
        ok &= r.exactness_ok
    inputs = [_input_record(args.A, A), _input_record(args.k, k)]
    return {"inputs": inputs, "results": results}, ok


def cmd_verify(args) -> tuple[dict, bool]:
    refs = [_verify_ref(r) for r in args.inputs]
    for r in refs:
        if not isinstance(r, str):
            _guard(r.dim, args.force, r.name)
    try:
        suites = ver.run(args.target, refs, battery=args.battery)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = {"suites": [{"target": s.target, "ok": s.ok,
                           "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                                      for c in s.checks]} for s in suites]}
    inputs = [{"ref": a, **({"sha256": formats.fingerprint(r)} if not isinstance(r, str) else {})}
              for a, r in zip(args.inputs, refs)]
    return {"inputs": inputs, "results": results}, all(s.ok for s in suites)


def cmd_catalog(args) -> tuple[dict, bool]:
    if args.action == "list":
        rows = [{"name": n, "kind": kd, "dim": d} for n, kd, d in catalog.listing()]
        return {"inputs": [], "results": {"entries": rows}}, True
    if not args.name:
        raise UsageError("catalog export needs a NAME")
    try:
        entry = catalog.lookup(args.name)
    except catalog.CatalogError as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from None
    return {"export": formats.dumps(entry.algebra)}, True


# ---------------------------------------------------------------- output


def _table(command: str, report: dict) -> str:
    lines = []
    for inp in report.get("inputs", []):
        extra = f" dim {inp['dim']}" if "dim" in inp else ""
        sha = f" sha256 {inp['sha256'][:12]}" if "sha256" in inp else ""
        lines.append(f"input {inp['ref']}{extra}{sha}")
    res = report["results"]
    if command == "cohomology":
        lines.append(f"module {res['module']}")
        if "degrees" in res:
            lines.append("p  " + " ".join(f"{p:>5}" for p in res["degrees"]))
            for row in ("C", "Z", "B", "H"):
                lines.append(f"{row}  " + " ".join(f"{v:>5}" for v in res[row]))
        else:
            lines.append(f"p={res['degree']}  C {res['C']}  Z {res['Z']}  B {res['B']}  H {res['H']}")
    elif command == "current":
        lines.append(f"dim g = {res['dim_g']}")
        if "h2" in res:
            lines.append(f"dim H²(g) = {res['h2']['H2(g)']}   dim H₂(g) = {res['h2']['H_2(g)']}")
        if "b2_check" in res:
            b = res["b2_check"]
            lines.append(f"B₂ families {b['families']} span {b['span']} brute force {b['brute_force']}"
                         f"  {'PASS' if b['equal'] else 'FAIL'}")
            for n, v in b["positions"].items():
                lines.append(f"  {n}: {'ok' if v else 'FAIL'}")
        if "zusmanovich" in res:
            z = res["zusmanovich"]
            for n, v in z["terms"].items():
                lines.append(f"  {n}: {v}")
            lines.append(f"Zusmanovich prediction {z['predicted']}, brute force {z['brute_force']}"
                         f"  {'PASS' if z['match'] else 'FAIL'}")
        if "sequence" in res:
            s = res["sequence"]
            lines.append(f"dim H²(g) = {s['H2(g)']} = {s['H2_quotient_13']} + {s['Lin(A,H2(k))']}"
                         f" + {s['Lin-pair']}  (H²(g/g')₁,₃ + Lin(A,H²(k)) + Lin-pair)")
            lines.append(f"Φ injective {s['phi_injective']}, ker Ψ = im Φ {s['ker_psi_eq_im_phi']},"
                         f" Ψ onto {s['psi_surjective']}  {'PASS' if s['exactness_ok'] else 'FAIL'}")
    elif command == "verify":
        for s in res["suites"]:
            for c in s["checks"]:
                tail = f"  ({c['detail']})" if c["detail"] else ""
                lines.append(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}{tail}")
            lines.append(f"{s['target']}: {'PASS' if s['ok'] else 'FAIL'}")
    elif command == "catalog":
        width = max(len(e["name"]) for e in res["entries"])
        for e in res["entries"]:
            lines.append(f"{e['name']:<{width}}  {e['kind']:<11}  dim {e['dim']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="currentcoh",
                                description="Second (co)homology of current algebras A⊗k in exact arithmetic.")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--force", action="store_true", help=f"run even when dim Λ³ exceeds {MAX_LAMBDA3}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", help="dims of C/Z/B/H for a Lie algebra")
    c.add_argument("input")
    c.add_argument("--module", choices=MODULES, default="trivial")
    grp = c.add_mutually_exclusive_group()
    grp.add_argument("--p", type=int, default=2)
    grp.add_argument("--all", action="store_true")

    c = sub.add_parser("current", help="reports on g = A⊗k")
    c.add_argument("A")
    c.add_argument("k")
    c.add_argument("--h2", action="store_true")
    c.add_argument("--b2-check", dest="b2_check", action="store_true")
    c.add_argument("--zusmanovich", action="store_true")
    c.add_argument("--sequence", action="store_true")

    c = sub.add_parser("verify", help="verification suites against brute-force oracles")
    c.add_argument("target", choices=ver.TARGETS + tuple(ver.ALIASES), metavar="TARGET",
                   help=", ".join(ver.TARGETS))
    c.add_argument("inputs", nargs="*")
    c.add_argument("--battery", action="store_true")

    c = sub.add_parser("catalog", help="list or export built-in algebras")
    c.add_argument("action", choices=("list", "export"))
    c.add_argument("name", nargs="?")
    return p


COMMANDS = {"cohomology": cmd_cohomology, "current": cmd_current, "verify": cmd_verify,
            "catalog": cmd_catalog}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if "export" in report:
        sys.stdout.write(report["export"])
        return 0
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": argv, **report, "ok": ok,
               "timing_s": round(time.perf_counter() - start, 3)}
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(_table(args.command, report))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
