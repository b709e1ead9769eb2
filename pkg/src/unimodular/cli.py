"""Command line interface.

Exit codes: 0 unimodular (or success), 1 not unimodular (or failed
verification), 2 error or Unknown.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import census as census_mod
from .catalog import KINDS, SPORADIC, NamedComplex, forbidden_catalog, standard_complex
from .classify import METHODS, ClassificationError, classify_binary
from .complex import ComplexError, DomainError, add_ghosts, alexander_dual, cone, delete, lawrence, link
from .io import complex_to_json, dumps_complex, load_complex
from .matrix import design_matrix, kernel_spanning_set
from .nonbinary import DEFAULT_MAX_COLUMNS, UNKNOWN, bad_pairs_catalog, classify_d
from .oracle import DEFAULT_SUBSET_CAP, OracleCapExceeded

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _method(text: str) -> str:
    for m in METHODS:
        if text.lower() == m.lower():
            return m
    raise argparse.ArgumentTypeError(f"unknown method {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unimodular", description="Unimodularity of hierarchical-model design matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="binary verdict with certificate")
    c.add_argument("file")
    c.add_argument("--method", type=_method, default="Structural", help="structural|minors|matrix|all")
    c.add_argument("--seed", type=int, default=None, help="seed for the randomized oracle fallback")
    c.add_argument("--cap", type=_positive, default=None, help="oracle work cap")
    c.add_argument("--trials", type=_positive, default=10_000)
    c.add_argument("--json", action="store_true")

    c = sub.add_parser("check-d", help="verdict for the level vector in the file's 'd' field")
    c.add_argument("file")
    c.add_argument("--d", type=_int_list, default=None, help="override the levels, e.g. 3,2,5,5")
    c.add_argument("--max-columns", type=int, default=DEFAULT_MAX_COLUMNS, help="largest matrix given to the oracle")
    c.add_argument("--cap", type=_positive, default=DEFAULT_SUBSET_CAP, help="oracle work cap")
    c.add_argument("--json", action="store_true")

    for name, text in [("dual", "Alexander dual"), ("lawrence", "Lawrence lifting")]:
        c = sub.add_parser(name, help=text)
        c.add_argument("file")
    c = sub.add_parser("link", help="link of a face")
    c.add_argument("file")
    c.add_argument("--face", type=_int_list, required=True)
    c = sub.add_parser("delete", help="delete vertices (induced subcomplex on the rest)")
    c.add_argument("file")
    c.add_argument("--vertices", type=_int_list, required=True)
    for name in ("cone", "ghost"):
        c = sub.add_parser(name, help=f"add {name} vertices")
        c.add_argument("file")
        c.add_argument("--count", type=int, default=1)

    c = sub.add_parser("matrix", help="print the design matrix")
    c.add_argument("file")
    c.add_argument("--d", type=_int_list, default=None)
    c.add_argument("--format", choices=("dense", "csv"), default="dense")
    c = sub.add_parser("kernel", help="print the signed spanning set of the binary kernel")
    c.add_argument("file")
    c.add_argument("--format", choices=("dense", "csv"), default="dense")

    c = sub.add_parser("census", help="enumerate complexes; with --verify cross-check the methods")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--verify", action="store_true")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--sample", type=int, default=census_mod.DEFAULT_SAMPLE)
    c.add_argument("--methods", default="structural,minors,matrix")
    c.add_argument("--up-to-iso", action="store_true")
    c.add_argument("--json", action="store_true")

    c = sub.add_parser("catalog", help="list named complexes and bad pairs")
    c.add_argument("--json", action="store_true")
    return p


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2) if getattr(args, "json", False) else text)


def _cmd_check(args) -> int:
    C, _ = load_complex(args.file)
    v = classify_binary(C, args.method, seed=args.seed, cap=args.cap, trials=args.trials)
    payload = {"complex": complex_to_json(C), **v.to_json()}
    text = f"{'unimodular' if v.unimodular else 'not unimodular'} ({v.method})"
    if v.certificate is not None:
        text += "\n" + json.dumps(payload["certificate"])
    _emit(args, payload, text)
    return EXIT_YES if v.unimodular else EXIT_NO


def _cmd_check_d(args) -> int:
    C, d = load_complex(args.file)
    if args.d is not None:
        d = tuple(args.d)
    v = classify_d(C, d, max_columns=args.max_columns, oracle_cap=args.cap)
    payload = {"complex": complex_to_json(C, d), **v.to_json()}
    lines = [v.verdict] + [f"  {r.name} [{r.anchor}] {r.detail}" for r in v.justification]
    if v.certificate is not None:
        lines.append(json.dumps(payload["certificate"]))
    _emit(args, payload, "\n".join(lines))
    if v.verdict == UNKNOWN:
        return EXIT_ERROR
    return EXIT_YES if v.unimodular else EXIT_NO


def _transform(args) -> int:
    C, _ = load_complex(args.file)
    ops = {
        "dual": lambda: alexander_dual(C),
        "lawrence": lambda: lawrence(C),
        "link": lambda: link(C, args.face),
        "delete": lambda: delete(C, args.vertices),
        "cone": lambda: cone(C, args.count),
        "ghost": lambda: add_ghosts(C, args.count),
    }
    print(dumps_complex(ops[args.command]()))
    return EXIT_YES


def _cmd_matrix(args) -> int:
    C, d = load_complex(args.file)
    if args.d is not None:
        d = tuple(args.d)
    A = design_matrix(C, d)
    print(A.to_csv().rstrip("\n") if args.format == "csv" else A.to_dense_text())
    return EXIT_YES


def _cmd_kernel(args) -> int:
    C, _ = load_complex(args.file)
    K = kernel_spanning_set(C)
    print(K.to_csv().rstrip("\n") if args.format == "csv" else K.to_dense_text())
    return EXIT_YES


def _cmd_census(args) -> int:
    if not args.verify:
        count = sum(1 for _ in census_mod.enumerate_complexes(args.n, args.up_to_iso))
        kind = "isomorphism classes" if args.up_to_iso else "labeled complexes"
        _emit(args, {"n": args.n, "up_to_iso": args.up_to_iso, "count": count}, f"{count} {kind} on {args.n} vertices")
        return EXIT_YES
    methods = [_method(m.strip()) for m in args.methods.split(",") if m.strip()]
    report = census_mod.verify_theorem(args.n, methods, args.seed, args.sample)
    _emit(args, report.to_json(), report.summary())
    return EXIT_YES if report.ok else EXIT_NO


def _catalog_entries() -> list[dict]:
    named = [NamedComplex(k) for k in SPORADIC] + [NamedComplex("Cycle4")]
    named += [NamedComplex("Simplex", (2,)), NamedComplex("DisjointSimplices", (1, 1)), NamedComplex("Dmn", (1, 1))]
    named += [nc for nc, _ in forbidden_catalog() if nc.kind == "BoundarySimplexPlusVertex"]
    out = []
    for nc in named:
        C = standard_complex(nc)
        out.append({"name": str(nc), "n": C.n, "facets": [list(f) for f in C.facets]})
    return out


def _cmd_catalog(args) -> int:
    entries = _catalog_entries()
    pairs = [{"item": b.item, "name": b.kind, "n": b.n, "facets": [list(f) for f in b.facets], "d": list(b.pattern)}
             for b in bad_pairs_catalog()]
    lines = [f"{e['name']:<32} n={e['n']}  " + " ".join("".join(map(str, f)) or "{}" for f in e["facets"]) for e in entries]
    lines.append("bad level pairs:")
    lines += [f"  {p['item']}. {p['name']:<40} " + " ".join("".join(map(str, f)) for f in p["facets"])
              + f"  d={tuple(p['d'])}" for p in pairs]
    lines.append("kinds: " + ", ".join(KINDS))
    _emit(args, {"complexes": entries, "bad_pairs": pairs}, "\n".join(lines))
    return EXIT_YES


_COMMANDS = {
    "check": _cmd_check,
    "check-d": _cmd_check_d,
    "matrix": _cmd_matrix,
    "kernel": _cmd_kernel,
    "census": _cmd_census,
    "catalog": _cmd_catalog,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    handler = _COMMANDS.get(args.command, _transform)
    try:
        return handler(args)
    except OracleCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ComplexError, DomainError, ClassificationError, census_mod.CensusSizeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
