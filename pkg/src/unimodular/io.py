"""Complex files: {"n": int, "facets": [[int, ...], ...], "d": [int, ...]?}."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .complex import ComplexError, SimplicialComplex, from_facets


def parse_complex(data: dict) -> tuple[SimplicialComplex, tuple[int, ...] | None]:
    if not isinstance(data, dict):
        raise ComplexError("complex file must hold a JSON object")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ComplexError(f"'n' must be a non-negative integer, got {n!r}")
    facets = data.get("facets")
    if not isinstance(facets, list):
        raise ComplexError("'facets' must be a list of vertex lists")
    for f in facets:
        if not isinstance(f, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in f):
            raise ComplexError(f"facet {f!r} is not a list of integers")
        bad = [v for v in f if not 1 <= v <= n]
        if bad:
            raise ComplexError(f"facet {f} has vertex {bad[0]} outside 1..{n}")
    d = data.get("d")
    if d is not None:
        if not isinstance(d, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in d):
            raise ComplexError(f"'d' must be a list of integers, got {d!r}")
        if len(d) != n:
            raise ComplexError(f"'d' has {len(d)} entries for {n} vertices")
        if any(x < 2 for x in d):
            raise ComplexError(f"every level in 'd' must be >= 2, got {d}")
        d = tuple(d)
    return from_facets(n, facets), d


def load_complex(path: str | Path) -> tuple[SimplicialComplex, tuple[int, ...] | None]:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"{path}: not valid JSON ({exc})") from None
    return parse_complex(data)


def complex_to_json(C: SimplicialComplex, d: Sequence[int] | None = None) -> dict:
    out = {"n": C.n, "facets": [list(f) for f in C.facets]}
    if d is not None:
        out["d"] = list(d)
    return out


def dumps_complex(C: SimplicialComplex, d: Sequence[int] | None = None) -> str:
    return json.dumps(complex_to_json(C, d))
