"""Independent reference implementations used as test oracles.

Nothing here imports the package's own linear algebra or search code; the
point is to cross-check it against plain brute force, sympy and networkx.
"""
from __future__ import annotations

import itertools
from math import gcd
from pathlib import Path

import networkx as nx
import pytest
import sympy

from unimodular.complex import from_facets


def brute_faces(n, facets):
    """All faces (as frozensets) of the complex generated by ``facets``."""
    out = set()
    for f in facets:
        f = tuple(f)
        for k in range(len(f) + 1):
            out.update(frozenset(c) for c in itertools.combinations(f, k))
    return out


def brute_complex_from_faces(n, face_set):
    maximal = [f for f in face_set if not any(f < g for g in face_set)]
    return from_facets(n, [sorted(f) for f in maximal])


def brute_dual(n, facets):
    ground = frozenset(range(1, n + 1))
    faces = brute_faces(n, facets)
    dual_faces = set()
    for k in range(n + 1):
        for S in itertools.combinations(range(1, n + 1), k):
            S = frozenset(S)
            if ground - S not in faces:
                dual_faces.add(S)
    return brute_complex_from_faces(n, dual_faces)


def brute_antichain_count(n):
    """Number of antichains in the subset lattice of an n-set, by direct check."""
    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    count = 0
    for bits in range(1 << len(subsets)):
        chosen = [s for i, s in enumerate(subsets) if bits >> i & 1]
        if all(not (a < b or b < a) for a, b in itertools.combinations(chosen, 2)):
            count += 1
    return count


def _incidence_graph(C):
    G = nx.Graph()
    for v in range(1, C.n + 1):
        G.add_node(("v", v), kind="v")
    for i, f in enumerate(C.facets):
        G.add_node(("f", i), kind="f")
        for v in f:
            G.add_edge(("v", v), ("f", i))
    return G


def nx_isomorphic(C1, C2):
    if C1.n != C2.n or len(C1.facets) != len(C2.facets):
        return False
    return nx.is_isomorphic(_incidence_graph(C1), _incidence_graph(C2), node_match=lambda a, b: a["kind"] == b["kind"])


def sym_rank(rows):
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


def brute_circuits(rows, ncols):
    """Circuits by support-minimal kernel vectors: smallest supports first."""
    A = sympy.Matrix(rows) if rows else sympy.zeros(0, ncols)
    found = []
    for k in range(1, ncols + 1):
        for supp in itertools.combinations(range(ncols), k):
            if any(set(s) <= set(supp) for s, _ in found):
                continue
            sub = A[:, list(supp)] if rows else sympy.zeros(0, k)
            ns = sub.nullspace() if rows else [sympy.eye(k)[:, i] for i in range(k)]
            if len(ns) != 1:
                continue
            v = ns[0]
            if any(x == 0 for x in v):
                continue
            den = sympy.ilcm(1, *[sympy.fraction(x)[1] for x in v])
            ints = [int(x * den) for x in v]
            g = 0
            for x in ints:
                g = gcd(g, x)
            ints = [x // g for x in ints]
            if ints[0] < 0:
                ints = [-x for x in ints]
            full = [0] * ncols
            for j, x in zip(supp, ints):
                full[j] = x
            found.append((supp, tuple(full)))
    return found


def brute_unimodular(rows, ncols):
    return all(abs(x) <= 1 for _, v in brute_circuits(rows, ncols) for x in v)


def all_complexes_brute(n):
    """Every labeled complex on [n], enumerated from antichains by brute force."""
    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(1, n + 1), k)]
    for bits in range(1 << len(subsets)):
        chosen = [s for i, s in enumerate(subsets) if bits >> i & 1]
        if all(not (a < b or b < a) for a, b in itertools.combinations(chosen, 2)):
            yield from_facets(n, [sorted(s) for s in chosen])


GOLDEN_MATRIX = [
    [1, 1, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 1, 1],
    [1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1],
]


@pytest.fixture
def tmp_complex(tmp_path: Path):
    def write(n, facets, d=None, name="c.json"):
        import json

        body = {"n": n, "facets": [list(f) for f in facets]}
        if d is not None:
            body["d"] = list(d)
        p = tmp_path / name
        p.write_text(json.dumps(body))
        return str(p)

    return write


# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
