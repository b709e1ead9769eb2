"""Named complexes: simplices, disjoint simplices, D_{m,n} and the forbidden minors."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complex import (
    ComplexError,
    SimplicialComplex,
    alexander_dual,
    from_facets,
    void,
)

KINDS = (
    "Simplex",
    "DisjointSimplices",
    "Dmn",
    "P4",
    "O6",
    "O6star",
    "J1",
    "J1star",
    "J2",
    "BoundarySimplexPlusVertex",
    "Cycle4",
)

_ARITY = {"Simplex": 1, "DisjointSimplices": 2, "Dmn": 2, "BoundarySimplexPlusVertex": 1}

# sporadic forbidden minors, in the order they are tried
SPORADIC = ("P4", "O6", "O6star", "J1", "J1star", "J2")


@dataclass(frozen=True)
class NamedComplex:
    kind: str
    params: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        return f"{self.kind}({','.join(map(str, self.params))})"


def simplex(k: int) -> SimplicialComplex:
    """Delta_k on k+1 vertices; Delta_{-1} is {emptyset} and Delta_{-2} is void, both on 0 vertices."""
    if k < -2:
        raise ComplexError(f"Simplex needs k >= -2, got {k}")
    if k == -2:
        return void(0)
    return from_facets(k + 1, [range(1, k + 2)])


def disjoint_simplices(m: int, n: int) -> SimplicialComplex:
    if m < 0 or n < 0:
        raise ComplexError("DisjointSimplices needs m, n >= 0")
    M = range(1, m + 2)
    N = range(m + 2, m + n + 3)
    return from_facets(m + n + 2, [M, N])


def dmn(m: int, n: int) -> SimplicialComplex:
    """D_{m,n}: M = 1..m+1, N = m+2..m+n+2; facets omit one vertex of each part."""
    if m < 0 or n < 0:
        raise ComplexError("Dmn needs m, n >= 0")
    M = list(range(1, m + 2))
    N = list(range(m + 2, m + n + 3))
    ground = set(M) | set(N)
    return from_facets(m + n + 2, [ground - {a, b} for a in M for b in N])


def octahedron() -> SimplicialComplex:
    # antipodal pairs (1,4), (2,5), (3,6)
    return from_facets(6, [set(t) for t in itertools.product((1, 4), (2, 5), (3, 6))])


def boundary_plus_vertex(k: int) -> SimplicialComplex:
    """The boundary of Delta_k on 1..k+1 plus the isolated vertex k+2."""
    if k < 1:
        raise ComplexError(f"BoundarySimplexPlusVertex needs k >= 1, got {k}")
    bd = [set(c) for c in itertools.combinations(range(1, k + 2), k)]
    return from_facets(k + 2, bd + [{k + 2}])


J1_FACETS = [(1, 2), (1, 5), (2, 3, 4), (3, 4, 5)]
J1STAR_FACETS = [(1, 3, 4), (2, 3, 5), (2, 4, 5)]
J2_FACETS = [(1, 2), (2, 3, 5), (3, 4), (1, 4, 5)]


def standard_complex(kind: str | NamedComplex, *params: int) -> SimplicialComplex:
    if isinstance(kind, NamedComplex):
        kind, params = kind.kind, kind.params
    if kind not in KINDS:
        raise ComplexError(f"unknown complex kind {kind!r}")
    if len(params) != _ARITY.get(kind, 0):
        raise ComplexError(f"{kind} takes {_ARITY.get(kind, 0)} parameter(s), got {len(params)}")
    if kind == "Simplex":
        return simplex(*params)
    if kind == "DisjointSimplices":
        return disjoint_simplices(*params)
    if kind == "Dmn":
        return dmn(*params)
    if kind == "BoundarySimplexPlusVertex":
        return boundary_plus_vertex(*params)
    if kind == "P4":
        return from_facets(4, [(1, 2), (2, 3), (3, 4)])
    if kind == "Cycle4":
        return from_facets(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
    if kind == "O6":
        return octahedron()
    if kind == "O6star":
        return alexander_dual(octahedron())
    if kind == "J1":
        return from_facets(5, J1_FACETS)
    if kind == "J1star":
        return from_facets(5, J1STAR_FACETS)
    return from_facets(5, J2_FACETS)


def forbidden_catalog(max_boundary: int = 3) -> list[tuple[NamedComplex, SimplicialComplex]]:
    """The sporadic forbidden minors plus the boundary family up to ``max_boundary``."""
    out = [(NamedComplex(k), standard_complex(k)) for k in SPORADIC]
    out += [
        (NamedComplex("BoundarySimplexPlusVertex", (k,)), boundary_plus_vertex(k))
        for k in range(1, max_boundary + 1)
    ]
    return out
