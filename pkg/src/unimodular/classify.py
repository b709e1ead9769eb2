"""Binary-case decision procedures.

Three independent routes to the same verdict:

* Structural: peel ghosts, cones and Lawrence liftings until a nucleus
  (a simplex, two disjoint simplices, or D_{m,n}) is reached.
* Minors: search every minor for a member of the forbidden catalog.
* Matrix: run the exact circuit oracle on the design matrix.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .catalog import SPORADIC, NamedComplex, disjoint_simplices, dmn, standard_complex
from .complex import (
    SimplicialComplex,
    alexander_dual,
    canonical_form,
    cone,
    add_ghosts,
    cone_vertices,
    delete,
    enumerate_minors,
    find_isomorphism,
    ghost_vertices,
    lawrence,
    link,
    minor,
    popcount,
    relabel,
    to_vertices,
)
from .matrix import design_matrix
from .oracle import (
    NO_WITNESS,
    CircuitWitness,
    OracleCapExceeded,
    is_unimodular_exact,
    is_unimodular_randomized,
)

STRUCTURAL = "Structural"
MINORS = "Minors"
MATRIX = "Matrix"
ALL = "All"
METHODS = (STRUCTURAL, MINORS, MATRIX, ALL)

DEFAULT_SEED = 0


class ClassificationError(RuntimeError):
    pass


class ConsistencyError(ClassificationError):
    """Two procedures that must agree did not."""


class UndecidedError(ClassificationError):
    """No procedure could settle the question within its limits."""


# -- 1-skeleton --------------------------------------------------------------

COMPLETE_GRAPH = "CompleteGraph"
TWO_CLIQUES_GLUED = "TwoCliquesGlued"
ITERATED_CONE_OVER_C4 = "IteratedConeOverC4"
OTHER = "Other"


def skeleton_class(C: SimplicialComplex) -> str:
    """Shape of the graph of edges on the non-ghost vertices.

    Judged through the complement graph: no edges means complete; one complete
    bipartite component (plus isolated vertices) means two cliques sharing a
    clique; two single-edge components means an iterated cone over a 4-cycle.
    """
    used = 0
    for f in C.masks:
        used |= f
    verts = to_vertices(used)
    faces = C.face_masks
    missing = [
        (a, b) for a, b in itertools.combinations(verts, 2)
        if (1 << (a - 1)) | (1 << (b - 1)) not in faces
    ]
    if not missing:
        return COMPLETE_GRAPH
    adj: dict[int, set[int]] = {}
    for a, b in missing:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    comps = []
    seen: set[int] = set()
    for v in adj:
        if v in seen:
            continue
        stack, comp = [v], set()
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        comps.append(comp)
    if len(comps) == 1 and _complete_bipartite(comps[0], adj):
        return TWO_CLIQUES_GLUED
    if len(comps) == 2 and all(len(c) == 2 for c in comps):
        return ITERATED_CONE_OVER_C4
    return OTHER


def _complete_bipartite(comp: set[int], adj: dict[int, set[int]]) -> bool:
    start = min(comp)
    side = {start: 0}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in side:
                side[y] = 1 - side[x]
                stack.append(y)
            elif side[y] == side[x]:
                return False
    left = [v for v in comp if side[v] == 0]
    right = [v for v in comp if side[v] == 1]
    return all(adj[v] == set(right) for v in left)


# -- forbidden minors ----------------------------------------------------------

@dataclass(frozen=True)
class ForbiddenMinorWitness:
    """minor(C, R, S) is isomorphic to ``kind``; ``map`` sends the surviving
    original vertices to the catalog complex's vertices."""

    R: tuple[int, ...]
    S: tuple[int, ...]
    kind: NamedComplex
    map: dict[int, int]

    def check(self, C: SimplicialComplex) -> bool:
        M = minor(C, self.R, self.S)
        keep = [v for v in range(1, C.n + 1) if v not in self.R and v not in self.S]
        if sorted(self.map) != keep:
            return False
        local = {i + 1: self.map[v] for i, v in enumerate(keep)}
        return relabel(M, local) == standard_complex(self.kind)

    def to_json(self) -> dict:
        return {
            "type": "ForbiddenMinor",
            "R": list(self.R),
            "S": list(self.S),
            "kind": str(self.kind),
            "map": {str(k): v for k, v in sorted(self.map.items())},
        }


def _sporadic_table() -> dict:
    table = {}
    for kind in SPORADIC:
        C = standard_complex(kind)
        table[canonical_form(C)] = (NamedComplex(kind), C)
    return table


_SPORADIC = _sporadic_table()
_SPORADIC_SHAPES = {(C.n, len(C.masks)) for _, C in _SPORADIC.values()}


def _boundary_plus_vertex(M: SimplicialComplex) -> tuple[NamedComplex, dict[int, int]] | None:
    """Match the boundary of a k-simplex plus one isolated vertex, without ghosts.

    Returns the catalog kind and a vertex map onto the standard labeling.
    """
    n = M.n
    k = n - 2
    if k < 1 or len(M.masks) != k + 2:
        return None
    if ghost_vertices(M):
        return None
    singles = [f for f in M.masks if popcount(f) == 1]
    for iso in singles:
        rest = M.ground_mask & ~iso
        others = [f for f in M.masks if f != iso]
        if all(popcount(f) == k and f & rest == f for f in others):
            # the k+1 facets of size k are distinct subsets of a (k+1)-set: the whole boundary
            v = to_vertices(iso)[0]
            order = [u for u in range(1, n + 1) if u != v]
            mapping = {u: i + 1 for i, u in enumerate(order)}
            mapping[v] = n
            return NamedComplex("BoundarySimplexPlusVertex", (k,)), mapping
    return None


def match_catalog(M: SimplicialComplex) -> tuple[NamedComplex, dict[int, int]] | None:
    """Identify M with a forbidden catalog complex, returning the kind and a vertex map."""
    hit = _boundary_plus_vertex(M)
    if hit is not None:
        return hit
    if (M.n, len(M.masks)) not in _SPORADIC_SHAPES:
        return None
    entry = _SPORADIC.get(canonical_form(M))
    if entry is None:
        return None
    kind, target = entry
    return kind, find_isomorphism(M, target)


def find_forbidden_minor(C: SimplicialComplex) -> ForbiddenMinorWitness | None:
    """First catalog minor in the order |S|, then |R|, then lexicographic."""
    for R, S, M in enumerate_minors(C):
        hit = match_catalog(M)
        if hit is None:
            continue
        kind, local = hit
        keep = [v for v in range(1, C.n + 1) if v not in R and v not in S]
        return ForbiddenMinorWitness(R, S, kind, {v: local[i + 1] for i, v in enumerate(keep)})
    return None


# -- nuclear recognition -------------------------------------------------------

STRIP_GHOST = "StripGhost"
STRIP_CONE = "StripCone"
PEEL_LAWRENCE = "PeelLawrence"


@dataclass(frozen=True)
class Step:
    op: str
    vertex: int  # original label
    labels: tuple[int, ...]  # original labels of the complex the step was applied to

    def to_json(self) -> dict:
        return {"op": self.op, "vertex": self.vertex}


@dataclass(frozen=True)
class NuclearDecomposition:
    """Peel steps from the input down to the nucleus, in original labels.

    ``nucleus_labels[i]`` is the original label of vertex i+1 of the standard
    nucleus complex; for two-part nuclei the first part M comes first.
    """

    n: int
    steps: tuple[Step, ...]
    nucleus: NamedComplex
    nucleus_labels: tuple[int, ...]

    @property
    def parts(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        if self.nucleus.kind not in ("DisjointSimplices", "Dmn"):
            return None
        m = self.nucleus.params[0] + 1
        return tuple(sorted(self.nucleus_labels[:m])), tuple(sorted(self.nucleus_labels[m:]))

    def replay(self) -> SimplicialComplex:
        """Rebuild the input exactly from the nucleus by cone, ghost and Lawrence moves."""
        C = standard_complex(self.nucleus)
        labels = list(self.nucleus_labels)
        for step in reversed(self.steps):
            if step.op == STRIP_GHOST:
                C = add_ghosts(C)
            elif step.op == STRIP_CONE:
                C = cone(C)
            else:
                C = lawrence(C)
            labels.append(step.vertex)
        return relabel(C, {i + 1: v for i, v in enumerate(labels)})

    def to_json(self) -> dict:
        out = {
            "type": "NuclearDecomposition",
            "steps": [s.to_json() for s in self.steps],
            "nucleus": {"kind": self.nucleus.kind, "params": list(self.nucleus.params)},
        }
        parts = self.parts
        if parts is not None:
            out["nucleus"]["M"], out["nucleus"]["N"] = list(parts[0]), list(parts[1])
        else:
            out["nucleus"]["vertices"] = list(self.nucleus_labels)
        return out


@dataclass
class _Peel:
    steps: list[Step]
    residual: SimplicialComplex
    labels: tuple[int, ...]
    nucleus: NamedComplex | None = None
    nucleus_labels: tuple[int, ...] = ()


def _nucleus(C: SimplicialComplex, labels: tuple[int, ...]) -> tuple[NamedComplex, tuple[int, ...]] | None:
    """Recognize a cone-free, ghost-free nucleus; ``labels`` are original labels."""
    if len(C.masks) == 2 and C.masks[0] & C.masks[1] == 0 and C.masks[0] | C.masks[1] == C.ground_mask:
        return _two_parts("DisjointSimplices", C.masks, labels, disjoint_simplices, C)
    dual = alexander_dual(C)
    if len(dual.masks) == 2 and dual.masks[0] & dual.masks[1] == 0 and dual.masks[0] | dual.masks[1] == C.ground_mask:
        if all(popcount(f) >= 2 for f in dual.masks):
            return _two_parts("Dmn", dual.masks, labels, dmn, C)
    return None


def _two_parts(kind, masks, labels, build, C):
    a, b = sorted(masks, key=to_vertices)
    M, N = to_vertices(a), to_vertices(b)
    params = (len(M) - 1, len(N) - 1)
    order = M + N
    std = build(*params)
    # vertex i+1 of the standard complex sits at current vertex order[i]
    if relabel(std, {i + 1: order[i] for i in range(len(order))}) != C:
        return None
    return NamedComplex(kind, params), tuple(labels[v - 1] for v in order)


def _peel(C: SimplicialComplex) -> _Peel:
    steps: list[Step] = []
    labels = tuple(range(1, C.n + 1))
    while True:
        ghosts = ghost_vertices(C)
        if ghosts and not C.is_void:
            for v in ghosts:
                steps.append(Step(STRIP_GHOST, labels[v - 1], labels))
            C, labels = delete(C, ghosts), tuple(x for i, x in enumerate(labels, 1) if i not in ghosts)
        if C.is_void:
            if C.n:
                for v in range(1, C.n + 1):
                    steps.append(Step(STRIP_GHOST, labels[v - 1], labels))
            return _Peel(steps, C, (), NamedComplex("Simplex", (-2,)), ())
        if len(C.masks) == 1 and C.masks[0] == C.ground_mask:
            return _Peel(steps, C, labels, NamedComplex("Simplex", (C.n - 1,)), labels)
        cones = cone_vertices(C)
        if cones:
            for v in cones:
                steps.append(Step(STRIP_CONE, labels[v - 1], labels))
            C, labels = link(C, cones), tuple(x for i, x in enumerate(labels, 1) if i not in cones)
            continue
        found = _nucleus(C, labels)
        if found is not None:
            return _Peel(steps, C, labels, found[0], found[1])
        big = sorted(to_vertices(f) for f in C.masks if popcount(f) == C.n - 1)
        if not big:
            return _Peel(steps, C, labels)
        v = next(u for u in range(1, C.n + 1) if u not in big[0])
        steps.append(Step(PEEL_LAWRENCE, labels[v - 1], labels))
        C, labels = link(C, [v]), tuple(x for i, x in enumerate(labels, 1) if i != v)


def recognize_nuclear(C: SimplicialComplex) -> NuclearDecomposition | None:
    """Greedy peel: ghosts, simplex test, cones, two-part nuclei, then Lawrence."""
    p = _peel(C)
    if p.nucleus is None:
        return None
    return NuclearDecomposition(C.n, tuple(p.steps), p.nucleus, p.nucleus_labels)


def stall_point(C: SimplicialComplex) -> tuple[tuple[int, ...], tuple[int, ...], SimplicialComplex] | None:
    """Where the greedy peel gets stuck, as (R, S, residual) with residual = minor(C, R, S).

    Ghost strips are deletions; cone strips and Lawrence peels are links.
    """
    p = _peel(C)
    if p.nucleus is not None:
        return None
    R = tuple(sorted(s.vertex for s in p.steps if s.op != STRIP_GHOST))
    S = tuple(sorted(s.vertex for s in p.steps if s.op == STRIP_GHOST))
    return R, S, p.residual


# -- top-level verdict ---------------------------------------------------------

@dataclass
class BinaryVerdict:
    unimodular: bool
    certificate: NuclearDecomposition | ForbiddenMinorWitness | CircuitWitness | None
    method: str
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"unimodular": self.unimodular, "method": self.method}
        if self.certificate is not None:
            cert = self.certificate.to_json()
            if isinstance(self.certificate, CircuitWitness):
                cert["type"] = "Circuit"
            out["certificate"] = cert
        out.update({k: v for k, v in self.extra.items() if k != "verdicts"})
        return out


def _structural(C: SimplicialComplex) -> BinaryVerdict:
    dec = recognize_nuclear(C)
    if dec is not None:
        return BinaryVerdict(True, dec, STRUCTURAL)
    R0, S0, residual = stall_point(C)
    w = find_forbidden_minor(residual)
    if w is None:
        raise ConsistencyError(
            f"greedy peel stalled on {residual!r} (from {C!r}) but no forbidden minor exists there"
        )
    # lift the residual's labels back to C
    keep = [v for v in range(1, C.n + 1) if v not in R0 and v not in S0]
    lift = {i + 1: v for i, v in enumerate(keep)}
    R = tuple(sorted(R0 + tuple(lift[v] for v in w.R)))
    S = tuple(sorted(S0 + tuple(lift[v] for v in w.S)))
    cert = ForbiddenMinorWitness(R, S, w.kind, {lift[v]: t for v, t in w.map.items()})
    return BinaryVerdict(False, cert, STRUCTURAL, {"stalled_on": residual.facets})


def _minors(C: SimplicialComplex) -> BinaryVerdict:
    w = find_forbidden_minor(C)
    if w is None:
        return BinaryVerdict(True, None, MINORS)
    return BinaryVerdict(False, w, MINORS)


def _matrix(C: SimplicialComplex, seed: int | None, cap: int | None, trials: int) -> BinaryVerdict:
    A = design_matrix(C)
    try:
        rep = is_unimodular_exact(A) if cap is None else is_unimodular_exact(A, cap=cap)
    except OracleCapExceeded:
        s = DEFAULT_SEED if seed is None else seed
        rep = is_unimodular_randomized(A, s, trials)
        if rep.verdict == NO_WITNESS:
            dec = recognize_nuclear(C)
            if dec is None:
                raise UndecidedError(f"randomized oracle found no witness for {C!r} and the complex is not nuclear")
            return BinaryVerdict(True, dec, MATRIX,
                                 {"oracle": "randomized", "seed": s, "trials": rep.trials,
                                  "confirmed_by": STRUCTURAL})
        return BinaryVerdict(False, rep.witness, MATRIX, {"oracle": "randomized", "seed": s, "trials": rep.trials})
    if rep.unimodular:
        return BinaryVerdict(True, None, MATRIX, {"oracle": "exhaustive"})
    return BinaryVerdict(False, rep.witness, MATRIX, {"oracle": "exhaustive"})


def classify_binary(C: SimplicialComplex, method: str = STRUCTURAL, seed: int | None = None,
                    cap: int | None = None, trials: int = 10_000) -> BinaryVerdict:
    """Decide unimodularity of A_C for binary levels.

    ``All`` runs every method and raises ConsistencyError on disagreement.
    """
    method = _method_name(method)
    if method == STRUCTURAL:
        return _structural(C)
    if method == MINORS:
        return _minors(C)
    if method == MATRIX:
        return _matrix(C, seed, cap, trials)
    verdicts = {STRUCTURAL: _structural(C), MINORS: _minors(C), MATRIX: _matrix(C, seed, cap, trials)}
    answers = {k: v.unimodular for k, v in verdicts.items()}
    if len(set(answers.values())) != 1:
        dump = {k: v.to_json() for k, v in verdicts.items()}
        raise ConsistencyError(f"methods disagree on {C!r}: {dump}")
    main = verdicts[STRUCTURAL]
    return BinaryVerdict(main.unimodular, main.certificate, ALL,
                         {"agreeing": sorted(answers), "verdicts": verdicts})


def _method_name(method: str) -> str:
    for m in METHODS:
        if method.lower() == m.lower():
            return m
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")

