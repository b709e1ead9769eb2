"""Partial classification for arbitrary level vectors d.

Sound rules are tried in a fixed order; when none applies and the design
matrix is too large for the oracle, the answer is Unknown.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

from .classify import (
    PEEL_LAWRENCE,
    ConsistencyError,
    ForbiddenMinorWitness,
    NuclearDecomposition,
    classify_binary,
    recognize_nuclear,
)
from .complex import (
    ComplexError,
    SimplicialComplex,
    cone_vertices,
    delete,
    enumerate_minors,
    from_facets,
    ghost_vertices,
    isomorphisms,
    link,
    minor,
    popcount,
    relabel,
    to_vertices,
)
from .matrix import check_levels, design_matrix
from .oracle import DEFAULT_SUBSET_CAP, CircuitWitness, OracleCapExceeded, is_unimodular_exact

UNIMODULAR = "Unimodular"
NON_UNIMODULAR = "NonUnimodular"
UNKNOWN = "Unknown"

# largest design matrix (in columns) handed to the oracle by default
DEFAULT_MAX_COLUMNS = 512


# -- bad pairs -----------------------------------------------------------------

@dataclass(frozen=True)
class BadPair:
    """A complex with minimum levels that already make the design matrix non-unimodular."""

    item: int
    kind: str
    n: int
    facets: tuple[tuple[int, ...], ...]
    pattern: tuple[int, ...]

    @property
    def complex(self) -> SimplicialComplex:
        return from_facets(self.n, self.facets)


_BAD_PAIRS = (
    BadPair(1, "Lawrence(DisjointSimplices(0,0))", 3, ((1, 2), (2, 3), (1, 3)), (3, 3, 3)),
    BadPair(2, "Dmn(1,1)", 4, ((1, 2), (2, 3), (3, 4), (1, 4)), (2, 2, 2, 3)),
    BadPair(3, "Lawrence(Ghost(DisjointSimplices(0,0)))", 4, ((1, 2), (1, 3), (2, 3, 4)), (4, 2, 2, 2)),
    BadPair(4, "Lawrence(Dmn(1,1))", 5, ((1, 2, 3, 4), (1, 2, 5), (2, 3, 5), (3, 4, 5), (1, 4, 5)), (2, 2, 2, 2, 3)),
)


def bad_pairs_catalog() -> list[BadPair]:
    return list(_BAD_PAIRS)


@dataclass(frozen=True)
class BadPairWitness:
    """minor(C, R, S) maps onto a bad pair by ``map`` with levels at least its pattern."""

    R: tuple[int, ...]
    S: tuple[int, ...]
    item: int
    map: dict[int, int]
    levels: dict[int, int]

    def check(self, C: SimplicialComplex, d: Sequence[int]) -> bool:
        pair = _BAD_PAIRS[self.item - 1]
        keep = [v for v in range(1, C.n + 1) if v not in self.R and v not in self.S]
        if sorted(self.map) != keep:
            return False
        local = {i + 1: self.map[v] for i, v in enumerate(keep)}
        if relabel(minor(C, self.R, self.S), local) != pair.complex:
            return False
        return all(d[v - 1] >= pair.pattern[t - 1] for v, t in self.map.items())

    def to_json(self) -> dict:
        return {
            "type": "BadPair",
            "item": self.item,
            "kind": _BAD_PAIRS[self.item - 1].kind,
            "R": list(self.R),
            "S": list(self.S),
            "map": {str(k): v for k, v in sorted(self.map.items())},
            "levels": {str(k): v for k, v in sorted(self.levels.items())},
        }


def find_bad_pair(C: SimplicialComplex, d: Sequence[int]) -> BadPairWitness | None:
    """First minor carrying a bad pair with compatible levels (minor scan order)."""
    shapes = {(p.n, len(p.facets)) for p in _BAD_PAIRS}
    targets = [(p, p.complex) for p in _BAD_PAIRS]
    for R, S, M in enumerate_minors(C):
        if (M.n, len(M.masks)) not in shapes:
            continue
        keep = [v for v in range(1, C.n + 1) if v not in R and v not in S]
        for pair, B in targets:
            for phi in isomorphisms(M, B):
                if all(d[keep[i - 1] - 1] >= pair.pattern[phi[i] - 1] for i in phi):
                    mapping = {keep[i - 1]: phi[i] for i in phi}
                    return BadPairWitness(R, S, pair.item, mapping, {v: d[v - 1] for v in keep})
    return None


# -- reduction -----------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    op: str  # StripCone | StripGhost | Collapse
    vertices: tuple[int, ...]  # original labels; for Collapse the part M then N
    levels: tuple[int, ...]
    split: int = 0  # for Collapse: size of M

    def to_json(self) -> dict:
        out = {"op": self.op, "vertices": list(self.vertices), "levels": list(self.levels)}
        if self.op == "Collapse":
            out["M"] = list(self.vertices[: self.split])
            out["N"] = list(self.vertices[self.split:])
        return out


@dataclass(frozen=True)
class ReductionTrace:
    """Steps taken by ``reduce`` plus the original labels of the reduced complex.

    After a collapse the two remaining vertices stand for the parts M and N and
    carry the smallest label of each part.
    """

    n: int
    steps: tuple[TraceStep, ...]
    labels: tuple[int, ...]

    @property
    def collapsed(self) -> bool:
        return any(s.op == "Collapse" for s in self.steps)

    @property
    def linked(self) -> tuple[int, ...]:
        return tuple(sorted(v for s in self.steps if s.op == "StripCone" for v in s.vertices))

    @property
    def deleted(self) -> tuple[int, ...]:
        return tuple(sorted(v for s in self.steps if s.op == "StripGhost" for v in s.vertices))

    def replay(self, C: SimplicialComplex, d: Sequence[int]) -> tuple[SimplicialComplex, tuple[int, ...]]:
        """Rebuild the input pair from the reduced pair."""
        facets = [{self.labels[v - 1] for v in f} for f in C.facets]
        levels = {self.labels[i]: x for i, x in enumerate(d)}
        for step in reversed(self.steps):
            if step.op == "Collapse":
                M, N = step.vertices[: step.split], step.vertices[step.split:]
                facets = [set(M), set(N)]
                levels = {v: x for v, x in zip(step.vertices, step.levels)}
            elif step.op == "StripCone":
                facets = [f | set(step.vertices) for f in facets]
                levels.update(zip(step.vertices, step.levels))
            else:
                levels.update(zip(step.vertices, step.levels))
        return from_facets(self.n, facets), tuple(levels[v] for v in range(1, self.n + 1))

    def to_json(self) -> list:
        return [s.to_json() for s in self.steps]


def reduce(C: SimplicialComplex, d: Sequence[int] | None = None):
    """Strip cone and ghost vertices of any level, then collapse two disjoint simplices.

    Returns (C', d', trace).
    """
    d = list(check_levels(C, d))
    n = C.n
    labels = tuple(range(1, n + 1))
    steps: list[TraceStep] = []
    while True:
        ghosts = ghost_vertices(C)
        if ghosts:
            steps.append(TraceStep("StripGhost", tuple(labels[v - 1] for v in ghosts), tuple(d[v - 1] for v in ghosts)))
            d = [x for i, x in enumerate(d, 1) if i not in ghosts]
            labels = tuple(x for i, x in enumerate(labels, 1) if i not in ghosts)
            C = delete(C, ghosts)
            continue
        cones = cone_vertices(C)
        if cones:
            steps.append(TraceStep("StripCone", tuple(labels[v - 1] for v in cones), tuple(d[v - 1] for v in cones)))
            d = [x for i, x in enumerate(d, 1) if i not in cones]
            labels = tuple(x for i, x in enumerate(labels, 1) if i not in cones)
            C = link(C, cones)
            continue
        break
    if C.n > 2 and len(C.masks) == 2 and not C.masks[0] & C.masks[1] and C.masks[0] | C.masks[1] == C.ground_mask:
        a, b = sorted(C.masks, key=to_vertices)
        M, N = to_vertices(a), to_vertices(b)
        steps.append(TraceStep(
            "Collapse",
            tuple(labels[v - 1] for v in M + N),
            tuple(d[v - 1] for v in M + N),
            len(M),
        ))
        e = (prod(d[v - 1] for v in M), prod(d[v - 1] for v in N))
        labels = (labels[M[0] - 1], labels[N[0] - 1])
        C, d = from_facets(2, [[1], [2]]), list(e)
    return C, tuple(d), ReductionTrace(n, tuple(steps), labels)


# -- verdicts ------------------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    name: str
    anchor: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"rule": self.name, "anchor": self.anchor, "detail": self.detail}


@dataclass(frozen=True)
class TheoremCertificate:
    rule: str
    detail: dict

    def to_json(self) -> dict:
        return {"type": "Theorem", "rule": self.rule, **self.detail}


@dataclass(frozen=True)
class OnMinor:
    """A certificate about minor(C, R, S) with d restricted to the surviving vertices."""

    R: tuple[int, ...]
    S: tuple[int, ...]
    inner: object

    def to_json(self) -> dict:
        inner = self.inner.to_json()
        if isinstance(self.inner, CircuitWitness):
            inner["type"] = "Circuit"
        return {"type": "OnMinor", "R": list(self.R), "S": list(self.S), "certificate": inner}


@dataclass
class DVerdict:
    verdict: str
    justification: list[Rule] = field(default_factory=list)
    certificate: object | None = None
    reason: str | None = None

    @property
    def unimodular(self) -> bool | None:
        return {UNIMODULAR: True, NON_UNIMODULAR: False}.get(self.verdict)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "justification": [r.to_json() for r in self.justification]}
        if self.certificate is not None:
            cert = self.certificate.to_json()
            if isinstance(self.certificate, CircuitWitness):
                cert["type"] = "Circuit"
            out["certificate"] = cert
        if self.reason is not None:
            out["reason"] = self.reason
        return out


OPEN_QUESTION = (
    "open question: levels (3, 2, d3, d4) on the complex with facets 12, 13, 234 "
    "(Lawrence lifting of a ghosted pair of points) are not classified by any proven rule"
)


def _lift(cert, labels: tuple[int, ...], R0: tuple[int, ...], S0: tuple[int, ...]):
    """Move a certificate on minor(C, R0, S0) (whose vertex i is labels[i-1]) back to C."""
    if isinstance(cert, (ForbiddenMinorWitness, BadPairWitness)):
        R = tuple(sorted(R0 + tuple(labels[v - 1] for v in cert.R)))
        S = tuple(sorted(S0 + tuple(labels[v - 1] for v in cert.S)))
        mapping = {labels[v - 1]: t for v, t in cert.map.items()}
        if isinstance(cert, ForbiddenMinorWitness):
            return ForbiddenMinorWitness(R, S, cert.kind, mapping)
        levels = {labels[v - 1]: x for v, x in cert.levels.items()}
        return BadPairWitness(R, S, cert.item, mapping, levels)
    if cert is None or (not R0 and not S0):
        return cert
    if isinstance(cert, OnMinor):
        R = tuple(sorted(R0 + tuple(labels[v - 1] for v in cert.R)))
        S = tuple(sorted(S0 + tuple(labels[v - 1] for v in cert.S)))
        return OnMinor(R, S, cert.inner)
    return OnMinor(R0, S0, cert)


def _lawrence_vertices(dec: NuclearDecomposition) -> list[int]:
    return [s.vertex for s in dec.steps if s.op == PEEL_LAWRENCE]


def _is_boundary_of_simplex(C: SimplicialComplex) -> bool:
    n = C.n
    return n >= 3 and len(C.masks) == n and all(popcount(f) == n - 1 for f in C.masks)


def classify_d(C: SimplicialComplex, d: Sequence[int] | None = None,
               max_columns: int = DEFAULT_MAX_COLUMNS, oracle_cap: int = DEFAULT_SUBSET_CAP) -> DVerdict:
    """Decide unimodularity of A_{C,d} where a proven rule or the oracle allows it."""
    if d is not None and len(d) != C.n:
        raise ComplexError(f"level vector has {len(d)} entries for {C.n} vertices")
    d = check_levels(C, d)
    return _classify(C, d, max_columns, oracle_cap)


def _classify(C: SimplicialComplex, d: tuple[int, ...], max_columns: int, oracle_cap: int) -> DVerdict:
    rules: list[Rule] = []

    if all(x == 2 for x in d):
        b = classify_binary(C)
        rules.append(Rule("binary", "binary-theorem", "all levels are 2"))
        return DVerdict(UNIMODULAR if b.unimodular else NON_UNIMODULAR, rules, b.certificate)

    Cr, dr, trace = reduce(C, d)
    if trace.steps:
        rules.append(Rule("reduce", "cone-ghost-strip" + ("+disjoint-collapse" if trace.collapsed else ""),
                          f"{trace.to_json()} -> {Cr.facets} with levels {list(dr)}"))
    R0, S0 = trace.linked, trace.deleted

    b = classify_binary(C)
    if not b.unimodular:
        rules.append(Rule("non-nuclear", "binary-obstruction", "the complex itself is not unimodular at levels 2"))
        return DVerdict(NON_UNIMODULAR, rules, b.certificate)

    if trace.collapsed or (Cr.n == 2 and len(Cr.masks) == 2 and popcount(Cr.masks[0]) == 1 and popcount(Cr.masks[1]) == 1):
        rules.append(Rule("disjoint-simplices", "bipartite-incidence", f"levels {list(dr)} on two isolated points"))
        return DVerdict(UNIMODULAR, rules, TheoremCertificate("disjoint-simplices", {"levels": list(dr)}))
    if Cr.n == 0 or (len(Cr.masks) == 1 and Cr.masks[0] == Cr.ground_mask):
        rules.append(Rule("simplex", "cone-ghost-strip", "reduces to a simplex, whose matrix is an identity"))
        return DVerdict(UNIMODULAR, rules, TheoremCertificate("simplex", {}))

    dec = recognize_nuclear(Cr)
    if dec is not None and dec.nucleus.kind == "Dmn":
        core = [v for v in dec.nucleus_labels]
        lawr = _lawrence_vertices(dec)
        offenders = [trace.labels[v - 1] for v in core + lawr if dr[v - 1] > 2]
        detail = {"nucleus": [trace.labels[v - 1] for v in core], "lawrence": [trace.labels[v - 1] for v in lawr]}
        if not offenders:
            rules.append(Rule("dmn-nucleus", "dmn-theorem", "levels are 2 on the nucleus and Lawrence vertices"))
            return DVerdict(UNIMODULAR, rules, TheoremCertificate("dmn-nucleus", detail))
        rules.append(Rule("dmn-nucleus", "dmn-theorem", f"levels above 2 at vertices {offenders}"))
        return _negative(C, d, Cr, dr, trace, rules, max_columns, oracle_cap)

    if _is_boundary_of_simplex(Cr):
        big = [trace.labels[i] for i, x in enumerate(dr) if x > 2]
        if len(big) <= 2:
            rules.append(Rule("boundary-simplex", "boundary-simplex-rule", f"levels above 2 only at {big}"))
            return DVerdict(UNIMODULAR, rules, TheoremCertificate("boundary-simplex", {"large_levels": big}))
        rules.append(Rule("boundary-simplex", "boundary-simplex-rule", f"levels above 2 at {big}"))
        return _negative(C, d, Cr, dr, trace, rules, max_columns, oracle_cap)

    w = find_bad_pair(Cr, dr)
    if w is not None:
        rules.append(Rule("bad-pair", "bad-pair-minor", f"item {w.item} embeds with compatible levels"))
        return DVerdict(NON_UNIMODULAR, rules, _lift(w, trace.labels, R0, S0))

    for f in sorted(Cr.masks, key=to_vertices):
        if popcount(f) != Cr.n - 1:
            continue
        v = to_vertices(Cr.ground_mask & ~f)[0]
        if dr[v - 1] != 2:
            continue
        rules.append(Rule("lawrence-peel", "lawrence-level-two", f"vertex {trace.labels[v - 1]} has level 2"))
        inner = _classify(link(Cr, [v]), tuple(x for i, x in enumerate(dr, 1) if i != v), max_columns, oracle_cap)
        sub_labels = tuple(x for i, x in enumerate(trace.labels, 1) if i != v)
        return DVerdict(inner.verdict, rules + inner.justification,
                        _lift(inner.certificate, sub_labels, tuple(sorted(R0 + (trace.labels[v - 1],))), S0),
                        inner.reason)

    oracle = _oracle(Cr, dr, max_columns, oracle_cap)
    if oracle is not None:
        rules.append(Rule("oracle", "matrix-oracle", f"exact circuit check on {prod(dr)} columns"))
        if oracle.unimodular:
            return DVerdict(UNIMODULAR, rules, TheoremCertificate("oracle", {"columns": prod(dr)}))
        return DVerdict(NON_UNIMODULAR, rules, _lift(oracle.witness, trace.labels, R0, S0))

    reason = f"no proven rule applies to {Cr.facets} with levels {list(dr)} and the matrix exceeds the oracle cap"
    if _is_question_complex(Cr):
        reason = OPEN_QUESTION + f"; got levels {list(dr)}"
    rules.append(Rule("unknown", "open-region", reason))
    return DVerdict(UNKNOWN, rules, None, reason)


def _is_question_complex(C: SimplicialComplex) -> bool:
    target = _BAD_PAIRS[2].complex
    return C.n == 4 and next(isomorphisms(C, target), None) is not None


def _oracle(C: SimplicialComplex, d: Sequence[int], max_columns: int, cap: int):
    if prod(d) > max_columns:
        return None
    try:
        return is_unimodular_exact(design_matrix(C, d), cap=cap)
    except OracleCapExceeded:
        return None


def _negative(C, d, Cr, dr, trace, rules, max_columns, oracle_cap) -> DVerdict:
    """A theorem said no; attach a bad-pair witness (or an oracle witness)."""
    w = find_bad_pair(Cr, dr)
    if w is not None:
        rules.append(Rule("bad-pair", "bad-pair-minor", f"item {w.item} embeds with compatible levels"))
        return DVerdict(NON_UNIMODULAR, rules, _lift(w, trace.labels, trace.linked, trace.deleted))
    oracle = _oracle(Cr, dr, max_columns, oracle_cap)
    if oracle is not None and oracle.unimodular is False:
        rules.append(Rule("oracle", "matrix-oracle", "circuit witness"))
        return DVerdict(NON_UNIMODULAR, rules, _lift(oracle.witness, trace.labels, trace.linked, trace.deleted))
    raise ConsistencyError(f"theorem rules out {C!r} with levels {list(d)} but no witness was found")
