"""Simplicial complexes on the ground set {1..n}, stored by their facets.

Vertices are 1-based.  Internally a face is an int bitmask with bit ``v - 1``
set for vertex ``v``; the public surface speaks in sorted vertex tuples.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator


class ComplexError(ValueError):
    """Malformed input (vertex out of range, bad parameters)."""


class DomainError(ValueError):
    """Operation applied outside its domain (e.g. link at a non-face)."""


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def to_vertices(mask: int) -> tuple[int, ...]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _facet_key(mask: int) -> tuple[int, ...]:
    return to_vertices(mask)


def maximal_masks(masks: Iterable[int]) -> tuple[int, ...]:
    """Inclusion-maximal members of ``masks``, deduplicated, in facet order."""
    uniq = sorted(set(masks), key=popcount, reverse=True)
    kept: list[int] = []
    for m in uniq:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return tuple(sorted(kept, key=_facet_key))


def submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def survivors(n: int, removed: Iterable[int]) -> tuple[int, ...]:
    """Original labels of the vertices left after removing ``removed``.

    After a link or deletion, new vertex ``i`` is ``survivors(n, removed)[i - 1]``.
    """
    gone = set(removed)
    return tuple(v for v in range(1, n + 1) if v not in gone)


def _compress(mask: int, keep: tuple[int, ...]) -> int:
    out = 0
    for i, v in enumerate(keep):
        if mask >> (v - 1) & 1:
            out |= 1 << i
    return out


@dataclass(frozen=True)
class SimplicialComplex:
    """A simplicial complex given by its ground-set size and facet bitmasks.

    ``masks == (0,)`` is the irrelevant complex, ``masks == ()`` the void one.
    Build instances with :func:`from_facets` unless the masks are already
    maximal and sorted.
    """

    n: int
    masks: tuple[int, ...]

    @property
    def facets(self) -> list[tuple[int, ...]]:
        return [to_vertices(m) for m in self.masks]

    @property
    def ground_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def is_void(self) -> bool:
        return not self.masks

    @property
    def is_irrelevant(self) -> bool:
        return self.masks == (0,)

    @cached_property
    def face_masks(self) -> frozenset[int]:
        out: set[int] = set()
        for m in self.masks:
            out.update(submasks(m))
        return frozenset(out)

    def has_face(self, vertices: Iterable[int]) -> bool:
        m = to_mask(vertices)
        return any(m & f == m for f in self.masks)

    def __repr__(self) -> str:
        body = ",".join("".join(map(str, f)) if f else "{}" for f in self.facets)
        return f"SimplicialComplex(n={self.n}, facets=[{body}])"


def from_masks(n: int, masks: Iterable[int]) -> SimplicialComplex:
    return SimplicialComplex(n, maximal_masks(masks))


def from_facets(n: int, generators: Iterable[Iterable[int]]) -> SimplicialComplex:
    """The complex on {1..n} generated by ``generators``."""
    if n < 0:
        raise ComplexError(f"ground-set size must be >= 0, got {n}")
    masks = []
    for g in generators:
        g = tuple(g)
        for v in g:
            if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n:
                raise ComplexError(f"facet {list(g)}: vertex {v!r} outside 1..{n}")
        masks.append(to_mask(g))
    return from_masks(n, masks)


def void(n: int = 0) -> SimplicialComplex:
    return SimplicialComplex(n, ())


def irrelevant(n: int = 0) -> SimplicialComplex:
    return SimplicialComplex(n, (0,))


def simplex_on(n: int) -> SimplicialComplex:
    """The full simplex on {1..n} (irrelevant complex when n = 0)."""
    return SimplicialComplex(n, ((1 << n) - 1,))


def faces(C: SimplicialComplex) -> list[tuple[int, ...]]:
    """Every face of C, including the empty face, ordered by size then lexicographically."""
    return [to_vertices(m) for m in sorted(C.face_masks, key=lambda m: (popcount(m), to_vertices(m)))]


def minimal_nonfaces(C: SimplicialComplex) -> list[int]:
    fm = C.face_masks
    out = []
    for m in range(1 << C.n):
        if m in fm:
            continue
        if all((m & ~(1 << i)) in fm for i in range(C.n) if m >> i & 1):
            out.append(m)
    return sorted(out, key=_facet_key)


def alexander_dual(C: SimplicialComplex) -> SimplicialComplex:
    full = C.ground_mask
    return from_masks(C.n, (full & ~m for m in minimal_nonfaces(C)))


def link(C: SimplicialComplex, S: Iterable[int]) -> SimplicialComplex:
    """link_S(C) on the relabeled ground set ``survivors(n, S)``."""
    S = tuple(S)
    s = to_mask(S)
    if not any(s & f == s for f in C.masks):
        raise DomainError(f"{sorted(S)} is not a face of {C!r}")
    keep = survivors(C.n, S)
    return from_masks(len(keep), (_compress(f & ~s, keep) for f in C.masks if f & s == s))


def delete(C: SimplicialComplex, S: Iterable[int]) -> SimplicialComplex:
    """Induced subcomplex on {1..n} minus S, relabeled to ``survivors(n, S)``."""
    S = tuple(S)
    for v in S:
        if not 1 <= v <= C.n:
            raise ComplexError(f"vertex {v} outside 1..{C.n}")
    s = to_mask(S)
    keep = survivors(C.n, S)
    return from_masks(len(keep), (_compress(f & ~s, keep) for f in C.masks))


def cone(C: SimplicialComplex, p: int = 1) -> SimplicialComplex:
    if p < 0:
        raise ComplexError("cone count must be >= 0")
    new = ((1 << p) - 1) << C.n
    return from_masks(C.n + p, (f | new for f in C.masks))


def add_ghosts(C: SimplicialComplex, p: int = 1) -> SimplicialComplex:
    if p < 0:
        raise ComplexError("ghost count must be >= 0")
    return SimplicialComplex(C.n + p, C.masks)


def lawrence(C: SimplicialComplex) -> SimplicialComplex:
    top = 1 << C.n
    return from_masks(C.n + 1, [C.ground_mask, *(f | top for f in C.masks)])


def insert_vertex(C: SimplicialComplex, v: int) -> SimplicialComplex:
    """Move the last vertex n to position v, shifting v..n-1 up by one."""
    if not 1 <= v <= C.n:
        raise ComplexError(f"position {v} outside 1..{C.n}")
    low = (1 << (v - 1)) - 1
    top_bit = 1 << (C.n - 1)
    out = []
    for f in C.masks:
        moved = f & ~top_bit
        moved = (moved & low) | ((moved & ~low) << 1)
        if f & top_bit:
            moved |= 1 << (v - 1)
        out.append(moved)
    return from_masks(C.n, out)


@dataclass(frozen=True)
class Structure:
    ghost_vertices: tuple[int, ...]
    cone_vertices: tuple[int, ...]
    big_facets: tuple[tuple[int, ...], ...]
    minimal_nonfaces: tuple[tuple[int, ...], ...]


def ghost_vertices(C: SimplicialComplex) -> tuple[int, ...]:
    used = 0
    for f in C.masks:
        used |= f
    return to_vertices(C.ground_mask & ~used)


def cone_vertices(C: SimplicialComplex) -> tuple[int, ...]:
    if not C.masks:
        return ()
    common = C.ground_mask
    for f in C.masks:
        common &= f
    return to_vertices(common)


def big_facets(C: SimplicialComplex) -> tuple[tuple[int, ...], ...]:
    return tuple(to_vertices(f) for f in C.masks if C.n >= 1 and popcount(f) == C.n - 1)


def structure_queries(C: SimplicialComplex) -> Structure:
    return Structure(
        ghost_vertices=ghost_vertices(C),
        cone_vertices=cone_vertices(C),
        big_facets=big_facets(C),
        minimal_nonfaces=tuple(to_vertices(m) for m in minimal_nonfaces(C)),
    )


def minor(C: SimplicialComplex, R: Iterable[int], S: Iterable[int]) -> SimplicialComplex:
    """The minor link_R(C minus S), on ground set ``survivors(n, R | S)``."""
    R, S = tuple(R), tuple(S)
    if set(R) & set(S):
        raise DomainError("link set R and deletion set S must be disjoint")
    D = delete(C, S)
    keep = survivors(C.n, S)
    pos = {v: i + 1 for i, v in enumerate(keep)}
    return link(D, [pos[v] for v in R])


def enumerate_minors(C: SimplicialComplex) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], SimplicialComplex]]:
    """Every valid (R, S, minor), ordered by |S|, then |R|, then lexicographically."""
    n = C.n
    verts = range(1, n + 1)
    deleted: dict[tuple[int, ...], SimplicialComplex] = {}
    for s_size in range(n + 1):
        for r_size in range(n - s_size + 1):
            for S in itertools.combinations(verts, s_size):
                rest = [v for v in verts if v not in S]
                pos = {v: i + 1 for i, v in enumerate(rest)}
                for R in itertools.combinations(rest, r_size):
                    r = to_mask(R)
                    # R must be a face of C minus S, i.e. a face of C avoiding S
                    if not any(r & f == r for f in C.masks):
                        continue
                    if S not in deleted:
                        deleted[S] = delete(C, S)
                    yield R, S, link(deleted[S], [pos[v] for v in R])


# -- isomorphism -------------------------------------------------------------

def _invariants(C: SimplicialComplex) -> list[tuple[int, ...]]:
    inv = []
    for i in range(C.n):
        bit = 1 << i
        inv.append(tuple(sorted(popcount(f) for f in C.masks if f & bit)))
    return inv


def _cells(C: SimplicialComplex) -> list[tuple[tuple[int, ...], list[int]]]:
    """Vertices (0-based) grouped by invariant, groups in invariant order."""
    groups: dict[tuple[int, ...], list[int]] = {}
    for i, key in enumerate(_invariants(C)):
        groups.setdefault(key, []).append(i)
    return sorted(groups.items())


def _apply(masks: Iterable[int], image: list[int]) -> tuple[int, ...]:
    """Relabel masks by the 0-based vertex map ``image``."""
    out = []
    for f in masks:
        g = 0
        i = 0
        while f:
            if f & 1:
                g |= 1 << image[i]
            f >>= 1
            i += 1
        out.append(g)
    return tuple(sorted(out))


def _cell_orderings(cells) -> Iterator[list[int]]:
    """All vertex orders that keep cells contiguous and in cell order."""
    for combo in itertools.product(*(itertools.permutations(vs) for _, vs in cells)):
        yield [v for block in combo for v in block]


_CANON: dict[tuple[int, tuple[int, ...]], tuple[tuple[int, tuple[int, ...]], tuple[int, ...]]] = {}


def canonical_labeling(C: SimplicialComplex) -> tuple[tuple[int, tuple[int, ...]], tuple[int, ...]]:
    """(canonical form, vertex map) where map[v-1] is v's canonical label."""
    key = (C.n, C.masks)
    hit = _CANON.get(key)
    if hit is not None:
        return hit
    cells = _cells(C)
    sig = tuple((k, len(vs)) for k, vs in cells)
    best = None
    best_map = None
    for order in _cell_orderings(cells):
        image = [0] * C.n
        for new, old in enumerate(order):
            image[old] = new
        enc = _apply(C.masks, image)
        if best is None or enc < best:
            best, best_map = enc, image
    form = (C.n, (sig, best))
    result = (form, tuple(i + 1 for i in (best_map or [])))
    if len(_CANON) < 500_000:
        _CANON[key] = result
    return result


def canonical_form(C: SimplicialComplex):
    """A hashable encoding equal for exactly the isomorphic complexes."""
    return canonical_labeling(C)[0]


def isomorphisms(C1: SimplicialComplex, C2: SimplicialComplex) -> Iterator[dict[int, int]]:
    """Every vertex bijection mapping the facets of C1 onto those of C2."""
    if C1.n != C2.n or len(C1.masks) != len(C2.masks):
        return
    cells1, cells2 = _cells(C1), _cells(C2)
    if [(k, len(v)) for k, v in cells1] != [(k, len(v)) for k, v in cells2]:
        return
    target = tuple(sorted(C2.masks))
    src = [v for _, vs in cells1 for v in vs]
    for order in _cell_orderings(cells2):
        image = [0] * C1.n
        for a, b in zip(src, order):
            image[a] = b
        if _apply(C1.masks, image) == target:
            yield {i + 1: image[i] + 1 for i in range(C1.n)}


def find_isomorphism(C1: SimplicialComplex, C2: SimplicialComplex) -> dict[int, int] | None:
    if C1.n != C2.n:
        return None
    f1, m1 = canonical_labeling(C1)
    f2, m2 = canonical_labeling(C2)
    if f1 != f2:
        return None
    inv2 = {c: v for v, c in enumerate(m2, start=1)}
    return {v: inv2[m1[v - 1]] for v in range(1, C1.n + 1)}


def is_isomorphic(C1: SimplicialComplex, C2: SimplicialComplex) -> bool:
    return find_isomorphism(C1, C2) is not None


def relabel(C: SimplicialComplex, mapping: dict[int, int]) -> SimplicialComplex:
    """Apply a vertex bijection of {1..n}."""
    image = [mapping[v] - 1 for v in range(1, C.n + 1)]
    return SimplicialComplex(C.n, maximal_masks(_apply(C.masks, image)))
