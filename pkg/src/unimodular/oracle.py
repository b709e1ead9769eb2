"""Ground-truth unimodularity of integer matrices.

A matrix is unimodular when every circuit (support-minimal integer kernel
vector with coprime entries) has entries in {0, +1, -1}.  Circuits are found
with Cramer's rule: an (r+1)-subset U of columns of rank r has the kernel
vector u_k = (-1)^k det(A_{U - k}), so the circuit on U is bad exactly when
the nonzero maximal minors |det(A_{U - k})| are not all equal.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice, product
from math import comb, gcd
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .matrix import (
    IntegerMatrix,
    RationalMatrix,
    det,
    independent_rows,
    kernel_lattice_basis,
    nullspace_vector,
    rank,
)

DEFAULT_SUBSET_CAP = 20_000_000
DEFAULT_MINOR_CAP = 1_000_000
# largest Laplace table (entries) kept in memory for the minor lookups
DEFAULT_TABLE_CAP = 1_500_000

UNIMODULAR = "Unimodular"
NON_UNIMODULAR = "NonUnimodular"
NO_WITNESS = "NoWitnessFound"


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CircuitWitness:
    support: tuple[int, ...]
    vector: tuple[int, ...]
    entry: int

    def to_json(self) -> dict:
        return {"support": list(self.support), "vector": list(self.vector), "entry": self.entry}


@dataclass
class OracleReport:
    verdict: str
    method: str
    witness: CircuitWitness | None = None
    circuits_examined: int = 0
    seed: int | None = None
    trials: int | None = None
    lam: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def unimodular(self) -> bool | None:
        if self.verdict == UNIMODULAR:
            return True
        if self.verdict == NON_UNIMODULAR:
            return False
        return None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "method": self.method, "circuits_examined": self.circuits_examined}
        if self.witness is not None:
            out.update(self.witness.to_json())
        if self.seed is not None:
            out["seed"] = self.seed
            out["trials"] = self.trials
        if self.lam is not None:
            out["lambda"] = self.lam
        return out


def as_integer_matrix(A) -> IntegerMatrix:
    if isinstance(A, IntegerMatrix):
        return A
    if isinstance(A, RationalMatrix):
        return A.to_integer_rows()
    rows = [list(r) for r in A]
    if any(isinstance(x, Fraction) for r in rows for x in r):
        return RationalMatrix(tuple(tuple(Fraction(x) for x in r) for r in rows), len(rows[0])).to_integer_rows()
    return IntegerMatrix.from_rows(rows)


def full_row_rank(A: IntegerMatrix) -> IntegerMatrix:
    keep = independent_rows(A)
    return IntegerMatrix(tuple(A.rows[i] for i in keep), A.ncols)


class _MinorTable:
    """|maximal minors| of A, up to one global factor, keyed by column bitmask.

    Uses whichever of A (r rows) or its kernel basis (m - r rows) is shorter;
    the minors of complementary column sets agree up to a common scalar.
    """

    def __init__(self, X: IntegerMatrix, complement: bool):
        self.m = X.ncols
        self.complement = complement
        self.full = (1 << self.m) - 1
        self.table = self._build(X)

    @staticmethod
    def size_estimate(m: int, h: int) -> int:
        return sum(comb(m, t) for t in range(h + 1))

    def _build(self, X: IntegerMatrix) -> dict[int, int]:
        h, m = X.nrows, X.ncols
        level = {0: 1}
        for t in range(h):
            row = X.rows[h - 1 - t]
            nz = [(j, row[j]) for j in range(m) if row[j]]
            nxt: dict[int, int] = {}
            for mask, val in level.items():
                if not val:
                    continue
                for j, a in nz:
                    bit = 1 << j
                    if mask & bit:
                        continue
                    # sign from the position of j among the chosen columns
                    below = bin(mask & (bit - 1)).count("1")
                    term = a * val if below % 2 == 0 else -a * val
                    nxt[mask | bit] = nxt.get(mask | bit, 0) + term
            level = nxt
        return {k: abs(v) for k, v in level.items() if v}

    def __call__(self, mask: int) -> int:
        if self.complement:
            mask = self.full & ~mask
        return self.table.get(mask, 0)


def _circuit_from(A: IntegerMatrix, support: Sequence[int]) -> list[int]:
    vec = nullspace_vector([A.column(j) for j in support])
    full = [0] * A.ncols
    for j, x in zip(support, vec):
        full[j] = x
    return full


def _witness(A: IntegerMatrix, support: Sequence[int]) -> CircuitWitness:
    vec = _circuit_from(A, support)
    return CircuitWitness(tuple(support), tuple(vec), max(abs(x) for x in vec))


def _scan(A: IntegerMatrix, cap: int, table_cap: int, stop_at_bad: bool = True) -> Iterator[tuple[tuple[int, ...], bool]]:
    """Yield (support, is_bad) for each distinct circuit in lexicographic subset order."""
    A = full_row_rank(A)
    r, m = A.nrows, A.ncols
    if m == 0:
        return
    if r == 0:
        # every column is zero: each is a circuit e_j
        for j in range(m):
            yield (j,), False
        return
    total = comb(m, r + 1)
    if total > cap:
        raise OracleCapExceeded(
            f"{total} column subsets of size {r + 1} exceed the cap {cap}; use the randomized mode (--seed)"
        )
    k = m - r
    lookup = None
    if k == 0:
        return
    if min(r, k) <= r and _MinorTable.size_estimate(m, min(r, k)) <= table_cap:
        if r <= k:
            lookup = _MinorTable(A, complement=False)
        else:
            lookup = _MinorTable(kernel_lattice_basis(A), complement=True)
    seen: set[tuple[int, ...]] = set()
    for U in combinations(range(m), r + 1):
        if lookup is not None:
            umask = 0
            for j in U:
                umask |= 1 << j
            vals = [lookup(umask & ~(1 << j)) for j in U]
            support = tuple(j for j, v in zip(U, vals) if v)
            if not support:
                continue
            if support in seen:
                continue
            seen.add(support)
            nz = [v for v in vals if v]
            bad = any(v != nz[0] for v in nz)
        else:
            vec = nullspace_vector([A.column(j) for j in U])
            if vec is None:
                continue
            support = tuple(j for j, x in zip(U, vec) if x)
            if support in seen:
                continue
            seen.add(support)
            bad = any(abs(x) > 1 for x in vec)
        yield support, bad
        if bad and stop_at_bad:
            return


def circuits(A, limit: int | None = None, cap: int = DEFAULT_SUBSET_CAP,
             table_cap: int = DEFAULT_TABLE_CAP) -> Iterator[CircuitWitness]:
    """Stream the circuits of A (first nonzero entry positive), deduplicated by support."""
    A = as_integer_matrix(A)
    count = 0
    for support, _ in _scan(A, cap, table_cap, stop_at_bad=False):
        yield _witness(A, support)
        count += 1
        if limit is not None and count >= limit:
            return


# Up to this many (r+1)-subsets the plain lexicographic scan is used; larger
# matrices go through the tableau engine below.
LEX_SCAN_LIMIT = 250_000


def _tableau(A: IntegerMatrix) -> tuple[list[int], list[list[int]], list[int]]:
    """Gauss-Jordan over the integers on a full-row-rank matrix.

    Returns (pivots, rows, dens): row i of the reduced form is rows[i] / dens[i],
    the pivot columns form the lexicographically first basis.
    """
    rows = [list(r) for r in A.rows]
    r, m = len(rows), A.ncols
    pivots: list[int] = []
    used = [False] * r
    for c in range(m):
        if len(pivots) == r:
            break
        p = next((i for i in range(r) if not used[i] and rows[i][c]), None)
        if p is None:
            continue
        used[p] = True
        pivots.append(c)
        prow = rows[p]
        a = prow[c]
        for i in range(r):
            if i == p or not rows[i][c]:
                continue
            b = rows[i][c]
            row = [a * x - b * y for x, y in zip(rows[i], prow)]
            g = 0
            for x in row:
                if x:
                    g = gcd(g, x)
                    if g == 1:
                        break
            rows[i] = [x // g for x in row] if g > 1 else row
    order = sorted(range(r), key=lambda i: next(j for j in range(m) if rows[i][j]))
    rows = [rows[i] for i in order]
    dens = [rows[i][pivots[i]] for i in range(r)]
    return pivots, rows, dens


def _reduce_tu(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Drop rows/columns whose removal cannot change total unimodularity.

    Removed: lines with at most one nonzero and repeated lines up to sign.
    Returns the surviving row and column indices.
    """
    rows = np.arange(M.shape[0])
    cols = np.arange(M.shape[1])
    while True:
        sub = M[np.ix_(rows, cols)]
        keep_c = (sub != 0).sum(axis=0) > 1
        keep_r = (sub != 0).sum(axis=1) > 1
        keep_c &= _first_of_each(sub.T)
        keep_r &= _first_of_each(sub)
        if keep_c.all() and keep_r.all():
            return rows, cols
        rows, cols = rows[keep_r], cols[keep_c]
        if not len(rows) or not len(cols):
            return rows, cols


def _first_of_each(L: np.ndarray) -> np.ndarray:
    """Mask keeping the first line of each class of lines equal up to sign."""
    keep = np.ones(L.shape[0], dtype=bool)
    seen: set[bytes] = set()
    for i, line in enumerate(L):
        nz = np.flatnonzero(line)
        key = (line if not len(nz) or line[nz[0]] > 0 else -line).tobytes()
        if key in seen:
            keep[i] = False
        seen.add(key)
    return keep


def _components(Q: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    p, q = Q.shape
    graph = csr_matrix(np.block([[np.zeros((p, p)), Q != 0], [(Q != 0).T, np.zeros((q, q))]]))
    count, labels = connected_components(graph, directed=False)
    out = []
    for c in range(count):
        rs = np.flatnonzero(labels[:p] == c)
        cs = np.flatnonzero(labels[p:] == c)
        if len(rs) and len(cs):
            out.append((rs, cs))
    return out


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def spend(self, n: int) -> None:
        self.used += n
        if self.used > self.cap:
            raise OracleCapExceeded(
                f"total-unimodularity check needs more than {self.cap} signed column sets; "
                "use the randomized mode (--seed) or raise the cap"
            )


def _bicoloring_failure(Q: np.ndarray, budget: _Budget) -> tuple[int, ...] | None:
    """Smallest set of columns of Q with no signing whose sum lies in {0,+1,-1}^rows.

    By the Ghouila-Houri criterion Q is totally unimodular iff no such set exists.
    Sets are tried by size, then lexicographically.
    """
    q = Q.shape[1]
    cols = Q.T.astype(np.int32)
    for s in range(2, q + 1):
        signs = np.array([(1,) + e for e in product((1, -1), repeat=s - 1)], dtype=np.int32)
        per_set = len(signs) * cols.shape[1]
        chunk = max(1, 4_000_000 // max(per_set, 1))
        it = combinations(range(q), s)
        while True:
            block = list(islice(it, chunk))
            if not block:
                break
            budget.spend(len(block) * len(signs))
            idx = np.array(block)
            sums = np.einsum("es,csp->cep", signs, cols[idx])
            ok = (np.abs(sums) <= 1).all(axis=2).any(axis=1)
            if not ok.all():
                return block[int(np.argmin(ok))]
    return None


# effort spent looking for a small violation when full certification is out of reach
PROBE_BUDGET = 1_000_000


def _signed_two_coloring(Q: np.ndarray) -> bool:
    """Sufficient test for total unimodularity of a 0/+-1 matrix.

    Every column has at most two nonzeros and the rows split into two classes
    so that equal-sign pairs straddle the classes and opposite-sign pairs do
    not (Heller-Tompkins).
    """
    if Q.size and np.abs(Q).max() > 1:
        return False
    parent = list(range(Q.shape[0]))
    parity = [0] * Q.shape[0]

    def find(x: int) -> tuple[int, int]:
        p = 0
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    for j in range(Q.shape[1]):
        nz = np.flatnonzero(Q[:, j])
        if len(nz) > 2:
            return False
        if len(nz) < 2:
            continue
        a, b = int(nz[0]), int(nz[1])
        want = 1 if Q[a, j] == Q[b, j] else 0
        (ra, pa), (rb, pb) = find(a), find(b)
        if ra == rb:
            if pa ^ pb != want:
                return False
        else:
            parent[ra] = rb
            parity[ra] = pa ^ pb ^ want
    return True


def _certified_tu(Q: np.ndarray) -> bool:
    return _signed_two_coloring(Q) or _signed_two_coloring(Q.T)


def _tu_violation(M: np.ndarray, budget: _Budget) -> tuple[str, tuple[int, ...]] | None:
    """A set of columns ("col") or rows ("row") of M spanning a non-TU submatrix."""
    rows, cols = _reduce_tu(M)
    if not len(rows) or not len(cols):
        return None
    Q = M[np.ix_(rows, cols)]
    blocks = []
    for rs, cs in _components(Q):
        block = Q[np.ix_(rs, cs)]
        if _certified_tu(block):
            continue
        if len(cs) <= len(rs):
            blocks.append(("col", block, cols[cs]))
        else:
            blocks.append(("row", block.T, rows[rs]))
    need = sum((3 ** b.shape[1] - 1) // 2 for _, b, _ in blocks)
    if need > budget.cap:
        probe = _Budget(min(budget.cap, PROBE_BUDGET))
        try:
            for side, block, names in blocks:
                bad = _bicoloring_failure(block, probe)
                if bad is not None:
                    budget.used = probe.used
                    return side, tuple(int(names[j]) for j in bad)
        except OracleCapExceeded:
            pass
        raise OracleCapExceeded(
            f"certifying total unimodularity needs about {need} signed column sets, above the cap "
            f"{budget.cap}; use the randomized mode (--seed) or raise the cap"
        )
    for side, block, names in blocks:
        bad = _bicoloring_failure(block, budget)
        if bad is not None:
            return side, tuple(int(names[j]) for j in bad)
    return None


def _first_bad(A: IntegerMatrix, table_cap: int) -> tuple[tuple[int, ...], int]:
    examined = 0
    for support, bad in _scan(A, DEFAULT_SUBSET_CAP, table_cap):
        examined += 1
        if bad:
            return support, examined
    raise AssertionError("minor expected to carry a bad circuit")


def _tableau_engine(A: IntegerMatrix, cap: int, table_cap: int) -> OracleReport:
    """Exact test through a basis tableau [I | M]: A is unimodular iff M is TU."""
    small = all(-1 <= x <= 1 for row in A.rows for x in row)
    if small and _certified_tu(np.array(A.rows, dtype=np.int8).reshape(A.nrows, A.ncols)):
        return OracleReport(UNIMODULAR, "exhaustive", None, 0, extra={"engine": "two-per-line"})
    pivots, rows, dens = _tableau(A)
    r, m = len(rows), A.ncols
    basis = set(pivots)
    nonbasic = [j for j in range(m) if j not in basis]
    extra = {"engine": "tableau", "basis": list(pivots)}
    # fundamental circuits: B + j for every nonbasic j
    for j in nonbasic:
        for i in range(r):
            x = rows[i][j]
            if x and abs(x) != abs(dens[i]):
                support = sorted({j} | {pivots[t] for t in range(r) if rows[t][j]})
                return OracleReport(NON_UNIMODULAR, "exhaustive", _witness(A, support), len(nonbasic), extra=extra)
    M = np.array([[rows[i][j] // dens[i] for j in nonbasic] for i in range(r)], dtype=np.int8).reshape(r, len(nonbasic))
    budget = _Budget(cap)
    found = _tu_violation(M, budget)
    extra["signed_sets"] = budget.used
    if found is None:
        return OracleReport(UNIMODULAR, "exhaustive", None, len(nonbasic), extra=extra)
    side, idx = found
    if side == "col":
        # deletion minor: the offending nonbasic columns plus the basis columns they touch
        # (untouched basis columns are coloops and lie on no circuit)
        touched = [pivots[i] for i in range(r) if any(M[i, j] for j in idx)]
        U = sorted(set(touched) | {nonbasic[j] for j in idx})
        support, seen = _first_bad(A.select_columns(U), table_cap)
        witness = _witness(A, [U[t] for t in support])
    else:
        # contraction minor: contract the basis columns outside the offending rows
        touched = [c for c in range(len(nonbasic)) if any(M[i, c] for i in idx)]
        Y = sorted([pivots[i] for i in idx] + [nonbasic[c] for c in touched])
        sub_rows = [[rows[i][y] // dens[i] for y in Y] for i in idx]
        support, seen = _first_bad(IntegerMatrix.from_rows(sub_rows), table_cap)
        contracted = sorted(basis - {pivots[i] for i in idx})
        witness = _witness(A, sorted({Y[t] for t in support} | set(contracted)))
    assert witness.entry >= 2
    return OracleReport(NON_UNIMODULAR, "exhaustive", witness, len(nonbasic) + seen, extra=extra)


def is_unimodular_exact(A, cap: int = DEFAULT_SUBSET_CAP, table_cap: int = DEFAULT_TABLE_CAP) -> OracleReport:
    """Exact verdict on every circuit of A.

    Small matrices are scanned subset by subset in lexicographic order and the
    first bad circuit is the witness.  Larger ones are reduced to a basis
    tableau whose total unimodularity is checked by signed column sums;
    ``cap`` bounds the number of signed sets tried.
    """
    A = full_row_rank(as_integer_matrix(A))
    r, m = A.nrows, A.ncols
    k = m - r
    if r == 0 or k == 0:
        return OracleReport(UNIMODULAR, "exhaustive", None, 0)
    if comb(m, r + 1) <= min(LEX_SCAN_LIMIT, cap) and _MinorTable.size_estimate(m, min(r, k)) <= table_cap:
        examined = 0
        for support, bad in _scan(A, cap, table_cap):
            examined += 1
            if bad:
                return OracleReport(NON_UNIMODULAR, "exhaustive", _witness(A, support), examined,
                                    extra={"engine": "lex"})
        return OracleReport(UNIMODULAR, "exhaustive", None, examined, extra={"engine": "lex"})
    return _tableau_engine(A, cap, table_cap)


def is_unimodular_randomized(A, seed: int, trials: int = 10_000, window: int = 3,
                             trial_cap: int = 200_000, table_cap: int = DEFAULT_TABLE_CAP) -> OracleReport:
    """Exact checks of random column subsets with between r+1 and r+window columns.

    Deterministic given ``seed``.  Can only prove non-unimodularity.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    A = full_row_rank(as_integer_matrix(A))
    r, m = A.nrows, A.ncols
    rng = random.Random(seed)
    examined = 0
    lo = min(r + 1, m)
    hi = min(r + window, m)
    for t in range(trials):
        size = rng.randint(lo, max(lo, hi))
        cols = sorted(rng.sample(range(m), size))
        try:
            rep = is_unimodular_exact(A.select_columns(cols), trial_cap, table_cap)
        except OracleCapExceeded:
            continue
        examined += rep.circuits_examined
        if rep.verdict == NON_UNIMODULAR:
            w = rep.witness
            support = tuple(cols[j] for j in w.support)
            vec = [0] * m
            for j, x in zip(cols, w.vector):
                vec[j] = x
            return OracleReport(NON_UNIMODULAR, "randomized", CircuitWitness(support, tuple(vec), w.entry),
                                examined, seed, t + 1)
    return OracleReport(NO_WITNESS, "randomized", None, examined, seed, trials)


def unimodular_via_minors(A, cap: int = DEFAULT_MINOR_CAP) -> OracleReport:
    """All maximal minors of a full-row-rank equivalent must be 0 or +-lambda."""
    A = full_row_rank(as_integer_matrix(A))
    r, m = A.nrows, A.ncols
    total = comb(m, r)
    if total > cap:
        raise OracleCapExceeded(f"{total} maximal minors exceed the cap {cap}")
    dets: dict[tuple[int, ...], int] = {}
    values = set()
    for W in combinations(range(m), r):
        v = abs(det([[row[j] for j in W] for row in A.rows]))
        dets[W] = v
        if v:
            values.add(v)
    if len(values) <= 1:
        lam = next(iter(values), None)
        return OracleReport(UNIMODULAR, "minors", None, 0, lam=lam, extra={"minors": total})
    # two bases differing in one column with different |det| span a bad circuit
    for W, v in dets.items():
        if not v:
            continue
        for out in W:
            for inn in range(m):
                if inn in W:
                    continue
                W2 = tuple(sorted(set(W) - {out} | {inn}))
                v2 = dets[W2]
                if v2 and v2 != v:
                    support = tuple(sorted(set(W) | {inn}))
                    vec = _circuit_from(A, support)
                    nz = tuple(j for j in support if vec[j])
                    w = CircuitWitness(nz, tuple(vec), max(abs(x) for x in vec))
                    return OracleReport(NON_UNIMODULAR, "minors", w, 0, extra={"minors": total})
    raise AssertionError("unequal minors without an adjacent unequal pair")
