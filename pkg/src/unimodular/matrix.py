"""Exact integer matrices and the hierarchical-model design matrix.

Everything here is arbitrary-precision ``int`` or ``Fraction``; no floating
point touches a rank or determinant.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Hashable, Sequence

from .complex import (
    ComplexError,
    DomainError,
    SimplicialComplex,
    minimal_nonfaces,
    to_vertices,
)


@dataclass(frozen=True)
class IntegerMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int
    row_labels: tuple[Hashable, ...] | None = None
    col_labels: tuple[Hashable, ...] | None = None

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError(f"row of length {len(r)} in a matrix with {self.ncols} columns")
        if self.row_labels is not None and len(self.row_labels) != len(self.rows):
            raise ValueError("row label count does not match row count")
        if self.col_labels is not None and len(self.col_labels) != self.ncols:
            raise ValueError("column label count does not match column count")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None, **labels) -> IntegerMatrix:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(rows, ncols, **labels)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix(tuple(self.columns()), self.nrows, self.col_labels, self.row_labels)

    def select_columns(self, cols: Sequence[int]) -> IntegerMatrix:
        labels = None if self.col_labels is None else tuple(self.col_labels[j] for j in cols)
        return IntegerMatrix(tuple(tuple(r[j] for j in cols) for r in self.rows), len(cols), self.row_labels, labels)

    def times(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(r, x) if a) for r in self.rows)

    def to_dense_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = self.col_labels or tuple(range(self.ncols))
        rows = self.row_labels or tuple(range(self.nrows))
        w.writerow([""] + [_label_text(c) for c in cols])
        for lab, r in zip(rows, self.rows):
            w.writerow([_label_text(lab)] + list(r))
        return buf.getvalue()


def _label_text(label) -> str:
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[0], tuple):
        facet, idx = label
        return "F" + "".join(map(str, facet)) + ":" + "".join(map(str, idx))
    if isinstance(label, tuple):
        return "".join(map(str, label))
    return str(label)


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[tuple[Fraction, ...], ...]
    ncols: int

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def to_integer_rows(self) -> IntegerMatrix:
        """Scale each row by its denominator lcm; the kernel is unchanged."""
        out = []
        for r in self.rows:
            lcm = 1
            for x in r:
                lcm = lcm * x.denominator // gcd(lcm, x.denominator)
            out.append(tuple(int(x * lcm) for x in r))
        return IntegerMatrix(tuple(out), self.ncols)


def check_levels(C: SimplicialComplex, d: Sequence[int] | None) -> tuple[int, ...]:
    if d is None:
        return (2,) * C.n
    d = tuple(int(x) for x in d)
    if len(d) != C.n:
        raise ComplexError(f"level vector has length {len(d)}, complex has {C.n} vertices")
    bad = [x for x in d if x < 2]
    if bad:
        raise ComplexError(f"every level must be >= 2, got {list(d)}")
    return d


def table_cells(d: Sequence[int]) -> list[tuple[int, ...]]:
    """Cells of the d_1 x ... x d_n table, lexicographic with vertex 1 most significant."""
    return list(itertools.product(*(range(1, k + 1) for k in d)))


def design_matrix(C: SimplicialComplex, d: Sequence[int] | None = None) -> IntegerMatrix:
    """The 0/1 matrix of the facet-marginal map of C with levels d (default all 2)."""
    d = check_levels(C, d)
    cols = table_cells(d)
    rows = []
    labels = []
    for facet in C.facets:
        idx = [v - 1 for v in facet]
        block = {}
        for e in itertools.product(*(range(1, d[i] + 1) for i in idx)):
            block[e] = len(rows)
            rows.append([0] * len(cols))
            labels.append((facet, e))
        for j, cell in enumerate(cols):
            rows[block[tuple(cell[i] for i in idx)]][j] = 1
    return IntegerMatrix(tuple(map(tuple, rows)), len(cols), tuple(labels), tuple(cols))


def lawrence_lift_matrix(A: IntegerMatrix) -> IntegerMatrix:
    """[[A, 0], [0, A], [I, I]]."""
    s, t = A.shape
    zero = (0,) * t
    top = [r + zero for r in A.rows]
    mid = [zero + r for r in A.rows]
    bot = [tuple(int(i == j) for i in range(t)) * 2 for j in range(t)]
    rl = cl = None
    if A.row_labels is not None and A.col_labels is not None:
        rl = tuple(("top", x) for x in A.row_labels) + tuple(("mid", x) for x in A.row_labels) + tuple(
            ("id", c) for c in A.col_labels
        )
        cl = tuple((c, 1) for c in A.col_labels) + tuple((c, 2) for c in A.col_labels)
    return IntegerMatrix(tuple(top + mid + bot), 2 * t, rl, cl)


def same_up_to_permutation(A: IntegerMatrix, B: IntegerMatrix, row_map=None, col_map=None) -> bool:
    """Compare labeled matrices after sorting rows and columns by (mapped) label."""
    if A.shape != B.shape or A.row_labels is None or B.row_labels is None:
        return False
    ra = [row_map(x) if row_map else x for x in A.row_labels]
    ca = [col_map(x) if col_map else x for x in A.col_labels]
    if sorted(ra) != sorted(B.row_labels) or sorted(ca) != sorted(B.col_labels):
        return False
    rpos = {lab: i for i, lab in enumerate(B.row_labels)}
    cpos = {lab: j for j, lab in enumerate(B.col_labels)}
    for i, lab in enumerate(ra):
        brow = B.rows[rpos[lab]]
        arow = A.rows[i]
        if any(arow[j] != brow[cpos[c]] for j, c in enumerate(ca)):
            return False
    return True


# -- exact elimination -------------------------------------------------------

def echelon(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form (Bareiss); returns (rows, pivot columns)."""
    M = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    prev = 1
    nrows = len(M)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, nrows):
            a = M[i][c]
            Mi, Mr = M[i], M[r]
            for j in range(c, ncols):
                Mi[j] = (piv * Mi[j] - a * Mr[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(A: IntegerMatrix | Sequence[Sequence[int]]) -> int:
    if isinstance(A, IntegerMatrix):
        return len(echelon(A.rows, A.ncols)[1])
    rows = [list(r) for r in A]
    return len(echelon(rows, len(rows[0]) if rows else 0)[1])


def independent_rows(A: IntegerMatrix) -> list[int]:
    """Indices of a maximal linearly independent set of rows (greedy, first-come)."""
    keep: list[int] = []
    basis: list[tuple[int, list[int]]] = []
    for i, r in enumerate(A.rows):
        v = list(r)
        for p, b in basis:
            a = v[p]
            if a:
                c = b[p]
                v = [c * x - a * y for x, y in zip(v, b)]
                g = 0
                for x in v:
                    if x:
                        g = gcd(g, x)
                if g > 1:
                    v = [x // g for x in v]
        nz = next((j for j, x in enumerate(v) if x), None)
        if nz is not None:
            keep.append(i)
            basis.append((nz, v))
    return keep


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k]), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            Ai, Ak = A[i], A[k]
            for j in range(k + 1, n):
                Ai[j] = (akk * Ai[j] - aik * Ak[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def kernel_lattice_basis(A: IntegerMatrix) -> IntegerMatrix:
    """Rows form a basis of the lattice of integer vectors x with A x = 0.

    Unimodular column operations bring A to column echelon form; the matching
    columns of the accumulated transform span the integer kernel.
    """
    m = A.ncols
    H = [list(A.column(j)) for j in range(m)]
    U = [[int(i == j) for i in range(m)] for j in range(m)]
    p = 0
    for i in range(A.nrows):
        if p == m:
            break
        while True:
            nz = [j for j in range(p, m) if H[j][i]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(H[j][i]))
            H[p], H[j0] = H[j0], H[p]
            U[p], U[j0] = U[j0], U[p]
            clean = True
            for j in range(p + 1, m):
                if H[j][i]:
                    q = H[j][i] // H[p][i]
                    H[j] = [a - q * b for a, b in zip(H[j], H[p])]
                    U[j] = [a - q * b for a, b in zip(U[j], U[p])]
                    if H[j][i]:
                        clean = False
            if clean:
                p += 1
                break
    basis = [_size_reduce(u) for u in U[p:]]
    return IntegerMatrix(tuple(map(tuple, basis)), m)


def _size_reduce(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        # cannot happen for a saturated basis vector; kept as a guard
        v = [x // g for x in v]
    return v


def nullspace_vector(cols: Sequence[Sequence[int]]) -> list[int] | None:
    """A primitive integer vector spanning the kernel of [cols], if it is 1-dimensional."""
    if not cols:
        return None
    nrows = len(cols[0])
    m = len(cols)
    # fraction-free Gauss-Jordan; rows are kept primitive so entries stay small
    R = [r for r in ([c[i] for c in cols] for i in range(nrows)) if any(r)]
    piv = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, len(R)) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        top = R[r]
        a = top[c]
        for i in range(len(R)):
            b = R[i][c]
            if i != r and b:
                row = [a * x - b * y for x, y in zip(R[i], top)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                R[i] = [x // g for x in row] if g > 1 else row
        piv.append(c)
        r += 1
        if len(piv) == m:
            break
    free = [c for c in range(m) if c not in piv]
    if len(free) != 1:
        return None
    f = free[0]
    v = [Fraction(0)] * m
    v[f] = Fraction(1)
    for i, c in enumerate(piv):
        v[c] = Fraction(-R[i][f], R[i][c])
    return primitive(v)


def primitive(v: Sequence[Fraction | int]) -> list[int]:
    """Scale to coprime integers with the first nonzero entry positive."""
    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return ints if lead > 0 else [-x for x in ints]


# -- matrices attached to the Alexander dual ---------------------------------

def _dual_columns(C: SimplicialComplex, signed: bool):
    n = C.n
    cells = table_cells((2,) * n)
    labels = []
    cols = []
    for S_mask in minimal_nonfaces(C):
        S = to_vertices(S_mask)
        rest = [v for v in range(1, n + 1) if v not in S]
        for i in itertools.product((1, 2), repeat=len(rest)):
            col = []
            for k in cells:
                if all(k[v - 1] == iv for v, iv in zip(rest, i)):
                    parity = sum(k[v - 1] - 1 for v in S) % 2
                    col.append(-1 if signed and parity else 1)
                else:
                    col.append(0)
            cols.append(tuple(col))
            labels.append((S, i))
    return cells, labels, cols


def dual_matrix_M(C: SimplicialComplex) -> IntegerMatrix:
    """0/1 matrix with a column per (minimal non-face S, i on the complement of S).

    Rows are the cells of {1,2}^n; M^T is the design matrix of the dual.
    """
    cells, labels, cols = _dual_columns(C, signed=False)
    rows = tuple(tuple(c[r] for c in cols) for r in range(len(cells)))
    return IntegerMatrix(rows, len(cols), tuple(cells), tuple(labels))


def kernel_spanning_set(C: SimplicialComplex) -> IntegerMatrix:
    """Signed version of M whose columns span the kernel of the binary design matrix."""
    cells, labels, cols = _dual_columns(C, signed=True)
    rows = tuple(tuple(c[r] for c in cols) for r in range(len(cells)))
    return IntegerMatrix(rows, len(cols), tuple(cells), tuple(labels))


def sign_normalize(K: IntegerMatrix) -> IntegerMatrix:
    """Negate odd-parity rows, then every column whose entries are negative."""
    rows = []
    for cell, r in zip(K.row_labels, K.rows):
        odd = sum(x - 1 for x in cell) % 2
        rows.append([-x for x in r] if odd else list(r))
    for j in range(K.ncols):
        if any(r[j] < 0 for r in rows):
            for r in rows:
                r[j] = -r[j]
    return IntegerMatrix(tuple(map(tuple, rows)), K.ncols, K.row_labels, K.col_labels)


def dual_row_label(label, n: int):
    """Map an M column label (S, i) to the row label (complement of S, i) of the dual's design matrix."""
    S, i = label
    return (tuple(v for v in range(1, n + 1) if v not in S), i)


# -- projection and complementary minors -------------------------------------

def project_orthogonal(A: IntegerMatrix, col: int) -> RationalMatrix:
    """Project every other column onto the hyperplane orthogonal to column ``col``."""
    a = A.column(col)
    norm = sum(x * x for x in a)
    if norm == 0:
        raise DomainError(f"column {col} is zero")
    out_cols = []
    for j in range(A.ncols):
        if j == col:
            continue
        c = A.column(j)
        f = Fraction(sum(x * y for x, y in zip(c, a)), norm)
        out_cols.append([Fraction(x) - f * y for x, y in zip(c, a)])
    rows = tuple(tuple(c[i] for c in out_cols) for i in range(A.nrows))
    return RationalMatrix(rows, A.ncols - 1)


@dataclass
class MinorRatioReport:
    holds: bool
    ratio: Fraction | None
    checked: int
    violations: list[tuple[tuple[int, ...], int, int]] = field(default_factory=list)


def complementary_minor_ratio(A: IntegerMatrix, B: IntegerMatrix) -> MinorRatioReport:
    """Check det(A_S) = +-lambda det(B_{complement of S}) over all r-subsets S."""
    r, n = A.shape
    if B.ncols != n or B.nrows != n - r:
        raise DomainError("B must be (n - r) x n when A is r x n")
    if rank(A) != r or rank(B) != n - r:
        raise DomainError("A and B must have full row rank")
    if any(sum(x * y for x, y in zip(a, b)) for a in A.rows for b in B.rows):
        raise DomainError("A B^T is not zero")
    ratio = None
    report = MinorRatioReport(True, None, 0)
    for S in itertools.combinations(range(n), r):
        comp = [j for j in range(n) if j not in S]
        da = det([[row[j] for j in S] for row in A.rows])
        db = det([[row[j] for j in comp] for row in B.rows])
        report.checked += 1
        if (da == 0) != (db == 0):
            report.violations.append((S, da, db))
            continue
        if da == 0:
            continue
        q = abs(Fraction(da, db))
        if ratio is None:
            ratio = q
        elif q != ratio:
            report.violations.append((S, da, db))
    report.ratio = ratio
    report.holds = not report.violations
    return report


def product_levels(d: Sequence[int], vertices: Sequence[int]) -> int:
    return prod(d[v - 1] for v in vertices)
