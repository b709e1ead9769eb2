import itertools
import random
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOLDEN_MATRIX, all_complexes_brute, brute_circuits, brute_unimodular, sym_rank
from unimodular.catalog import disjoint_simplices, standard_complex
from unimodular.complex import from_facets
from unimodular.matrix import IntegerMatrix, design_matrix, kernel_lattice_basis, project_orthogonal
from unimodular.oracle import (
    NO_WITNESS,
    NON_UNIMODULAR,
    UNIMODULAR,
    OracleCapExceeded,
    circuits,
    is_unimodular_exact,
    is_unimodular_randomized,
    unimodular_via_minors,
)

EYE4 = [[int(i == j) for j in range(4)] for i in range(4)]


def random_matrix(rnd, rows, cols, lo=0, hi=1):
    return [[rnd.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def first_bad_lex(rows, ncols):
    """Reference for the lexicographic scan: first (r+1)-subset with a bad circuit."""
    A = sympy.Matrix(rows)
    r = A.rank()
    for U in itertools.combinations(range(ncols), r + 1):
        ns = A[:, list(U)].nullspace()
        if len(ns) != 1:
            continue
        v = ns[0]
        den = sympy.ilcm(1, *[sympy.fraction(x)[1] for x in v])
        w = [int(x * den) for x in v]
        g = 0
        for x in w:
            g = gcd(g, x)
        w = [x // g for x in w]
        if any(abs(x) > 1 for x in w):
            return tuple(j for j, x in zip(U, w) if x)
    return None


# -- circuits ------------------------------------------------------------------------

def test_circuit_of_a_row():
    (c,) = list(circuits([[1, 1]]))
    assert c.vector == (1, -1)


def test_circuit_by_cramer():
    (c,) = list(circuits([[1, 0, 1], [0, 1, 1]]))
    assert c.vector == (1, 1, -1)


def test_bipartite_incidence_circuits_are_unit():
    A = design_matrix(from_facets(2, [[1], [2]]))
    cs = list(circuits(A))
    assert cs and all(set(c.vector) <= {0, 1, -1} for c in cs)


def _circuit_set(rows, ncols):
    return {v for _, v in brute_circuits(rows, ncols)}


@given(st.lists(st.lists(st.integers(-2, 2), min_size=6, max_size=6), min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_circuits_match_brute_force(rows):
    got = {c.vector for c in circuits(rows)}
    assert got == _circuit_set(rows, 6)
    for c in circuits(rows):
        nz = [x for x in c.vector if x]
        g = 0
        for x in nz:
            g = gcd(g, x)
        assert g == 1 and nz[0] > 0
        assert tuple(j for j, x in enumerate(c.vector) if x) == c.support
        assert all(sum(a * b for a, b in zip(r, c.vector)) == 0 for r in rows)


def test_circuits_are_support_minimal_by_brute_force():
    rnd = random.Random(11)
    for _ in range(15):
        rows = random_matrix(rnd, 3, 8, -1, 2)
        A = sympy.Matrix(rows)
        for c in circuits(rows):
            supp = c.support
            for k in range(1, len(supp)):
                for sub in itertools.combinations(supp, k):
                    assert not A[:, list(sub)].nullspace()


# -- exact oracle ------------------------------------------------------------------------

def test_p4_is_not_unimodular():
    rep = is_unimodular_exact(design_matrix(standard_complex("P4")))
    assert rep.verdict == NON_UNIMODULAR
    assert abs(rep.witness.entry) >= 2


def test_identity_is_unimodular():
    assert is_unimodular_exact(EYE4).verdict == UNIMODULAR


def test_two_edges_with_a_three_level_vertex_is_unimodular():
    C = disjoint_simplices(1, 1)
    assert is_unimodular_exact(design_matrix(C, (2, 2, 2, 3))).verdict == UNIMODULAR


def test_witness_is_a_bad_kernel_vector():
    A = design_matrix(standard_complex("J2"))
    rep = is_unimodular_exact(A)
    w = rep.witness
    assert A.times(w.vector) == (0,) * A.nrows
    assert w.entry == max(w.vector, key=abs) or abs(w.entry) == max(abs(x) for x in w.vector)
    assert abs(w.entry) >= 2


@pytest.mark.parametrize("seed", range(12))
def test_lex_witness_is_scan_order_first(seed):
    rnd = random.Random(seed)
    rows = random_matrix(rnd, 3, 7, 0, 2)
    rep = is_unimodular_exact(rows)
    ref = first_bad_lex(rows, 7)
    if ref is None:
        assert rep.verdict == UNIMODULAR
    else:
        assert rep.verdict == NON_UNIMODULAR and rep.witness.support == ref


@pytest.mark.parametrize("n", range(0, 4))
def test_exact_agrees_with_minors_on_design_matrices(n):
    for C in all_complexes_brute(n):
        if C.is_void:
            continue
        A = design_matrix(C)
        assert is_unimodular_exact(A).verdict == unimodular_via_minors(A).verdict


def test_exact_agrees_with_minors_on_random_matrices():
    rnd = random.Random(2024)
    for _ in range(200):
        rows = random_matrix(rnd, rnd.randint(1, 6), rnd.randint(2, 10))
        a = is_unimodular_exact(rows).verdict
        b = unimodular_via_minors(rows).verdict
        assert a == b, rows


def test_exact_agrees_with_brute_circuits():
    rnd = random.Random(7)
    for _ in range(40):
        rows = random_matrix(rnd, rnd.randint(1, 4), rnd.randint(2, 7), -1, 2)
        expected = UNIMODULAR if brute_unimodular(rows, len(rows[0])) else NON_UNIMODULAR
        assert is_unimodular_exact(rows).verdict == expected


def test_tableau_engine_on_larger_design_matrices():
    # 32 columns: too many subsets for the plain scan
    for kind, expected in [("J1", NON_UNIMODULAR), ("J2", NON_UNIMODULAR)]:
        rep = is_unimodular_exact(design_matrix(standard_complex(kind)))
        assert rep.verdict == expected and rep.extra["engine"] == "tableau"
        assert abs(rep.witness.entry) >= 2
    C = from_facets(5, [(1, 2, 5), (2, 3, 5), (3, 4, 5), (1, 4, 5)])
    rep = is_unimodular_exact(design_matrix(C))
    assert rep.verdict == UNIMODULAR and rep.extra["engine"] == "tableau"


def test_cap_is_an_explicit_error():
    A = design_matrix(from_facets(5, [(1, 2), (1, 3), (2, 3), (4, 5)]))
    with pytest.raises(OracleCapExceeded, match="--seed"):
        is_unimodular_exact(A, cap=5)


def _unimodular_row_op(rows, rnd):
    rows = [list(r) for r in rows]
    i, j = rnd.sample(range(len(rows)), 2) if len(rows) > 1 else (0, 0)
    if i != j:
        c = rnd.choice([-2, -1, 1, 2])
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    rows[0] = [-x for x in rows[0]]
    return rows


def test_rowspace_invariance():
    rnd = random.Random(3)
    for _ in range(60):
        rows = random_matrix(rnd, rnd.randint(1, 4), rnd.randint(3, 8))
        other = rows
        for _ in range(3):
            other = _unimodular_row_op(other, rnd)
        assert is_unimodular_exact(rows).verdict == is_unimodular_exact(other).verdict


def test_column_subsets_of_unimodular_matrices_stay_unimodular():
    rnd = random.Random(4)
    A = design_matrix(from_facets(3, [(1,), (2, 3)]))
    assert is_unimodular_exact(A).verdict == UNIMODULAR
    for _ in range(40):
        cols = sorted(rnd.sample(range(A.ncols), rnd.randint(1, A.ncols)))
        assert is_unimodular_exact(A.select_columns(cols)).verdict == UNIMODULAR


def test_duality_between_matrix_and_kernel():
    rnd = random.Random(6)
    done = 0
    while done < 40:
        rows = random_matrix(rnd, rnd.randint(1, 4), rnd.randint(3, 7), -1, 1)
        if sym_rank(rows) == 0:
            continue
        K = kernel_lattice_basis(IntegerMatrix.from_rows(rows))
        if K.nrows == 0:
            continue
        assert is_unimodular_exact(rows).verdict == is_unimodular_exact(K).verdict
        done += 1


def test_projection_keeps_unimodularity():
    A = IntegerMatrix.from_rows(GOLDEN_MATRIX)
    for col in range(A.ncols):
        assert is_unimodular_exact(project_orthogonal(A, col)).verdict == UNIMODULAR


# -- minors oracle --------------------------------------------------------------------

def test_minors_on_example_matrix():
    rep = unimodular_via_minors(GOLDEN_MATRIX)
    assert rep.verdict == UNIMODULAR == is_unimodular_exact(GOLDEN_MATRIX).verdict
    assert rep.lam == 1


def test_minors_single_entry():
    rep = unimodular_via_minors([[2]])
    assert rep.verdict == UNIMODULAR and rep.lam == 2


def test_minors_on_violating_column_subset_of_j2():
    A = design_matrix(standard_complex("J2"))
    w = is_unimodular_exact(A).witness
    sub = A.select_columns(w.support)
    rep = unimodular_via_minors(sub)
    assert rep.verdict == NON_UNIMODULAR
    assert abs(rep.witness.entry) >= 2


def test_minors_cap():
    with pytest.raises(OracleCapExceeded):
        unimodular_via_minors(design_matrix(standard_complex("J2")), cap=10)


# -- randomized oracle ------------------------------------------------------------------

def test_randomized_on_identity_finds_nothing():
    rep = is_unimodular_randomized(EYE4, seed=0, trials=20)
    assert rep.verdict == NO_WITNESS and rep.trials == 20


def test_randomized_is_deterministic():
    A = design_matrix(standard_complex("J1"))
    a = is_unimodular_randomized(A, seed=3, trials=200)
    b = is_unimodular_randomized(A, seed=3, trials=200)
    assert a == b


def test_randomized_witness_lives_in_full_matrix():
    A = design_matrix(standard_complex("J2"))
    rep = is_unimodular_randomized(A, seed=0, trials=500)
    assert rep.verdict == NON_UNIMODULAR
    assert A.times(rep.witness.vector) == (0,) * A.nrows
    assert abs(rep.witness.entry) >= 2


def test_randomized_never_claims_unimodular():
    A = design_matrix(from_facets(3, [(1,), (2, 3)]))
    assert is_unimodular_randomized(A, seed=1, trials=30).verdict == NO_WITNESS


def test_randomized_rejects_zero_trials():
    with pytest.raises(ValueError):
        is_unimodular_randomized(EYE4, seed=0, trials=0)


def test_report_json():
    rep = is_unimodular_exact(design_matrix(standard_complex("P4")))
    out = rep.to_json()
    assert set(out) >= {"verdict", "method", "support", "vector", "entry"}


def _brute_tu(rows):
    m, n = len(rows), len(rows[0])
    for k in range(1, min(m, n) + 1):
        for R in itertools.combinations(range(m), k):
            for C in itertools.combinations(range(n), k):
                if abs(sympy.Matrix([[rows[i][j] for j in C] for i in R]).det()) > 1:
                    return False
    return True


def test_two_per_line_certificate_is_sound():
    import numpy as np

    from unimodular.oracle import _certified_tu

    rnd = random.Random(12)
    hits = 0
    for _ in range(200):
        rows = [[0] * 4 for _ in range(4)]
        for j in range(4):
            for i in rnd.sample(range(4), rnd.randint(0, 2)):
                rows[i][j] = rnd.choice([1, -1])
        if _certified_tu(np.array(rows, dtype=np.int8)):
            hits += 1
            assert _brute_tu(rows), rows
    assert hits > 30


def test_complete_bipartite_incidence_is_decided_exactly():
    # K_{16,4}: far too many signed sets for the general search
    A = design_matrix(from_facets(3, [(1, 2), (3,)]), (4, 4, 4))
    rep = is_unimodular_exact(A)
    assert rep.verdict == UNIMODULAR and rep.extra["engine"] == "two-per-line"
