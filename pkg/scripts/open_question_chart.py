"""Chart the unresolved level region for facets {12, 13, 234}.

For levels (3, 2, a, b) the rules give no answer.  Small grids are settled
by the exhaustive oracle; when that hits its cap the seeded randomized
oracle is tried, which can only find counterexamples.
"""
import argparse
import time

from unimodular.complex import from_facets
from unimodular.matrix import design_matrix
from unimodular.nonbinary import classify_d
from unimodular.oracle import NON_UNIMODULAR, OracleCapExceeded, is_unimodular_exact, is_unimodular_randomized

COMPLEX = from_facets(4, [(1, 2), (1, 3), (2, 3, 4)])


def settle(d, seed, trials):
    A = design_matrix(COMPLEX, d)
    try:
        return "U" if is_unimodular_exact(A).unimodular else "N"
    except OracleCapExceeded:
        rep = is_unimodular_randomized(A, seed, trials=trials)
        return "n" if rep.verdict == NON_UNIMODULAR else "?"


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--top", type=int, default=4, help="largest level tried for vertices 3 and 4")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=200)
    args = ap.parse_args()
    print("rows: level of vertex 3, columns: level of vertex 4, first two levels (3, 2)")
    print("U/N exact oracle, n randomized counterexample, ? undecided; bracketed letters are rule verdicts")
    header = "     " + "".join(f"{b:>7}" for b in range(2, args.top + 1))
    print(header)
    t0 = time.perf_counter()
    for a in range(2, args.top + 1):
        cells = []
        for b in range(2, args.top + 1):
            d = (3, 2, a, b)
            v = classify_d(COMPLEX, d, max_columns=0)
            if v.verdict != "Unknown":
                cells.append(f"[{v.verdict[0]}]")
            else:
                cells.append(settle(d, args.seed, args.trials))
        print(f"{a:>5}" + "".join(f"{c:>7}" for c in cells), flush=True)
    print(f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
