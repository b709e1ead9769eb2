"""Time each classification method on the named forbidden complexes."""
import time

from unimodular.catalog import forbidden_catalog
from unimodular.classify import MATRIX, MINORS, STRUCTURAL, classify_binary


def main():
    print(f"{'complex':<32}{'n':>3}" + "".join(f"{m:>13}" for m in (STRUCTURAL, MINORS, MATRIX)))
    for nc, C in forbidden_catalog(max_boundary=4):
        cells = []
        for m in (STRUCTURAL, MINORS, MATRIX):
            t0 = time.perf_counter()
            v = classify_binary(C, m, seed=0)
            secs = time.perf_counter() - t0
            cells.append(f"{'N' if not v.unimodular else 'U'} {secs * 1000:8.1f}ms")
        print(f"{str(nc):<32}{C.n:>3}" + "".join(f"{c:>13}" for c in cells), flush=True)


if __name__ == "__main__":
    main()
