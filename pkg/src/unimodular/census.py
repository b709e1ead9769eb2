"""Exhaustive census of small complexes and cross-validation of the three methods."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .classify import (
    MATRIX,
    MINORS,
    STRUCTURAL,
    ClassificationError,
    classify_binary,
    recognize_nuclear,
)
from .complex import (
    SimplicialComplex,
    alexander_dual,
    canonical_form,
    enumerate_minors,
    faces,
    from_masks,
    popcount,
)
from .matrix import design_matrix, rank

FULL_VERIFY_CAP = 5
STRUCTURAL_CAP = 6
MATRIX_EXHAUSTIVE_CAP = 4
DEFAULT_SAMPLE = 100


class CensusSizeError(ValueError):
    pass


def _antichains(cands: list[int], chosen: list[int]) -> Iterator[list[int]]:
    yield chosen
    for i, s in enumerate(cands):
        rest = [t for t in cands[i + 1:] if s & t != s and s & t != t]
        yield from _antichains(rest, chosen + [s])


def enumerate_complexes(n: int, up_to_iso: bool = False, cap: int = STRUCTURAL_CAP) -> Iterator[SimplicialComplex]:
    """Every complex on [n] once (void and irrelevant included), optionally one per iso class."""
    if n < 0:
        raise CensusSizeError("n must be >= 0")
    if n > cap:
        raise CensusSizeError(f"n = {n} exceeds the census cap {cap}")
    # big sets first so that the facet lists come out in a stable order
    cands = sorted(range(1 << n), key=lambda m: (-popcount(m), m))
    seen = set()
    for ac in _antichains(cands, []):
        C = from_masks(n, ac)
        if up_to_iso:
            key = canonical_form(C)
            if key in seen:
                continue
            seen.add(key)
        yield C


@dataclass
class Disagreement:
    n: int
    facets: list[tuple[int, ...]]
    check: str
    detail: dict

    def to_json(self) -> dict:
        return {"n": self.n, "facets": [list(f) for f in self.facets], "check": self.check, "detail": self.detail}


@dataclass
class CensusReport:
    n: int
    methods: tuple[str, ...]
    seed: int
    labeled: int = 0
    up_to_iso: int = 0
    unimodular: int = 0
    matrix_checked: int = 0
    checks: dict = field(default_factory=dict)
    disagreements: list[Disagreement] = field(default_factory=list)
    timings: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "methods": list(self.methods),
            "seed": self.seed,
            "labeled": self.labeled,
            "up_to_iso": self.up_to_iso,
            "unimodular": self.unimodular,
            "matrix_checked": self.matrix_checked,
            "checks": self.checks,
            "disagreements": [d.to_json() for d in self.disagreements],
            "timings": {k: round(v, 3) for k, v in self.timings.items()},
        }

    def summary(self) -> str:
        lines = [
            f"census n={self.n} seed={self.seed} methods={','.join(self.methods)}",
            f"  {'labeled complexes':<28}{self.labeled:>10}",
            f"  {'isomorphism classes':<28}{self.up_to_iso:>10}",
            f"  {'unimodular (labeled)':<28}{self.unimodular:>10}",
            f"  {'matrix oracle runs':<28}{self.matrix_checked:>10}",
        ]
        for name, count in sorted(self.checks.items()):
            lines.append(f"  {name:<28}{count:>10}")
        for name, secs in sorted(self.timings.items()):
            lines.append(f"  {'time ' + name:<28}{secs:>9.2f}s")
        lines.append(f"  {'disagreements':<28}{len(self.disagreements):>10}")
        return "\n".join(lines)


def verify_theorem(n: int, methods: Sequence[str] = (STRUCTURAL, MINORS, MATRIX), seed: int = 0,
                   sample: int = DEFAULT_SAMPLE, closure_checks: bool = True) -> CensusReport:
    """Run the chosen methods on every labeled complex on [n] and compare.

    The matrix oracle runs on all complexes for n <= 4 and on a seeded sample
    of ``sample`` complexes above that.  Also checks that the verdict is the
    same for C and its Alexander dual, that unimodular complexes have only
    unimodular minors, and (with the matrix method) that rank A_C = #faces.
    """
    methods = tuple(methods)
    if n > (FULL_VERIFY_CAP if MATRIX in methods or MINORS in methods else STRUCTURAL_CAP):
        raise CensusSizeError(f"n = {n} is above the cap for methods {methods}")
    report = CensusReport(n, methods, seed)
    complexes = list(enumerate_complexes(n))
    report.labeled = len(complexes)
    report.up_to_iso = len({canonical_form(C) for C in complexes})
    if MATRIX in methods and n > MATRIX_EXHAUSTIVE_CAP:
        chosen = set(random.Random(seed).sample(range(len(complexes)), min(sample, len(complexes))))
    else:
        chosen = set(range(len(complexes)))
    timings = {m: 0.0 for m in methods}
    verdicts: dict[tuple, bool] = {}
    for idx, C in enumerate(complexes):
        results = {}
        for m in methods:
            if m == MATRIX and idx not in chosen:
                continue
            t0 = time.perf_counter()
            try:
                results[m] = classify_binary(C, m, seed=seed).unimodular
            except ClassificationError as exc:
                report.disagreements.append(Disagreement(n, C.facets, m, {"error": str(exc)}))
            timings[m] += time.perf_counter() - t0
        if MATRIX in results:
            report.matrix_checked += 1
        if len(set(results.values())) > 1:
            report.disagreements.append(Disagreement(n, C.facets, "methods", results))
        if results:
            verdict = next(iter(results.values()))
            verdicts[(C.n, C.masks)] = verdict
            report.unimodular += verdict
            nuclear = recognize_nuclear(C) is not None
            if nuclear != verdict:
                report.disagreements.append(Disagreement(n, C.facets, "nuclear", {"nuclear": nuclear, "verdict": verdict}))
        if MATRIX in methods and idx in chosen and n <= MATRIX_EXHAUSTIVE_CAP:
            r = rank(design_matrix(C))
            if r != len(faces(C)):
                report.disagreements.append(Disagreement(n, C.facets, "rank", {"rank": r, "faces": len(faces(C))}))
            report.checks["rank = #faces"] = report.checks.get("rank = #faces", 0) + 1
    timings = {k.lower(): v for k, v in timings.items()}
    if closure_checks:
        t0 = time.perf_counter()
        _closure_checks(complexes, verdicts, report)
        timings["closure"] = time.perf_counter() - t0
    report.timings = timings
    report.disagreements.sort(key=lambda d: (d.check, d.facets))
    return report


def _closure_checks(complexes, verdicts, report: CensusReport) -> None:
    smaller: dict[tuple, bool] = {}

    def verdict_of(M: SimplicialComplex) -> bool:
        key = (M.n, M.masks)
        if key in verdicts:
            return verdicts[key]
        if key not in smaller:
            smaller[key] = recognize_nuclear(M) is not None
        return smaller[key]

    dual_checked = minor_checked = 0
    for C in complexes:
        key = (C.n, C.masks)
        if key not in verdicts:
            continue
        D = alexander_dual(C)
        dual_checked += 1
        if verdict_of(D) != verdicts[key]:
            report.disagreements.append(Disagreement(C.n, C.facets, "duality", {"dual": D.facets}))
        if verdicts[key]:
            for R, S, M in enumerate_minors(C):
                minor_checked += 1
                if not verdict_of(M):
                    report.disagreements.append(
                        Disagreement(C.n, C.facets, "minor-closure", {"R": list(R), "S": list(S)})
                    )
                    break
    report.checks["duality pairs"] = dual_checked
    report.checks["minors of unimodular"] = minor_checked
