"""Acceptance criteria 1-8, each checked against the brute-force oracle.

Every criterion is a function returning ``Outcome(ok, detail)``.  The pytest
wrappers assert on it, and the conftest prints one PASS/FAIL line per
criterion at the end of the run.  ``python tests/test_acceptance.py`` runs
the same checks without pytest.
"""
from __future__ import annotations

import functools
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _brute import big_groups, brute_frame_paths  # noqa: E402

from p3c import generators as G  # noqa: E402
from p3c import oracle  # noqa: E402
from p3c.bcs import build_bcs  # noqa: E402
from p3c.cli import loglog_slope, run_bench  # noqa: E402
from p3c.cycles import enumerate_canonical_cycles, enumerate_canonical_rows, trivial_triples  # noqa: E402
from p3c.decompose import build_conflict_graph, cut_along, frame_seeds, maximal_laminar_family  # noqa: E402
from p3c.frames import find_maximal_big_frames  # noqa: E402
from p3c.orientation import (  # noqa: E402
    build_index,
    cycle_table,
    face_in_cycle,
    flood_fill_inside,
    interior_face_count,
    outer_flag_for,
)


@dataclass
class Outcome:
    ok: bool
    detail: str


RESULTS: dict[int, Outcome] = {}
TITLES = {
    1: "oracle equivalence, exhaustive",
    2: "canonical cycle bijection",
    3: "tree decompositions",
    4: "frame behavior on wheels",
    5: "separating triangles of apollonian graphs",
    6: "conflict-graph sparsity",
    7: "scaling",
    8: "orientation structures vs flood fill",
}


def criterion(num: int):
    def wrap(fn):
        @functools.wraps(fn)
        def run() -> Outcome:
            if num not in RESULTS:
                try:
                    RESULTS[num] = fn()
                except Exception as exc:  # a crash is a failure with its message
                    RESULTS[num] = Outcome(False, f"raised {type(exc).__name__}: {exc}")
            return RESULTS[num]
        run.num = num
        return run
    return wrap


def acceptance_corpus() -> dict:
    out = dict(G.corpus_small())
    for n in range(5, 13):
        for s in range(2):
            out[f"apollonian{n}_{s}"] = G.apollonian(n, seed=s)
    for s in range(50):
        out[f"reduced12_{s}"] = G.generate("random_reduced", 12, s)
    return out


@functools.cache
def corpus() -> dict:
    return acceptance_corpus()


def modes_for(g):
    yield "all", None
    yield "nontrivial", None
    for v in range(g.n):
        yield "nonshiftable", v


@criterion(1)
def criterion_1() -> Outcome:
    t0 = time.perf_counter()
    runs = 0
    for name, g in corpus().items():
        for mode, v in modes_for(g):
            res = maximal_laminar_family(g, mode, v)
            verdict = oracle.is_maximal_laminar(g, [tuple(t) for t in res.family], mode, v)
            runs += 1
            if not verdict:
                return Outcome(False, f"{name} mode={mode} v={v}: {verdict.reason} {verdict.witness}")
    dt = time.perf_counter() - t0
    return Outcome(dt < 60.0, f"{len(corpus())} graphs, {runs} runs exact in {dt:.1f} s (limit 60 s)")


@criterion(2)
def criterion_2() -> Outcome:
    for name, g in corpus().items():
        got = len(enumerate_canonical_cycles(build_bcs(g)))
        want = len(oracle.enumerate_all_3cutsets(g))
        if got != want:
            return Outcome(False, f"{name}: {got} canonical cycles vs {want} cutsets")
    for k in range(4, 10):
        want = k * (k - 3) // 2
        got = len(oracle.enumerate_all_3cutsets(G.wheel(k)))
        if got != want:
            return Outcome(False, f"wheel({k}): oracle {got} != k(k-3)/2 = {want}")
    return Outcome(True, f"{len(corpus())} graphs match; wheel(4..9) = k(k-3)/2")


@criterion(3)
def criterion_3() -> Outcome:
    graphs = list(corpus().items())
    rng = random.Random(3)
    for s in range(500):
        n = rng.randint(5, 60)
        graphs.append((f"reduced{n}_{s}", G.generate("random_reduced", n, s)))
    checked = 0
    for name, g in graphs:
        for mode, v in (("all", None), ("nontrivial", None), ("nonshiftable", s_v(g))):
            res = maximal_laminar_family(g, mode, v)
            fam = [tuple(t) for t in res.family]
            td = res.tree.to_json()
            verdict = oracle.validate_tree_decomposition(g, td, fam)
            if not verdict:
                return Outcome(False, f"{name} {mode}: {verdict.reason}")
            if any(len(e["adhesion"]) != 3 for e in td["edges"]):
                return Outcome(False, f"{name} {mode}: adhesion other than 3")
            checked += 1
    return Outcome(True, f"{checked} results on {len(graphs)} graphs valid, adhesion 3, multiset = family")


def s_v(g) -> int:
    return g.n // 2


@criterion(4)
def criterion_4() -> Outcome:
    notes, ok = [], True
    path_counts = {}
    for k in list(range(10, 31)) + [100, 500]:
        frames = find_maximal_big_frames(build_bcs(G.wheel(k))).frames
        if len(frames) != 1:
            return Outcome(False, f"wheel({k}): {len(frames)} maximal big frames")
        path_counts[k] = frames[0].k
    if all(c == k for k, c in path_counts.items()):
        notes.append("k paths: yes")
    else:
        ok = False
        bad = sorted({c // k for k, c in path_counts.items()})
        notes.append(f"k paths: NO, every wheel(k) frame has {'/'.join(f'{b}k' for b in bad)} paths "
                     "(spoke paths interleave with face paths)")
    for k in range(10, 26):
        b = build_bcs(G.wheel(k))
        idx = build_index(b, outer_flag_for(b))
        fs = frame_seeds(b, idx)
        pieces = cut_along(b, fs.seeds, idx, check=True)
        for piece in pieces:
            nbrs = [set(piece.nbr[piece.ptr[i]: piece.ptr[i + 1]].tolist()) for i in range(piece.size)]
            if big_groups(brute_frame_paths(b, nbrs, piece.origin)):
                return Outcome(False, f"wheel({k}): a piece still holds a big frame")
    notes.append("no big frame in pieces (k=10..25)")
    for k in (10, 11, 12):
        g = G.wheel(k)
        for mode, v in modes_for(g):
            fam = [tuple(t) for t in maximal_laminar_family(g, mode, v).family]
            verdict = oracle.is_maximal_laminar(g, fam, mode, v)
            if not verdict:
                return Outcome(False, f"wheel({k}) {mode} v={v}: {verdict.reason}")
    notes.append("exhaustive maximal k<=12")
    for k in (13, 20, 50, 100, 250, 500):
        g = G.wheel(k)
        fam = [tuple(t) for t in maximal_laminar_family(g).family]
        for verdict in (oracle.check_laminar_family(g, fam),
                        oracle.sample_maximality(g, fam, "all", None, samples=10_000, seed=k)):
            if not verdict:
                return Outcome(False, f"wheel({k}): {verdict.reason}")
    notes.append("spot-maximal k<=500")
    return Outcome(ok, "; ".join(notes))


@criterion(5)
def criterion_5() -> Outcome:
    rng = random.Random(5)
    for s in range(100):
        n = rng.randint(4, 60)
        g = G.apollonian(n, seed=s)
        got = sorted(tuple(t) for t in maximal_laminar_family(g).family)
        want = oracle.separating_triangles(g)
        if got != want:
            return Outcome(False, f"apollonian({n}, seed={s}): {len(got)} cutsets vs {len(want)} triangles")
    return Outcome(True, "100 graphs, family = separating triangles")


def piece_ratios(g, mode: str = "all") -> np.ndarray:
    b = build_bcs(g)
    idx = build_index(b, outer_flag_for(b, face=g.outer_face()))
    triv = trivial_triples(b) if mode == "nontrivial" else None
    fs = frame_seeds(b, idx, mode, None, triv)
    pieces = cut_along(b, fs.seeds)
    return build_conflict_graph(b, idx, pieces, fs.seeds, mode, None).sparsity()


@criterion(6)
def criterion_6() -> Outcome:
    corpus_max = max(float(piece_ratios(g).max(initial=0.0)) for g in corpus().values())
    at = {n: float(piece_ratios(G.prism_stack(n // 3)).max(initial=0.0)) for n in (1000, 3000, 10_000)}
    c = max(corpus_max, *at.values())
    ok = at[10_000] <= 2 * at[1000]
    return Outcome(ok, f"c = {c:.3f}; corpus {corpus_max:.3f}, prism n=1e3 {at[1000]:.3f}, "
                       f"3e3 {at[3000]:.3f}, 1e4 {at[10_000]:.3f} (limit {2 * at[1000]:.3f})")


@criterion(7)
def criterion_7() -> Outcome:
    maximal_laminar_family(G.prism_stack(10), check_3conn=False)  # compile kernels
    rows = run_bench("prism_stack", [1000, 3000, 10_000, 30_000, 100_000])
    slope = loglog_slope([r["n"] for r in rows], [r["seconds"] for r in rows])
    big = rows[-1]["seconds"]
    t0 = time.perf_counter()
    g = G.wheel(1999)
    res = maximal_laminar_family(g, check_3conn=False)
    wheel_s = time.perf_counter() - t0
    fam = [tuple(t) for t in res.family]
    verdicts = [oracle.check_laminar_family(g, fam),
                oracle.sample_maximality(g, fam, "all", None, samples=10_000, seed=7),
                oracle.validate_tree_decomposition(g, res.tree.to_json(), fam)]
    correct = all(verdicts)
    ok = slope <= 1.2 and big < 30.0 and wheel_s < 10.0 and correct
    return Outcome(ok, f"prism slope {slope:.3f} (<= 1.2), n=1e5 {big:.2f} s (< 30); "
                       f"wheel n=2000 {wheel_s:.2f} s (< 10), output {'correct' if correct else 'WRONG'}")


def probe_cycles(b) -> list[list[int]]:
    cycles = enumerate_canonical_rows(b).tolist()
    for fl in range(0, b.flag_count, 7):
        cycles.append(list(b.flag_nodes(fl)))
    return cycles


@criterion(8)
def criterion_8() -> Outcome:
    rng = random.Random(8)
    probes = 0
    for name, g in corpus().items():
        b = build_bcs(g)
        cycles = probe_cycles(b)
        outers = [rng.randrange(b.flag_count) for _ in range(3)]
        idxs = {o: build_index(b, o) for o in outers}
        fills: dict = {}
        for _ in range(1000):
            o = rng.choice(outers)
            ci = rng.randrange(len(cycles))
            fl = rng.randrange(b.flag_count)
            c = cycles[ci]
            if (o, ci) not in fills:
                fills[o, ci] = flood_fill_inside(b, o, c)
            ins = fills[o, ci]
            count = interior_face_count(idxs[o], c)[1]
            inside = int(ins.sum())
            if count != inside or inside + int((~ins).sum()) != b.flag_count:
                return Outcome(False, f"{name}: cycle {c} counts {count} vs flood fill {inside}")
            if face_in_cycle(idxs[o], fl, c) != bool(ins[fl]):
                return Outcome(False, f"{name}: flag {fl} in cycle {c} disagrees with flood fill")
            probes += 1
        # every flag lands on exactly one side when classified through the index
        idx = idxs[outers[0]]
        for ci in rng.sample(range(len(cycles)), min(20, len(cycles))):
            tab = cycle_table(idx, [cycles[ci]])
            inside = sum(tab.contains_flag(idx, 0, fl) for fl in range(b.flag_count))
            outside = int((~flood_fill_inside(b, outers[0], cycles[ci])).sum())
            if inside != abs(int(tab.signed[0])) or inside + outside != b.flag_count:
                return Outcome(False, f"{name}: inside {inside} + outside {outside} != {b.flag_count}")
    return Outcome(True, f"{probes} probes on {len(corpus())} graphs agree")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def summary_line(num: int) -> str:
    out = RESULTS[num]
    return f"criterion {num} [{'PASS' if out.ok else 'FAIL'}] {TITLES[num]}: {out.detail}"


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{c.num}" for c in CRITERIA])
def test_criterion(check):
    out = check()
    print(summary_line(check.num))
    assert out.ok, out.detail


if __name__ == "__main__":
    for check in CRITERIA:
        check()
        print(summary_line(check.num), flush=True)
    sys.exit(0 if all(RESULTS[c.num].ok for c in CRITERIA) else 1)
