"""Big frames of BCS(G) and the laminar cycle sets chosen from them.

A frame joins a vertex pole ``a`` to a face pole ``b`` by internally disjoint
induced 3-paths.  Paths follow one of three label patterns, V-E-V-F,
V-F-V-F or V-F-E-F, and may not contain a v-f-v triple with adjacent ends or
an f-v-f triple whose faces share an edge at v.  All candidate paths are
listed per vertex pole, bucketed by face pole, and buckets with at least ten
paths become maximal big frames.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels as K
from .bcs import BcsGraph
from .cycles import is_canonical, nonshiftable_mask, normalize_rows, trivial_triples
from .orientation import DualTreeIndex, cycle_table

log = logging.getLogger(__name__)

BIG = 10
MODES = ("all", "nontrivial", "nonshiftable")


@dataclass(eq=False)
class Frame:
    pole_vertex: int
    pole_face: int
    paths: np.ndarray  # (k, 2) interior nodes (x, y) of each path a-x-y-b, in rotation order at a

    @property
    def k(self) -> int:
        return int(self.paths.shape[0])

    def path(self, i: int) -> tuple[int, int, int, int]:
        x, y = self.paths[i % self.k]
        return self.pole_vertex, int(x), int(y), self.pole_face

    def pair_cycle(self, i: int, j: int) -> list[int]:
        """6-cycle a, P_i, b, reversed P_j."""
        a, xi, yi, b = self.path(i)
        _, xj, yj, _ = self.path(j)
        return [a, xi, yi, b, yj, xj]

    def to_json(self, bcs: BcsGraph) -> dict:
        return {
            "pole_vertex": int(bcs.origin(self.pole_vertex)),
            "pole_face": int(bcs.origin(self.pole_face)),
            "k": self.k,
            "paths": [[list(bcs.tag(int(v))) for v in self.path(i)] for i in range(self.k)],
        }


@dataclass
class FrameSearch:
    frames: list[Frame]
    candidate_paths: int
    warnings: list[str] = field(default_factory=list)


def find_maximal_big_frames(bcs: BcsGraph, min_paths: int = BIG) -> FrameSearch:
    if bcs.n == 4 and bcs.m == 6:
        raise ValueError("frames are undefined for K4")
    poles, ptr, paths, total = K.frame_paths(
        bcs.n, bcs.m, bcs.bptr, bcs.bnbr, bcs.ends, bcs.dface, bcs.prv, bcs.vf_ptr,
        bcs.vf_face, bcs.vf_dart, bcs.gn_ptr, bcs.gn_nbr, bcs.gn_edge, min_paths)
    frames = []
    warnings = []
    for i in range(poles.shape[0]):
        sub = paths[ptr[i]: ptr[i + 1]]
        inner = sub.ravel()
        if np.unique(inner).shape[0] != inner.shape[0]:
            # two paths through one node; keep the first of each clash
            seen: set[int] = set()
            keep = []
            for t, (x, y) in enumerate(sub.tolist()):
                if x in seen or y in seen:
                    continue
                seen.update((x, y))
                keep.append(t)
            sub = sub[keep]
            warnings.append(f"frame at poles {poles[i].tolist()} had overlapping paths")
            if sub.shape[0] < min_paths:
                continue
        frames.append(Frame(int(poles[i, 0]), int(poles[i, 1]), sub.copy()))
    for w in warnings:
        log.warning(w)
    if total > 50 * max(bcs.m, 1):
        # expected on high-degree inputs such as wheels
        warnings.append(f"candidate frame paths {total} exceed 50*m = {50 * bcs.m}")
        log.info(warnings[-1])
    return FrameSearch(frames, int(total), warnings)


def root_pair(idx: DualTreeIndex, frame: Frame) -> int:
    """Index r such that P_r and P_{r+1} form the root cycle."""
    k = frame.k
    cyc = np.array([frame.pair_cycle(i, (i + 1) % k) for i in range(k)], dtype=np.int64)
    counts = cycle_table(idx, cyc).interior
    r = int(np.argmax(counts))
    if (counts == counts[r]).sum() != 1:
        raise AssertionError("tied root cycles in a frame")
    return r


def root_cycle(idx: DualTreeIndex, frame: Frame) -> list[int]:
    r = root_pair(idx, frame)
    return frame.pair_cycle(r, (r + 1) % frame.k)


def _flag_at(bcs: BcsGraph, v: int, e: int, f: int) -> int:
    d = 2 * e if bcs.dface[2 * e] == f else 2 * e + 1
    return 2 * d if bcs.tail[d] == v else 2 * d + 1


def _fix_mids(bcs: BcsGraph, s: list[int]) -> list[int]:
    n, nm = bcs.n, bcs.n + bcs.m
    out = list(s)
    for i in range(6):
        a, mid, b = out[i - 1], out[i], out[(i + 1) % 6]
        if mid >= nm and a < n and b < n:
            e = bcs.g.edge_id(a, b)
            if e is not None:
                out[i] = n + e
    return out


def frame_cycle_selection(bcs: BcsGraph, idx: DualTreeIndex, frame: Frame, mode: str = "all",
                          v: int | None = None, trivial: set | None = None) -> np.ndarray:
    """Canonical cycles chosen from one big frame, as normalized rows.

    P is the path after the root pair; Q runs over paths at least five steps
    from P both ways.  P's edge node shifts to the endpoint inside P+Q (away
    from the root, which lies outside); Q's shifts both ways.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    k = frame.k
    if k < BIG:
        raise ValueError(f"frame has {k} paths; selection needs at least {BIG}")
    n, m = bcs.n, bcs.m
    nm = n + m
    r = root_pair(idx, frame)
    p = (r + 2) % k
    a, xp, yp, b = frame.path(p)
    rows = []
    for s in range(5, k - 4):
        j = (p + s) % k
        cyc = frame.pair_cycle(p, j)
        _, xq, yq, _ = frame.path(j)
        # P's edge node, if any, goes to the endpoint on the inner side of P+Q
        p_opts = [yp]
        if n <= yp < nm:
            e = yp - n
            tab = cycle_table(idx, [cyc])
            u0, u1 = int(bcs.ends[e, 0]), int(bcs.ends[e, 1])
            inside0 = tab.contains_flag(idx, 0, _flag_at(bcs, u0, e, xp - nm))
            p_opts = [u0 if inside0 else u1]
        q_opts = [yq]
        if n <= yq < nm:
            e = yq - n
            q_opts = [int(bcs.ends[e, 0]), int(bcs.ends[e, 1])]
        for py in p_opts:
            for qy in q_opts:
                s6 = _fix_mids(bcs, [a, xp, py, b, qy, xq])
                if len(set(s6)) != 6:
                    continue
                if not all(bcs.adjacent(s6[i], s6[(i + 1) % 6]) for i in range(6)):
                    continue
                if not is_canonical(bcs, s6):
                    continue
                rows.append(s6)
    if not rows:
        return np.zeros((0, 6), dtype=np.int64)
    out = np.unique(normalize_rows(np.asarray(rows, dtype=np.int64)), axis=0)
    return filter_mode(bcs, idx, out, mode, v, trivial)


def filter_mode(bcs: BcsGraph, idx: DualTreeIndex, rows: np.ndarray, mode: str,
                v: int | None = None, trivial: set | None = None) -> np.ndarray:
    if mode == "all" or rows.shape[0] == 0:
        return rows
    return rows[mode_mask(bcs, idx, rows, mode, v, trivial)]


def mode_mask(bcs: BcsGraph, idx: DualTreeIndex, rows: np.ndarray, mode: str,
              v: int | None = None, trivial: set | None = None) -> np.ndarray:
    """Which normalized canonical rows belong to the cutset class of ``mode``."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, 6)
    if mode == "all":
        return np.ones(rows.shape[0], dtype=np.bool_)
    if mode == "nontrivial":
        triv = trivial_triples(bcs) if trivial is None else trivial
        if not triv:
            return np.ones(rows.shape[0], dtype=np.bool_)
        return np.array([tuple(t) not in triv for t in np.sort(rows[:, 0::2], axis=1).tolist()], dtype=np.bool_)
    if mode == "nonshiftable":
        if v is None:
            raise ValueError("nonshiftable mode needs a vertex v")
        return nonshiftable_mask(bcs, idx, rows, v)
    raise ValueError(f"unknown mode {mode!r}")
