"""Canonical and allowable 6-cycles of BCS(G).

A canonical cycle alternates G-vertices with edge or face nodes, is induced,
routes adjacent G-vertices through their edge node and is not the link of a
triangular face.  It is fixed by its three G-vertices: between ``x`` and
``y`` sits the edge node ``xy`` if they are adjacent, otherwise their only
common face.  Canonical cycles and 3-cutsets of a 3-connected plane graph
are in bijection.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels as K
from .bcs import BcsGraph
from .orientation import DualTreeIndex, cycle_table


class Kind(enum.Enum):
    CANONICAL = "canonical"
    ALLOWABLE = "allowable"
    PLAIN = "plain"


class CutsetTriple(NamedTuple):
    a: int
    b: int
    c: int

    @classmethod
    def of(cls, vs: Iterable[int]) -> "CutsetTriple":
        t = sorted(int(v) for v in vs)
        if len(t) != 3 or len(set(t)) != 3:
            raise ValueError(f"a cutset needs three distinct vertices, got {t}")
        return cls(*t)


class NotACutset(ValueError):
    pass


def normalize(nodes: Sequence[int]) -> tuple[int, ...]:
    """Least rotation or reflection of a cyclic sequence."""
    seq = [int(x) for x in nodes]
    L = len(seq)
    i = seq.index(min(seq))
    fwd = tuple(seq[(i + k) % L] for k in range(L))
    bwd = tuple(seq[(i - k) % L] for k in range(L))
    return min(fwd, bwd)


def normalize_rows(rows: np.ndarray) -> np.ndarray:
    """Row-wise :func:`normalize` for an array of 6-cycles with distinct entries."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.shape[0] == 0:
        return rows.reshape(0, 6)
    k, L = rows.shape
    start = rows.argmin(axis=1)
    steps = np.arange(L)
    fwd = rows[np.arange(k)[:, None], (start[:, None] + steps) % L]
    bwd = rows[np.arange(k)[:, None], (start[:, None] - steps) % L]
    use_bwd = bwd[:, 1] < fwd[:, 1]
    return np.where(use_bwd[:, None], bwd, fwd)


@dataclass(frozen=True)
class SixCycle:
    key: tuple[int, ...]
    kind: Kind = Kind.PLAIN

    @classmethod
    def of(cls, nodes: Sequence[int], kind: Kind = Kind.PLAIN) -> "SixCycle":
        if len(nodes) != 6:
            raise ValueError("a six-cycle needs six nodes")
        return cls(normalize(nodes), kind)

    @property
    def nodes(self) -> tuple[int, ...]:
        return self.key

    def __iter__(self):
        return iter(self.key)

    def __len__(self) -> int:
        return 6


def _nodes(c) -> tuple[int, ...]:
    return tuple(int(x) for x in (c.key if isinstance(c, SixCycle) else c))


def _require_cycle(bcs: BcsGraph, c: Sequence[int]) -> None:
    if len(c) != 6 or len(set(c)) != 6:
        raise ValueError(f"{list(c)} is not a 6-cycle")
    for i in range(6):
        if not bcs.adjacent(c[i], c[(i + 1) % 6]):
            raise ValueError(f"{list(c)} is not a cycle of BCS(G)")


def is_induced(bcs: BcsGraph, c: Sequence[int]) -> bool:
    return not any(bcs.adjacent(c[i], c[(i + s) % 6]) for i in range(6) for s in (2, 3))


def is_canonical(bcs: BcsGraph, c) -> bool:
    c = _nodes(c)
    _require_cycle(bcs, c)
    n = bcs.n
    is_v = [x < n for x in c]
    if is_v[0] == is_v[1]:
        return False
    if not all(is_v[i] != is_v[(i + 1) % 6] for i in range(6)):
        return False
    if not is_induced(bcs, c):
        return False
    s = 0 if is_v[0] else 1
    x, p, y, q, z, r = (c[(s + i) % 6] for i in range(6))
    return bool(K.canonical_check(x, p, y, q, z, r, n, bcs.m, bcs.dface, bcs.face_ptr,
                                  bcs.vf_ptr, bcs.vf_face, bcs.vf_dart)) and _mids_ok(bcs, x, p, y, q, z, r)


def _mids_ok(bcs: BcsGraph, x, p, y, q, z, r) -> bool:
    # a face between two adjacent vertices breaks the edge-usage rule
    nm = bcs.n + bcs.m
    for u, mid, w in ((x, p, y), (y, q, z), (z, r, x)):
        if mid >= nm and bcs.g_adjacent(u, w):
            return False
    return True


def _shares_edge_at(bcs: BcsGraph, f1: int, x: int, f2: int) -> bool:
    """Do faces ``f1`` and ``f2`` share an edge incident to vertex ``x``?"""
    d = K.corner_dart(x, f1, bcs.vf_ptr, bcs.vf_face, bcs.vf_dart)
    if d < 0:
        return False
    return f2 in (int(bcs.dface[d ^ 1]), int(bcs.dface[bcs.prv[d] ^ 1]))


def is_allowable(bcs: BcsGraph, c) -> bool:
    c = _nodes(c)
    _require_cycle(bcs, c)
    if not is_induced(bcs, c):
        return False
    n, nm = bcs.n, bcs.n + bcs.m
    for i in range(6):
        a, mid, b = c[i - 1], c[i], c[(i + 1) % 6]
        if mid >= nm and a < n and b < n and bcs.g_adjacent(a, b):
            return False
        if mid < n and a >= nm and b >= nm and _shares_edge_at(bcs, a - nm, mid, b - nm):
            return False
    common = set(bcs.neighbors(c[0]).tolist())
    for x in c[1:]:
        common.intersection_update(bcs.neighbors(x).tolist())
    return not common


def shifts(bcs: BcsGraph, c) -> set[SixCycle]:
    """All shifts of an allowable cycle, classified canonical or plain."""
    c = list(_nodes(c))
    n, m = bcs.n, bcs.m
    nm = n + m
    slots = []
    for i in range(6):
        a, mid, b = c[i - 1], c[i], c[(i + 1) % 6]
        if n <= mid < nm and a >= nm and b >= nm:
            e = mid - n
            slots.append((i, (int(bcs.ends[e, 0]), int(bcs.ends[e, 1]))))
    out = set()
    for choice in itertools.product(*(ends for _, ends in slots)):
        s = list(c)
        for (i, _), v in zip(slots, choice):
            s[i] = v
        for i in range(6):
            a, mid, b = s[i - 1], s[i], s[(i + 1) % 6]
            if mid >= nm and a < n and b < n:
                e = bcs.g.edge_id(a, b)
                if e is not None:
                    s[i] = n + e
        if len(set(s)) != 6 or not all(bcs.adjacent(s[i], s[(i + 1) % 6]) for i in range(6)):
            continue
        kind = Kind.CANONICAL if is_canonical(bcs, s) else Kind.PLAIN
        out.add(SixCycle.of(s, kind))
    return out


def cutset_of(c) -> CutsetTriple:
    """The three G-vertices of a canonical cycle."""
    if isinstance(c, SixCycle):
        key = c.key
        # vertices sort first, so a canonical key starts with a vertex at even slots
        return CutsetTriple.of(key[0::2])
    raise TypeError("cutset_of expects a SixCycle")


def cutset_of_nodes(bcs: BcsGraph, c: Sequence[int]) -> CutsetTriple:
    return CutsetTriple.of(x for x in c if x < bcs.n)


def candidate_cycle(bcs: BcsGraph, t: Sequence[int]) -> tuple[int, ...] | None:
    """The only 6-cycle through ``t`` that could be canonical, or None."""
    x, y, z = (int(v) for v in t)
    mids = []
    for u, w in ((x, y), (y, z), (z, x)):
        mid = K.mid_node(u, w, bcs.n, bcs.m, bcs.gn_ptr, bcs.gn_nbr, bcs.gn_edge,
                         bcs.vf_ptr, bcs.vf_face)
        if mid == -2:
            raise ValueError(f"vertices {u} and {w} share two faces; G is not 3-connected")
        if mid < 0:
            return None
        mids.append(int(mid))
    if len(set(mids)) != 3:
        return None
    return (x, mids[0], y, mids[1], z, mids[2])


def cycle_of_cutset(bcs: BcsGraph, t: Sequence[int], idx: DualTreeIndex | None = None) -> SixCycle:
    t = CutsetTriple.of(t)
    cyc = candidate_cycle(bcs, t)
    if cyc is None or not is_canonical(bcs, cyc):
        raise NotACutset(f"triple {tuple(t)} does not separate")
    return SixCycle.of(cyc, Kind.CANONICAL)


def enumerate_canonical_rows(bcs: BcsGraph, hptr=None, hnbr=None, hbcs=None) -> np.ndarray:
    """Normalized, deduplicated canonical cycles of BCS(G) or of a copy given in CSR form."""
    if hptr is None:
        hptr, hnbr, hbcs = bcs.bptr, bcs.bnbr, np.arange(bcs.node_count, dtype=np.int64)
    rows, _ = enumerate_raw(bcs, hptr, hnbr, hbcs)
    rows = normalize_rows(rows)
    if rows.shape[0] == 0:
        return rows
    return np.unique(rows, axis=0)


def enumerate_raw(bcs: BcsGraph, hptr, hnbr, hbcs) -> tuple[np.ndarray, np.ndarray]:
    """Canonical cycles of a copy, once per copy, in BCS ids and in copy ids."""
    return K.enumerate_canonical(hptr, hnbr, hbcs, bcs.n, bcs.m, bcs.gn_ptr, bcs.gn_nbr,
                                 bcs.gn_edge, bcs.dface, bcs.face_ptr, bcs.vf_ptr,
                                 bcs.vf_face, bcs.vf_dart)


def enumerate_canonical_cycles(bcs: BcsGraph, piece=None) -> list[SixCycle]:
    """Every canonical cycle of BCS(G), or of a cut piece, once each in key order."""
    if piece is None:
        rows = enumerate_canonical_rows(bcs)
    else:
        rows = enumerate_canonical_rows(bcs, piece.ptr, piece.nbr, piece.origin)
    return [SixCycle(tuple(r), Kind.CANONICAL) for r in rows.tolist()]


def trivial_triples(bcs: BcsGraph) -> set[tuple[int, int, int]]:
    """Sorted neighbourhoods of the degree-3 vertices."""
    out = set()
    for v in range(bcs.n):
        lo, hi = bcs.gn_ptr[v], bcs.gn_ptr[v + 1]
        if hi - lo == 3:
            out.add(tuple(int(x) for x in bcs.gn_nbr[lo:hi]))
    return out


def is_trivial_cutset(g_or_bcs, t: Sequence[int]) -> bool:
    t = CutsetTriple.of(t)
    if isinstance(g_or_bcs, BcsGraph):
        g = g_or_bcs.g
    else:
        g = g_or_bcs
    for w in t:
        for u in g.neighbors(w):
            if g.degree(u) == 3 and tuple(sorted(g.neighbors(u))) == tuple(t):
                return True
    return False


def nonshiftable_mask(bcs: BcsGraph, idx: DualTreeIndex, rows: np.ndarray, v: int) -> np.ndarray:
    """Vectorised :func:`is_v_nonshiftable` over canonical rows (x, p, y, q, z, r)."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, 6)
    out = np.zeros(rows.shape[0], dtype=np.bool_)
    if rows.shape[0] == 0:
        return out
    tab = cycle_table(idx, rows)
    for i in range(rows.shape[0]):
        out[i] = _nonshiftable_row(bcs, idx, tab, i, v)
    return out


def _nonshiftable_row(bcs: BcsGraph, idx: DualTreeIndex, tab, i: int, v: int) -> bool:
    c = tab.nodes[i]
    n, nm = bcs.n, bcs.n + bcs.m
    if v in c.tolist():
        return False
    # v sits on the outer side because the outer flag touches it
    kids = tab.kids[i]
    pre, post = idx.pre, idx.post
    for j in range(6):
        w = int(c[j])
        if w >= n:
            continue
        p, q = int(c[j - 1]), int(c[(j + 1) % 6])
        found = int(n <= p < nm) + int(n <= q < nm)
        if found >= 2:
            continue
        lo, hi = int(bcs.bptr[w]), int(bcs.bptr[w + 1])
        rot = bcs.bnbr[lo:hi]
        deg = hi - lo
        ip = int(np.flatnonzero(rot == p)[0])
        # left flag of w -> p is the wedge just counterclockwise of p
        e = int(bcs.bnbr_edge[lo + ip])
        wedge = bcs.edge_flags[e, 0] if w < p else bcs.edge_flags[e, 1]
        if K.flag_inside(kids, int(wedge), pre, post):
            start, stop = ip, q
        else:
            start, stop = int(np.flatnonzero(rot == q)[0]), p
        k = (start + 1) % deg
        while rot[k] != stop and found < 2:
            if n <= rot[k] < nm:
                found += 1
            k = (k + 1) % deg
        if found < 2:
            return False
    return True


def is_v_nonshiftable(bcs: BcsGraph, idx: DualTreeIndex, c, v: int) -> bool:
    """Cutset of ``c`` avoids ``v`` and each of its vertices has two neighbours away from ``v``.

    ``idx`` must be rooted at a flag incident to ``v``.
    """
    nodes = list(_nodes(c))
    if not idx.bcs.flag_nodes(idx.outer_flag)[0] == v:
        raise ValueError("index must be rooted at a flag incident to v")
    if v in nodes:
        return False
    s = 0 if nodes[0] < bcs.n else 1
    row = [nodes[(s + i) % 6] for i in range(6)]
    return bool(nonshiftable_mask(bcs, idx, np.asarray([row]), v)[0])
