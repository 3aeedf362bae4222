"""End-to-end pipeline: frames, cutting, conflict graph, greedy MIS, tree decomposition."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels as K
from .bcs import BcsGraph, build_bcs
from .cycles import CutsetTriple, Kind, SixCycle, enumerate_raw, normalize_rows, trivial_triples
from .frames import MODES, Frame, find_maximal_big_frames, frame_cycle_selection, mode_mask
from .orientation import DualTreeIndex, build_index, cycle_table, outer_flag_for
from .planar import EmbeddedPlanarGraph, check_3_connectivity

log = logging.getLogger(__name__)


class NotLaminar(ValueError):
    pass


class InputError(ValueError):
    """The input graph violates a precondition (not 3-connected, bad vertex...)."""


def _empty_rows() -> np.ndarray:
    return np.zeros((0, 6), dtype=np.int64)


# ---------------------------------------------------------------------------
# cutting
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class CutPiece:
    id: int
    flags: np.ndarray
    ptr: np.ndarray  # local CSR adjacency
    nbr: np.ndarray
    origin: np.ndarray  # BCS node of each local node

    @property
    def size(self) -> int:
        return int(self.origin.shape[0])


@dataclass(eq=False)
class Pieces:
    """All pieces as one disjoint union H of node copies."""

    label: np.ndarray  # piece of each flag
    count: int
    hptr: np.ndarray
    hnbr: np.ndarray
    hbcs: np.ndarray  # BCS node of each copy, grouped by piece
    hpiece: np.ndarray
    start: np.ndarray  # copies of piece i are start[i]:start[i+1]

    @property
    def node_total(self) -> int:
        return int(self.hbcs.shape[0])

    def sizes(self) -> np.ndarray:
        return np.diff(self.start)

    def flag_counts(self) -> np.ndarray:
        return np.bincount(self.label, minlength=self.count)

    def piece(self, i: int) -> CutPiece:
        lo, hi = int(self.start[i]), int(self.start[i + 1])
        ptr = self.hptr[lo: hi + 1] - self.hptr[lo]
        nbr = self.hnbr[self.hptr[lo]: self.hptr[hi]] - lo
        return CutPiece(i, np.flatnonzero(self.label == i), ptr, nbr, self.hbcs[lo:hi].copy())

    def __len__(self) -> int:
        return self.count

    def __iter__(self):
        return (self.piece(i) for i in range(self.count))


def cycle_edge_mask(bcs: BcsGraph, rows: np.ndarray) -> np.ndarray:
    cut = np.zeros(bcs.edge_count, dtype=np.bool_)
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, 6)
    if rows.shape[0]:
        eid, _, _ = K.cycle_sides(rows, bcs.n, bcs.m, bcs.ends, bcs.dface, bcs.vf_ptr,
                                  bcs.vf_face, bcs.vf_dart, bcs.edge_flags)
        if (eid < 0).any():
            raise ValueError("cycle uses a missing BCS edge")
        cut[eid.ravel()] = True
    return cut


def cut_along(bcs: BcsGraph, rows, idx: DualTreeIndex | None = None, check: bool = False,
              link_cut_edges: bool = True) -> Pieces:
    """Split BCS(G) along every edge of the given cycles.

    Each piece is a dual component together with every node and edge that
    touches one of its flags; boundary nodes are copied into each piece they
    touch.  With ``link_cut_edges`` a cut edge is also copied into any piece
    that holds both of its endpoints.
    """
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, 6)
    if check and rows.shape[0] > 1:
        idx = idx or build_index(bcs, 0)
        tab = cycle_table(idx, rows)
        pairs = K.shared_node_pairs(rows, bcs.node_count, 2)
        rel = tab.relations(idx, pairs)
        bad = np.flatnonzero(rel == K.CROSSING)
        if bad.size:
            i, j = pairs[bad[0]]
            raise NotLaminar(f"cycles {rows[i].tolist()} and {rows[j].tolist()} cross")
    cut = cycle_edge_mask(bcs, rows)
    label, ncomp = K.dual_components(bcs.flag_nbr, bcs.flag_bedge, cut)
    N = bcs.node_count
    nflag = bcs.flag_count
    fl = np.arange(nflag, dtype=np.int64)
    d = fl >> 1
    fv = np.where(fl & 1, bcs.head[d], bcs.tail[d])
    fe = bcs.n + (d >> 1)
    ff = bcs.n + bcs.m + bcs.dface[d]
    node_codes = np.unique(np.concatenate([label * N + fv, label * N + fe, label * N + ff]))
    hbcs = node_codes % N
    hpiece = node_codes // N
    start = np.searchsorted(hpiece, np.arange(ncomp + 1))
    E = bcs.edge_count
    edge_codes = np.unique((label[:, None] * E + bcs.flag_bedge).ravel())
    if link_cut_edges and cut.any():
        extra = _linked_cut_edges(bcs, np.flatnonzero(cut), node_codes, hpiece, hbcs, N, E)
        if extra.size:
            edge_codes = np.union1d(edge_codes, extra)
    ep = edge_codes // E
    ee = edge_codes % E
    hu = np.searchsorted(node_codes, ep * N + bcs.bedge[ee, 0])
    hw = np.searchsorted(node_codes, ep * N + bcs.bedge[ee, 1])
    src = np.concatenate([hu, hw])
    dst = np.concatenate([hw, hu])
    order = np.argsort(src, kind="stable")
    hptr = np.zeros(node_codes.shape[0] + 1, dtype=np.int64)
    np.add.at(hptr, src + 1, 1)
    hptr = np.cumsum(hptr)
    return Pieces(label, int(ncomp), hptr, dst[order].astype(np.int64), hbcs.astype(np.int64),
                  hpiece.astype(np.int64), start.astype(np.int64))


def _linked_cut_edges(bcs, cut_ids, node_codes, hpiece, hbcs, N, E) -> np.ndarray:
    # pieces holding each BCS node, node-major
    by_node = np.lexsort((hpiece, hbcs))
    nptr = np.searchsorted(hbcs[by_node], np.arange(N + 1))
    out = []
    for e in cut_ids.tolist():
        u, w = int(bcs.bedge[e, 0]), int(bcs.bedge[e, 1])
        if nptr[u + 1] - nptr[u] > nptr[w + 1] - nptr[w]:
            u, w = w, u
        for t in range(nptr[u], nptr[u + 1]):
            p = int(hpiece[by_node[t]])
            code = p * N + w
            i = np.searchsorted(node_codes, code)
            if i < node_codes.shape[0] and node_codes[i] == code:
                out.append(p * E + e)
    return np.asarray(out, dtype=np.int64)


# ---------------------------------------------------------------------------
# conflict graph
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ConflictGraph:
    rows: np.ndarray  # (N, 6) normalized canonical cycles in ascending key order
    edges: np.ndarray  # (E, 2) crossing pairs i < j
    eligible: np.ndarray
    seeds: np.ndarray  # bool: selected up front (frame cycles)
    piece: np.ndarray  # first piece that reported each cycle, -1 for seeds only
    piece_nodes: np.ndarray  # per piece: cycles found there
    piece_edges: np.ndarray  # per piece: crossing pairs found there
    piece_sizes: np.ndarray

    @property
    def node_count(self) -> int:
        return int(self.rows.shape[0])

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @property
    def nodes(self) -> list[SixCycle]:
        return [SixCycle(tuple(r), Kind.CANONICAL) for r in self.rows.tolist()]

    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.node_count
        src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        dst = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        order = np.argsort(src, kind="stable")
        ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(ptr, src + 1, 1)
        return np.cumsum(ptr), dst[order].astype(np.int64)

    def sparsity(self) -> np.ndarray:
        """(cycles + crossing pairs) / copy count, per piece."""
        sizes = np.maximum(self.piece_sizes, 1)
        return (self.piece_nodes + self.piece_edges) / sizes


def build_conflict_graph(bcs: BcsGraph, idx: DualTreeIndex, pieces: Pieces, seeds=None,
                         mode: str = "all", v: int | None = None) -> ConflictGraph:
    seeds = _empty_rows() if seeds is None else np.asarray(seeds, dtype=np.int64).reshape(-1, 6)
    raw, rawh = enumerate_raw(bcs, pieces.hptr, pieces.hnbr, pieces.hbcs)
    norm = normalize_rows(raw)
    both = np.concatenate([seeds, norm]) if seeds.shape[0] else norm
    if both.shape[0]:
        rows, inv = np.unique(both, axis=0, return_inverse=True)
        inv = inv.ravel()
    else:
        rows, inv = _empty_rows(), np.zeros(0, dtype=np.int64)
    seed_ids = inv[: seeds.shape[0]]
    found_ids = inv[seeds.shape[0]:]
    raw_piece = pieces.hpiece[rawh[:, 0]] if raw.shape[0] else np.zeros(0, dtype=np.int64)

    local = K.shared_node_pairs(rawh, pieces.node_total, 2) if raw.shape[0] > 1 else np.zeros((0, 2), np.int64)
    gp = np.sort(found_ids[local], axis=1) if local.shape[0] else np.zeros((0, 2), np.int64)
    keep = gp[:, 0] != gp[:, 1]
    gp, local = gp[keep], local[keep]
    edges = np.zeros((0, 2), dtype=np.int64)
    piece_edges = np.zeros(pieces.count, dtype=np.int64)
    if gp.shape[0]:
        tab = cycle_table(idx, rows, check=False)
        uniq = np.unique(gp, axis=0)
        rel = tab.relations(idx, uniq)
        crossing = rel == K.CROSSING
        edges = uniq[crossing]
        # per-piece counts for the sparsity statistic
        code = gp[:, 0] * rows.shape[0] + gp[:, 1]
        ucode = uniq[:, 0] * rows.shape[0] + uniq[:, 1]
        rel_all = crossing[np.searchsorted(ucode, code)]
        lp = raw_piece[local[:, 0]]
        pc = np.unique(np.stack([lp[rel_all], code[rel_all]], axis=1), axis=0)
        piece_edges = np.bincount(pc[:, 0], minlength=pieces.count) if pc.shape[0] else piece_edges
    piece_nodes = np.bincount(raw_piece, minlength=pieces.count)
    piece_of = np.full(rows.shape[0], -1, dtype=np.int64)
    if found_ids.shape[0]:
        order = np.argsort(found_ids, kind="stable")
        fi = found_ids[order]
        firsts = np.concatenate([[True], fi[1:] != fi[:-1]])
        piece_of[fi[firsts]] = raw_piece[order][firsts]
    seed_mask = np.zeros(rows.shape[0], dtype=np.bool_)
    seed_mask[seed_ids] = True
    eligible = mode_mask(bcs, idx, rows, mode, v) if rows.shape[0] else np.zeros(0, np.bool_)
    eligible |= seed_mask
    return ConflictGraph(rows, edges.astype(np.int64), eligible, seed_mask, piece_of,
                         piece_nodes.astype(np.int64), np.asarray(piece_edges, dtype=np.int64),
                         pieces.sizes().astype(np.int64))


def greedy_mis(cg: ConflictGraph, eligible=None, preselected=None) -> np.ndarray:
    """Greedy maximal independent set over eligible nodes in key order, as a mask.

    Preselected nodes are admitted first (greedily among themselves, should
    any of them conflict).
    """
    n = cg.node_count
    if n == 0:
        return np.zeros(0, dtype=np.bool_)
    elig = cg.eligible if eligible is None else np.asarray(eligible, dtype=np.bool_)
    pre = np.zeros(n, dtype=np.bool_) if preselected is None else np.asarray(preselected, dtype=np.bool_)
    ptr, nbr = cg.adjacency()
    none = np.zeros(n, dtype=np.bool_)
    if pre.any():
        seed = K.greedy_mis(n, ptr, nbr, pre, none)
        if (seed != pre).any():
            log.warning("dropped %d preselected cycles that cross earlier ones", int((pre & ~seed).sum()))
        pre = seed
    return K.greedy_mis(n, ptr, nbr, elig, pre)


# ---------------------------------------------------------------------------
# tree decomposition
# ---------------------------------------------------------------------------


@dataclass
class TreeDecomposition:
    bags: list[list[int]]
    edges: list[tuple[int, int, tuple[int, int, int]]]  # (child bag, parent bag, adhesion)
    cycle_bag: list[int]  # bag of each family cycle; bag 0 is the outer bag

    def to_json(self) -> dict:
        return {
            "bags": self.bags,
            "edges": [{"u": u, "w": w, "adhesion": list(a)} for u, w, a in self.edges],
        }


def build_tree_decomposition(g: EmbeddedPlanarGraph, bcs: BcsGraph, idx: DualTreeIndex,
                             rows) -> TreeDecomposition:
    """Bags for a laminar family of canonical cycles (bag 0 is the outside).

    Each cycle's parent is the innermost family cycle strictly containing it,
    found from per-edge nested chains and "same parent" unions.
    """
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, 6)
    k = rows.shape[0]
    n = g.n
    if k == 0:
        return TreeDecomposition([list(range(n))], [], [])
    tab = cycle_table(idx, rows)
    count = tab.interior
    inflag = np.where(tab.signed[:, None] > 0, tab.left, tab.right)
    cut = np.zeros(bcs.edge_count, dtype=np.bool_)
    cut[tab.eid.ravel()] = True
    label, ncomp = K.dual_components(bcs.flag_nbr, bcs.flag_bedge, cut)

    cyc = np.repeat(np.arange(k), 6)
    eid = tab.eid.ravel()
    inf = inflag.ravel()
    cnt = count[cyc]
    order = np.lexsort((-cnt, inf, eid))
    cyc, eid, inf, cnt = cyc[order], eid[order], inf[order], cnt[order]
    L = cyc.shape[0]
    same_list = (eid[1:] == eid[:-1]) & (inf[1:] == inf[:-1])
    if ((cnt[1:] == cnt[:-1]) & same_list).any():
        raise NotLaminar("two nested family cycles hold the same number of flags")
    # direct parents: predecessor in a nested list
    OUT = k + ncomp  # the outer bag as a union-find node
    direct = np.full(k + ncomp + 1, -1, dtype=np.int64)
    succ = np.flatnonzero(same_list) + 1
    _assign(direct, cyc[succ], cyc[succ - 1])
    first = np.concatenate([[True], ~same_list])
    last = np.concatenate([~same_list, [True]])
    # innermost cycle of a list is the parent of the component just inside it
    _assign(direct, k + label[inf[last]], cyc[last])
    _assign(direct, np.array([k + label[idx.outer_flag]]), np.array([OUT]))
    # same-parent relations between outermost cycles and the outside components
    heads = np.flatnonzero(first)
    h_eid = eid[heads]
    two = np.concatenate([h_eid[1:] == h_eid[:-1], [False]])
    ua = [cyc[heads[two]], cyc[heads[np.flatnonzero(two) + 1]]]
    single = np.ones(heads.shape[0], dtype=np.bool_)
    single[two] = False
    single[np.flatnonzero(two) + 1] = False
    sh = heads[single]
    ef = bcs.edge_flags[eid[sh]]
    other = np.where(ef[:, 0] == inf[sh], ef[:, 1], ef[:, 0])
    ub = [cyc[sh], k + label[other]]
    src = np.concatenate([ua[0], ub[0]])
    dst = np.concatenate([ua[1], ub[1]])
    tot = k + ncomp + 1
    adj = coo_matrix((np.ones(src.shape[0]), (src, dst)), shape=(tot, tot))
    _, cls = connected_components(adj, directed=False)
    cls_parent = np.full(tot, -1, dtype=np.int64)
    members = np.flatnonzero(direct >= 0)
    cls_parent[cls[members]] = direct[members]
    if (cls_parent[cls[members]] != direct[members]).any():
        raise NotLaminar("inconsistent parent cycles; the family is not laminar")
    parent = np.where(direct >= 0, direct, cls_parent[cls])
    cparent = parent[:k]
    if (cparent < 0).any():
        raise NotLaminar("could not place every family cycle in the nesting tree")
    if (cparent == np.arange(k)).any():
        raise NotLaminar("a family cycle is its own parent")
    # bag ids: 0 outer, i + 1 for cycle i
    bag_of = np.where(cparent == OUT, 0, cparent + 1)
    comp_parent = parent[k: k + ncomp]
    comp_bag = np.where(comp_parent == OUT, 0, comp_parent + 1)
    comp_bag[comp_parent < 0] = 0
    on_cycle = np.zeros(n, dtype=np.bool_)
    verts = rows[:, 0::2]
    on_cycle[verts.ravel()] = True
    pairs_b = [np.repeat(np.arange(1, k + 1), 3), np.repeat(bag_of, 3)]
    pairs_v = [verts.ravel(), verts.ravel()]
    off = np.flatnonzero(~on_cycle)
    if off.size:
        # any flag at the vertex: flag 2d for its first outgoing dart
        d0 = np.full(n, -1, dtype=np.int64)
        d0[bcs.tail[::-1]] = np.arange(2 * bcs.m)[::-1]
        pairs_b.append(comp_bag[label[2 * d0[off]]])
        pairs_v.append(off)
    pb = np.concatenate(pairs_b)
    pv = np.concatenate(pairs_v)
    code = np.unique(pb * n + pv)
    bag_ids = code // n
    bag_vs = code % n
    bptr = np.searchsorted(bag_ids, np.arange(k + 2))
    bags = [bag_vs[bptr[i]: bptr[i + 1]].tolist() for i in range(k + 1)]
    edges = [(i + 1, int(bag_of[i]), tuple(int(x) for x in np.sort(verts[i]))) for i in range(k)]
    return TreeDecomposition(bags, edges, list(range(1, k + 1)))


def _assign(direct: np.ndarray, who: np.ndarray, parent: np.ndarray) -> None:
    who = np.asarray(who, dtype=np.int64)
    parent = np.asarray(parent, dtype=np.int64)
    cur = direct[who]
    clash = (cur >= 0) & (cur != parent)
    if clash.any():
        i = int(np.flatnonzero(clash)[0])
        raise NotLaminar(f"node {int(who[i])} has two parents {int(cur[i])} and {int(parent[i])}")
    direct[who] = parent
    if (direct[who] != parent).any():
        raise NotLaminar("a node received two different parents")


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


@dataclass
class FrameSeeds:
    frames: list[Frame]
    seeds: np.ndarray  # unique normalized rows chosen from all big frames
    source: list[int]  # frame index of each seed row
    candidate_paths: int = 0


def frame_seeds(bcs: BcsGraph, idx: DualTreeIndex, mode: str = "all", v: int | None = None,
                trivial: set | None = None) -> FrameSeeds:
    """Find the maximal big frames and pool their selected cycles S."""
    if bcs.n == 4 and bcs.m == 6:
        return FrameSeeds([], _empty_rows(), [])
    search = find_maximal_big_frames(bcs)
    parts, src = [], []
    for i, fr in enumerate(search.frames):
        sel = frame_cycle_selection(bcs, idx, fr, mode, v, trivial)
        parts.append(sel)
        src.extend([i] * sel.shape[0])
    seeds = np.concatenate(parts) if parts else _empty_rows()
    if seeds.shape[0]:
        seeds, first = np.unique(seeds, axis=0, return_index=True)
        src = [src[i] for i in first.tolist()]
    return FrameSeeds(search.frames, seeds, src, search.candidate_paths)


@dataclass
class DecompositionResult:
    mode: str
    v: int | None
    family: list[CutsetTriple]
    cycles: np.ndarray  # normalized rows, same order as family
    provenance: list[str]
    tree: TreeDecomposition
    stats: dict = field(default_factory=dict)
    frames: list[Frame] = field(default_factory=list)

    def to_json(self, timing: bool = False) -> dict:
        out: dict = {"mode": self.mode}
        if self.v is not None:
            out["vertex_v"] = self.v
        out["cutsets"] = [list(t) for t in self.family]
        out["tree"] = self.tree.to_json()
        stats = {k: v for k, v in self.stats.items() if k != "runtime_ms" or timing}
        out["stats"] = stats
        return out


def maximal_laminar_family(g: EmbeddedPlanarGraph, mode: str = "all", v: int | None = None,
                           check_3conn: bool = True) -> DecompositionResult:
    t0 = time.perf_counter()
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    if (mode == "nonshiftable") != (v is not None):
        raise ValueError("a vertex v is required in nonshiftable mode and only there")
    if v is not None and not 0 <= v < g.n:
        raise InputError(f"vertex {v} not in graph")
    if g.n < 4:
        raise InputError("graph too small")
    if check_3conn and not check_3_connectivity(g):
        raise InputError("graph is not 3-connected")
    bcs = build_bcs(g)
    hint = g.outer_face()
    outer = outer_flag_for(bcs, v=v, face=hint)
    idx = build_index(bcs, outer)
    trivial = trivial_triples(bcs) if mode == "nontrivial" else None

    fs = frame_seeds(bcs, idx, mode, v, trivial)
    frames, seeds, seed_src = fs.frames, fs.seeds, fs.source
    pieces = cut_along(bcs, seeds)
    cg = build_conflict_graph(bcs, idx, pieces, seeds, mode, v)
    chosen = greedy_mis(cg, cg.eligible, cg.seeds)
    rows = cg.rows[chosen]
    seed_of = {tuple(r): s for r, s in zip(seeds.tolist(), seed_src)}
    prov = []
    for i, r in zip(np.flatnonzero(chosen).tolist(), rows.tolist()):
        s = seed_of.get(tuple(r))
        prov.append(f"frame:{s}" if s is not None else f"piece:{int(cg.piece[i])}")
    family = [CutsetTriple.of(r[0::2]) for r in rows.tolist()]
    tree = build_tree_decomposition(g, bcs, idx, rows)
    stats = {
        "frames": len(frames),
        "pieces": pieces.count,
        "conflict_nodes": cg.node_count,
        "conflict_edges": cg.edge_count,
        "frame_cycles": int(seeds.shape[0]),
        "candidate_frame_paths": fs.candidate_paths,
        "runtime_ms": round((time.perf_counter() - t0) * 1000.0, 3),
    }
    return DecompositionResult(mode, v, family, rows, prov, tree, stats, frames)
