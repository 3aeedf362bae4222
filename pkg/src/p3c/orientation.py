"""Dual spanning tree index over the flags of BCS(G).

A cycle C of BCS(G) splits the flags into two sides.  Root a BFS tree of the
flag graph at the outer flag; the tree edges crossed by C are exactly the
edges of C that are tree edges, and the subtree sizes below them add up
(with a sign per crossing direction) to the number of flags on the side
that does not hold the root.  A flag is inside C iff the tree path from it
to the root crosses C an odd number of times, which is an ancestor test per
tree edge of C.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels as K
from .bcs import BcsGraph


class Relation(enum.IntEnum):
    EQUAL = K.EQUAL
    DISJOINT = K.DISJOINT
    FIRST_CONTAINS_SECOND = K.FIRST_CONTAINS
    SECOND_CONTAINS_FIRST = K.SECOND_CONTAINS
    CROSSING = K.CROSSING

    @property
    def laminar(self) -> bool:
        return self is not Relation.CROSSING


class InvalidCycle(ValueError):
    pass


@dataclass(eq=False)
class DualTreeIndex:
    bcs: BcsGraph
    outer_flag: int
    parent: np.ndarray
    parent_edge: np.ndarray  # BCS edge crossed to reach each flag from its parent
    order: np.ndarray  # BFS order
    size: np.ndarray  # flags in the subtree of each flag
    pre: np.ndarray
    post: np.ndarray
    edge_child: np.ndarray  # per BCS edge: child flag if a tree edge, else -1

    @property
    def flag_count(self) -> int:
        return int(self.parent.shape[0])

    def tree_edge(self, eid: int) -> tuple[int, int] | None:
        """(from-flag, to-flag) orientation of a BCS edge, or None for non-tree edges."""
        c = int(self.edge_child[eid])
        if c < 0:
            return None
        return int(self.parent[c]), c

    def is_ancestor(self, x: int, y: int) -> bool:
        return bool(self.pre[x] <= self.pre[y] and self.post[x] >= self.post[y])


def build_index(bcs: BcsGraph, outer_flag: int = 0) -> DualTreeIndex:
    nflag = bcs.flag_count
    if not 0 <= outer_flag < nflag:
        raise ValueError(f"outer flag {outer_flag} out of range")
    parent, pedge, order = K.bfs_tree(bcs.flag_nbr, bcs.flag_bedge, outer_flag)
    if order.shape[0] != nflag:
        raise ValueError("flag graph is not connected")
    size = K.subtree_sizes(order, parent)
    pre, post = K.pre_post(order, parent)
    edge_child = np.full(bcs.edge_count, -1, dtype=np.int64)
    kids = order[1:]
    edge_child[pedge[kids]] = kids
    return DualTreeIndex(bcs, outer_flag, parent, pedge, order, size, pre, post, edge_child)


def outer_flag_for(bcs: BcsGraph, v: int | None = None, face: int | None = None) -> int:
    """Lowest flag incident to G-vertex ``v``, else lowest flag of ``face`` (default face 0)."""
    if v is not None:
        d = np.flatnonzero(bcs.tail == v)
        return int(min(2 * d.min(), 2 * (d ^ 1).min() + 1))
    f = 0 if face is None else face
    d = np.flatnonzero(bcs.dface == f)
    return int(2 * d.min())


@dataclass(eq=False)
class CycleTable:
    """Per-cycle edge ids, bordering flags and tree data for a batch of equal-length cycles."""

    nodes: np.ndarray  # (k, L)
    eid: np.ndarray
    left: np.ndarray
    right: np.ndarray
    kids: np.ndarray  # tree-edge child flag per cycle edge, -1 if non-tree
    signed: np.ndarray  # signed subtree sum; > 0 iff the left side is inside

    def __len__(self) -> int:
        return int(self.nodes.shape[0])

    @property
    def interior(self) -> np.ndarray:
        return np.abs(self.signed)

    def inside_flags(self, i: int) -> np.ndarray:
        """Flags bordering cycle ``i`` from the inside."""
        return self.left[i] if self.signed[i] > 0 else self.right[i]

    def relation(self, idx: DualTreeIndex, i: int, j: int) -> Relation:
        return Relation(int(K.relation(self.kids[i], self.left[i], self.right[i],
                                       self.kids[j], self.left[j], self.right[j],
                                       idx.pre, idx.post)))

    def relations(self, idx: DualTreeIndex, pairs: np.ndarray) -> np.ndarray:
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        return K.relations(pairs, self.kids, self.left, self.right, idx.pre, idx.post)

    def contains_flag(self, idx: DualTreeIndex, i: int, flag: int) -> bool:
        return bool(K.flag_inside(self.kids[i], flag, idx.pre, idx.post))

    def subset(self, sel) -> "CycleTable":
        return CycleTable(self.nodes[sel], self.eid[sel], self.left[sel], self.right[sel],
                          self.kids[sel], self.signed[sel])


def cycle_table(idx: DualTreeIndex, nodes, check: bool = True) -> CycleTable:
    bcs = idx.bcs
    arr = np.asarray(nodes, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.shape[0] == 0:
        arr = arr.reshape(0, max(arr.shape[1] if arr.ndim == 2 else 0, 6))
    eid, left, right = K.cycle_sides(arr, bcs.n, bcs.m, bcs.ends, bcs.dface, bcs.vf_ptr,
                                     bcs.vf_face, bcs.vf_dart, bcs.edge_flags)
    if check and arr.shape[0]:
        if (eid < 0).any():
            i = int(np.flatnonzero((eid < 0).any(axis=1))[0])
            raise InvalidCycle(f"invalid cycle {arr[i].tolist()}: consecutive nodes not adjacent")
        srt = np.sort(arr, axis=1)
        if arr.shape[1] < 3 or (srt[:, 1:] == srt[:, :-1]).any():
            raise InvalidCycle("invalid cycle: repeated node")
    kids = K.tree_children(eid, idx.edge_child) if arr.shape[0] else eid.copy()
    signed = K.signed_counts(eid, left, idx.edge_child, idx.size) if arr.shape[0] else np.zeros(0, np.int64)
    if check and arr.shape[0] and (signed == 0).any():
        raise InvalidCycle("invalid cycle: both sides hold the root")
    return CycleTable(arr, eid, left, right, kids, signed)


def interior_face_count(idx: DualTreeIndex, cycle: Sequence[int]) -> tuple[str, int]:
    """Which side of ``cycle`` (as traversed) is the inside, and how many flags it holds."""
    t = cycle_table(idx, [list(cycle)])
    s = int(t.signed[0])
    return ("left" if s > 0 else "right"), abs(s)


def face_in_cycle(idx: DualTreeIndex, flag: int, cycle: Sequence[int]) -> bool:
    """True iff ``flag`` lies strictly inside ``cycle``.

    Flags bordering the cycle are never on it; they fall on exactly one side.
    """
    t = cycle_table(idx, [list(cycle)])
    return bool(K.flag_inside(t.kids[0], flag, idx.pre, idx.post))


def laminar_relation(idx: DualTreeIndex, c1: Sequence[int], c2: Sequence[int]) -> Relation:
    a = cycle_table(idx, [list(c1)])
    b = cycle_table(idx, [list(c2)])
    return Relation(int(K.relation(a.kids[0], a.left[0], a.right[0], b.kids[0], b.left[0],
                                   b.right[0], idx.pre, idx.post)))


def flood_fill_inside(bcs: BcsGraph, outer_flag: int, cycle: Sequence[int]) -> np.ndarray:
    """Reference answer: flags not reachable from the outer flag without crossing ``cycle``."""
    cut = np.zeros(bcs.edge_count, dtype=np.bool_)
    L = len(cycle)
    for i in range(L):
        e = bcs.edge_between(int(cycle[i]), int(cycle[(i + 1) % L]))
        if e < 0:
            raise InvalidCycle("consecutive nodes not adjacent")
        cut[e] = True
    label, _ = K.dual_components(bcs.flag_nbr, bcs.flag_bedge, cut)
    return label != label[outer_flag]
