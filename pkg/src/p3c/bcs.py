"""Barycentric subdivision BCS(G) and its flag (dual) graph.

Node ids: G-vertices ``[0, n)``, G-edges ``[n, n+m)``, G-faces ``[n+m, N)``.
Edge ids, for a dart ``d`` of G with tail ``x`` and left face ``f``:

* ``d``          joins ``x`` and the edge node of ``d >> 1``;
* ``2m + d``     joins the edge node and ``f``;
* ``4m + d``     joins ``x`` and ``f`` (the corner of ``f`` at ``x``).

Flag ``2d`` is (tail(d), edge(d), left(d)) and flag ``2d + 1`` is
(head(d), edge(d), left(d)); these are the 4m triangular faces of BCS(G).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels as K
from .planar import EmbeddedPlanarGraph

KIND_CHARS = "VEF"


@dataclass(eq=False)
class BcsGraph:
    g: EmbeddedPlanarGraph
    n: int
    m: int
    nf: int
    # G data
    ends: np.ndarray
    tail: np.ndarray
    head: np.ndarray
    nxt: np.ndarray
    prv: np.ndarray
    dface: np.ndarray
    face_ptr: np.ndarray
    face_darts: np.ndarray
    gn_ptr: np.ndarray  # sorted neighbour lists of G
    gn_nbr: np.ndarray
    gn_edge: np.ndarray
    vf_ptr: np.ndarray  # faces at each vertex, sorted, with the corner dart
    vf_face: np.ndarray
    vf_dart: np.ndarray
    # BCS data
    bedge: np.ndarray  # (6m, 2) endpoints, low id first
    edge_flags: np.ndarray  # (6m, 2) left and right flag walking low -> high
    bptr: np.ndarray  # rotation CSR
    bnbr: np.ndarray
    bnbr_edge: np.ndarray
    flag_nbr: np.ndarray  # (4m, 3) flags across the VE, EF and VF sides
    flag_bedge: np.ndarray

    @property
    def node_count(self) -> int:
        return self.n + self.m + self.nf

    @property
    def edge_count(self) -> int:
        return 6 * self.m

    @property
    def flag_count(self) -> int:
        return 4 * self.m

    def kind(self, node: int) -> str:
        if node < self.n:
            return "V"
        if node < self.n + self.m:
            return "E"
        if node < self.node_count:
            return "F"
        raise IndexError(f"node {node} out of range")

    def origin(self, node: int) -> int:
        if node < self.n:
            return node
        if node < self.n + self.m:
            return node - self.n
        return node - self.n - self.m

    def tag(self, node: int) -> tuple[str, int]:
        return self.kind(node), self.origin(node)

    def vertex_node(self, v: int) -> int:
        return v

    def edge_node(self, e: int) -> int:
        return self.n + e

    def face_node(self, f: int) -> int:
        return self.n + self.m + f

    def neighbors(self, node: int) -> np.ndarray:
        """Neighbours in counterclockwise order."""
        return self.bnbr[self.bptr[node]: self.bptr[node + 1]]

    def edge_between(self, a: int, b: int) -> int:
        return int(K.bcs_edge(a, b, self.n, self.m, self.ends, self.dface,
                              self.vf_ptr, self.vf_face, self.vf_dart))

    def adjacent(self, a: int, b: int) -> bool:
        return self.edge_between(a, b) >= 0

    def flag_nodes(self, flag: int) -> tuple[int, int, int]:
        """(vertex, edge, face) BCS nodes of a flag."""
        d = flag >> 1
        v = self.head[d] if flag & 1 else self.tail[d]
        return int(v), self.n + (d >> 1), self.n + self.m + int(self.dface[d])

    def flags_of_edge(self, eid: int) -> tuple[int, int]:
        return int(self.edge_flags[eid, 0]), int(self.edge_flags[eid, 1])

    def g_adjacent(self, u: int, v: int) -> bool:
        return K.g_edge(u, v, self.gn_ptr, self.gn_nbr, self.gn_edge) >= 0

    def on_face(self, v: int, f: int) -> bool:
        return K.corner_dart(v, f, self.vf_ptr, self.vf_face, self.vf_dart) >= 0

    def face_size(self, f: int) -> int:
        return int(self.face_ptr[f + 1] - self.face_ptr[f])


@dataclass(eq=False)
class DualGraph:
    """One node per flag, one edge per BCS edge joining the two flags beside it."""

    flag_count: int
    edge_flags: np.ndarray  # (6m, 2): dual edge i joins these flags
    nbr: np.ndarray  # (4m, 3)
    via: np.ndarray  # (4m, 3): BCS/dual edge id of each adjacency

    @property
    def edge_count(self) -> int:
        return int(self.edge_flags.shape[0])

    def degree(self, flag: int) -> int:
        return 3


def _sorted_adjacency(n: int, ends: np.ndarray):
    m = ends.shape[0]
    src = np.concatenate([ends[:, 0], ends[:, 1]])
    dst = np.concatenate([ends[:, 1], ends[:, 0]])
    eid = np.concatenate([np.arange(m), np.arange(m)])
    order = np.lexsort((dst, src))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(ptr, src + 1, 1)
    return np.cumsum(ptr), dst[order].astype(np.int64), eid[order].astype(np.int64)


def build_bcs(g: EmbeddedPlanarGraph) -> BcsGraph:
    n, m = g.n, g.m
    dr = g.darts
    nf = len(g.faces)
    ends = g.edge_array()
    tail, head, nxt, prv, dface = dr.tail, dr.head, dr.next, dr.prev, dr.face
    darts = np.arange(2 * m, dtype=np.int64)
    e_of = darts >> 1
    nm = n + m

    gn_ptr, gn_nbr, gn_edge = _sorted_adjacency(n, ends)

    order = np.lexsort((dface, tail))
    vf_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(vf_ptr, tail + 1, 1)
    vf_ptr = np.cumsum(vf_ptr)
    vf_face = dface[order].astype(np.int64)
    vf_dart = order.astype(np.int64)

    bedge = np.empty((6 * m, 2), dtype=np.int64)
    bedge[:2 * m, 0] = tail
    bedge[:2 * m, 1] = n + e_of
    bedge[2 * m:4 * m, 0] = n + e_of
    bedge[2 * m:4 * m, 1] = nm + dface
    bedge[4 * m:, 0] = tail
    bedge[4 * m:, 1] = nm + dface

    edge_flags = np.empty((6 * m, 2), dtype=np.int64)
    edge_flags[:2 * m, 0] = 2 * darts
    edge_flags[:2 * m, 1] = 2 * (darts ^ 1) + 1
    edge_flags[2 * m:4 * m, 0] = 2 * darts
    edge_flags[2 * m:4 * m, 1] = 2 * darts + 1
    edge_flags[4 * m:, 0] = 2 * prv + 1
    edge_flags[4 * m:, 1] = 2 * darts

    flag_nbr = np.empty((4 * m, 3), dtype=np.int64)
    flag_bedge = np.empty((4 * m, 3), dtype=np.int64)
    ev, od = 2 * darts, 2 * darts + 1
    flag_nbr[ev, 0] = 2 * (darts ^ 1) + 1
    flag_bedge[ev, 0] = darts
    flag_nbr[ev, 1] = od
    flag_bedge[ev, 1] = 2 * m + darts
    flag_nbr[ev, 2] = 2 * prv + 1
    flag_bedge[ev, 2] = 4 * m + darts
    flag_nbr[od, 0] = 2 * (darts ^ 1)
    flag_bedge[od, 0] = darts ^ 1
    flag_nbr[od, 1] = ev
    flag_bedge[od, 1] = 2 * m + darts
    flag_nbr[od, 2] = 2 * nxt
    flag_bedge[od, 2] = 4 * m + nxt

    # rotations: vertices, then edges, then faces
    nodes = nm + nf
    deg = np.empty(nodes, dtype=np.int64)
    deg[:n] = 2 * np.bincount(tail, minlength=n)
    deg[n:nm] = 4
    deg[nm:] = 2 * np.diff(dr.face_ptr)
    bptr = np.zeros(nodes + 1, dtype=np.int64)
    bptr[1:] = np.cumsum(deg)
    bnbr = np.empty(12 * m, dtype=np.int64)
    bnbr_edge = np.empty(12 * m, dtype=np.int64)
    # vertex v: edge(d0), left(d0), edge(d1), ... over outgoing darts ccw
    out_darts = np.array(
        [2 * e if ends[e, 0] == v else 2 * e + 1 for v in range(n) for e in g.rotation[v]],
        dtype=np.int64,
    )
    # vertex rows are laid out back to back, two slots per outgoing dart
    slot = 2 * np.arange(out_darts.shape[0], dtype=np.int64)
    bnbr[slot] = n + (out_darts >> 1)
    bnbr_edge[slot] = out_darts
    bnbr[slot + 1] = nm + dface[out_darts]
    bnbr_edge[slot + 1] = 4 * m + out_darts
    # edge e (d = 2e from u to v): v, left(d), u, left(d ^ 1)
    eb = bptr[n:nm]
    d0 = 2 * np.arange(m, dtype=np.int64)
    bnbr[eb] = ends[:, 1]
    bnbr_edge[eb] = d0 + 1
    bnbr[eb + 1] = nm + dface[d0]
    bnbr_edge[eb + 1] = 2 * m + d0
    bnbr[eb + 2] = ends[:, 0]
    bnbr_edge[eb + 2] = d0
    bnbr[eb + 3] = nm + dface[d0 + 1]
    bnbr_edge[eb + 3] = 2 * m + d0 + 1
    # face: tail(d0), edge(d0), tail(d1), ... in boundary order
    fd = dr.face_darts
    fslot = bptr[nm] + 2 * np.arange(fd.shape[0], dtype=np.int64)
    bnbr[fslot] = tail[fd]
    bnbr_edge[fslot] = 4 * m + fd
    bnbr[fslot + 1] = n + (fd >> 1)
    bnbr_edge[fslot + 1] = 2 * m + fd

    return BcsGraph(
        g=g, n=n, m=m, nf=nf, ends=ends, tail=tail, head=head, nxt=nxt, prv=prv, dface=dface,
        face_ptr=dr.face_ptr, face_darts=fd, gn_ptr=gn_ptr, gn_nbr=gn_nbr, gn_edge=gn_edge,
        vf_ptr=vf_ptr, vf_face=vf_face, vf_dart=vf_dart, bedge=bedge, edge_flags=edge_flags,
        bptr=bptr, bnbr=bnbr, bnbr_edge=bnbr_edge, flag_nbr=flag_nbr, flag_bedge=flag_bedge,
    )


def build_dual(bcs: BcsGraph) -> DualGraph:
    return DualGraph(bcs.flag_count, bcs.edge_flags, bcs.flag_nbr, bcs.flag_bedge)


def dump_bcs(bcs: BcsGraph) -> str:
    """BCS(G) in the graph file format plus one ``t`` tag line per node."""
    lines = [f"p {bcs.node_count} {bcs.edge_count}"]
    lines.extend(f"e {a} {b}" for a, b in bcs.bedge.tolist())
    for v in range(bcs.node_count):
        rot = bcs.bnbr_edge[bcs.bptr[v]: bcs.bptr[v + 1]].tolist()
        lines.append("r " + " ".join(map(str, [v, *rot])))
    for v in range(bcs.node_count):
        lines.append(f"t {v} {bcs.kind(v)} {bcs.origin(v)}")
    return "\n".join(lines) + "\n"
