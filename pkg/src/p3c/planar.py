"""Embedded planar graphs given by a rotation system.

Vertices, edges and faces carry dense integer ids starting at 0.  Edge ``e``
owns two darts: ``2e`` runs ``edges[e][0] -> edges[e][1]`` and ``2e + 1`` runs
the other way.  Rotations list incident edge ids counterclockwise; a face is
traced with the face on the left of every dart, so the successor of dart
``u -> v`` leaves ``v`` along the edge preceding ``uv`` in the rotation of ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "EmbeddedPlanarGraph",
    "Face",
    "GraphFormatError",
    "EmbeddingError",
    "parse_graph",
    "format_graph",
    "trace_faces",
    "validate_embedding",
    "check_3_connectivity",
    "from_rotation_lists",
]


class GraphFormatError(ValueError):
    """Raised for malformed graph files; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    id: int
    # (vertex, edge) pairs in traversal order: the dart leaving `vertex` along `edge`.
    boundary: tuple[tuple[int, int], ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.boundary)

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.boundary)

    def __len__(self) -> int:
        return len(self.boundary)


@dataclass
class _Darts:
    tail: np.ndarray
    head: np.ndarray
    pos: np.ndarray  # index of the dart's edge in the rotation of its tail
    next: np.ndarray
    prev: np.ndarray
    face: np.ndarray  # face on the left of each dart
    face_ptr: np.ndarray  # CSR over faces, listing darts in boundary order
    face_darts: np.ndarray


@dataclass
class EmbeddedPlanarGraph:
    vertex_count: int
    edges: list[tuple[int, int]]
    rotation: list[list[int]]
    outer_face_hint: tuple[int, int] | None = None
    _darts: _Darts | None = field(default=None, init=False, repr=False, compare=False)
    _faces: list[Face] | None = field(default=None, init=False, repr=False, compare=False)
    _adj: dict[tuple[int, int], int] | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def faces(self) -> list[Face]:
        if self._faces is None:
            trace_faces(self)
        return self._faces

    @property
    def f(self) -> int:
        return len(self.faces)

    @property
    def darts(self) -> _Darts:
        if self._darts is None:
            trace_faces(self)
        return self._darts

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def neighbors(self, v: int) -> list[int]:
        """Neighbours of ``v`` in counterclockwise order."""
        out = []
        for e in self.rotation[v]:
            a, b = self.edges[e]
            out.append(b if a == v else a)
        return out

    def edge_id(self, u: int, v: int) -> int | None:
        if self._adj is None:
            adj = {}
            for e, (a, b) in enumerate(self.edges):
                adj[(a, b)] = e
                adj[(b, a)] = e
            self._adj = adj
        return self._adj.get((u, v))

    def adjacent(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None

    def edge_array(self) -> np.ndarray:
        return np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)

    def outer_face(self) -> int | None:
        """Face id selected by the ``o`` hint, if any."""
        if self.outer_face_hint is None:
            return None
        v, e = self.outer_face_hint
        a, b = self.edges[e]
        if v not in (a, b):
            raise EmbeddingError(f"outer face hint: vertex {v} is not an endpoint of edge {e}")
        d = 2 * e if a == v else 2 * e + 1
        return int(self.darts.face[d])

    def faces_of_vertex(self, v: int) -> list[int]:
        d = self.darts
        return [int(d.face[2 * e if self.edges[e][0] == v else 2 * e + 1]) for e in self.rotation[v]]


def from_rotation_lists(nbrs: Sequence[Sequence[int]], outer_face_hint=None) -> EmbeddedPlanarGraph:
    """Build a graph from counterclockwise neighbour lists.

    Edge ids are assigned in order of first appearance scanning vertices in
    increasing order, which keeps generated files stable.
    """
    edge_of: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int]] = []
    rotation: list[list[int]] = []
    for v, row in enumerate(nbrs):
        rot = []
        for w in row:
            key = (v, w) if v < w else (w, v)
            e = edge_of.get(key)
            if e is None:
                e = len(edges)
                edge_of[key] = e
                edges.append(key)
            rot.append(e)
        rotation.append(rot)
    g = EmbeddedPlanarGraph(len(nbrs), edges, rotation, outer_face_hint)
    validate_embedding(g)
    return g


def parse_graph(text: str) -> EmbeddedPlanarGraph:
    n = m = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    rotation: list[list[int] | None] = []
    rot_line: dict[int, int] = {}
    hint = None
    hint_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind, args = tok[0], tok[1:]
        if kind == "t":
            # node tag from a subdivision dump; informational only
            if len(args) != 3 or args[1] not in ("V", "E", "F"):
                raise GraphFormatError("tag must be 't <node> <V|E|F> <origin>'", lineno)
            continue
        try:
            vals = [int(a) for a in args]
        except ValueError:
            raise GraphFormatError(f"non-integer field in {raw.strip()!r}", lineno) from None
        if kind == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(vals) != 2 or vals[0] < 0 or vals[1] < 0:
                raise GraphFormatError("header must be 'p <n> <m>'", lineno)
            n, m = vals
            rotation = [None] * n
            continue
        if n is None:
            raise GraphFormatError("record before 'p' header", lineno)
        if kind == "e":
            if len(vals) != 2:
                raise GraphFormatError("edge must be 'e <u> <v>'", lineno)
            u, v = vals
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge endpoint out of range 0..{n - 1}", lineno)
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {u} {v} (first on line {seen[key]})", lineno)
            seen[key] = lineno
            edges.append((u, v))
        elif kind == "r":
            if not vals:
                raise GraphFormatError("rotation must be 'r <v> <e1> ...'", lineno)
            v, rot = vals[0], vals[1:]
            if not 0 <= v < n:
                raise GraphFormatError(f"rotation for unknown vertex {v}", lineno)
            if v in rot_line:
                raise GraphFormatError(f"second rotation for vertex {v}", lineno)
            rot_line[v] = lineno
            rotation[v] = rot
        elif kind == "o":
            if len(vals) != 2:
                raise GraphFormatError("outer hint must be 'o <v> <e>'", lineno)
            hint, hint_line = (vals[0], vals[1]), lineno
        else:
            raise GraphFormatError(f"unknown record type {kind!r}", lineno)
    if n is None:
        raise GraphFormatError("missing 'p' header")
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    # rotation lines may precede edge lines, so check them once everything is read
    for v, rot in enumerate(rotation):
        if rot is None:
            rot = rotation[v] = []
        line = rot_line.get(v)
        for e in rot:
            if not 0 <= e < m:
                raise GraphFormatError(f"rotation of {v} mentions unknown edge {e}", line)
            if v not in edges[e]:
                raise GraphFormatError(f"rotation of {v} mentions edge {e} not incident to it", line)
        if len(set(rot)) != len(rot):
            raise GraphFormatError(f"rotation of {v} repeats an edge", line)
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    for v in range(n):
        if len(rotation[v]) != deg[v]:
            raise GraphFormatError(
                f"rotation of {v} lists {len(rotation[v])} edges, vertex has degree {deg[v]}",
                rot_line.get(v),
            )
    if hint is not None:
        hv, he = hint
        if not (0 <= he < m and hv in edges[he]):
            raise GraphFormatError("outer hint must name a vertex and an incident edge", hint_line)
    return EmbeddedPlanarGraph(n, edges, rotation, hint)


def format_graph(g: EmbeddedPlanarGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"p {g.n} {g.m}")
    lines.extend(f"e {u} {v}" for u, v in g.edges)
    for v, rot in enumerate(g.rotation):
        lines.append("r " + " ".join(str(x) for x in (v, *rot)))
    if g.outer_face_hint is not None:
        lines.append("o {} {}".format(*g.outer_face_hint))
    return "\n".join(lines) + "\n"


def trace_faces(g: EmbeddedPlanarGraph) -> list[Face]:
    """Trace the faces of the rotation system and check Euler's formula."""
    n, m = g.n, g.m
    ends = g.edge_array()
    tail = np.empty(2 * m, dtype=np.int64)
    head = np.empty(2 * m, dtype=np.int64)
    tail[0::2], head[0::2] = ends[:, 0], ends[:, 1]
    tail[1::2], head[1::2] = ends[:, 1], ends[:, 0]
    pos = np.full(2 * m, -1, dtype=np.int64)
    out_dart: list[list[int]] = []
    for v, rot in enumerate(g.rotation):
        row = []
        for i, e in enumerate(rot):
            d = 2 * e if ends[e, 0] == v else 2 * e + 1
            if tail[d] != v or pos[d] != -1:
                raise EmbeddingError(f"edge {e} misplaced in rotation of vertex {v}")
            pos[d] = i
            row.append(d)
        out_dart.append(row)
    if m and (pos < 0).any():
        d = int(np.flatnonzero(pos < 0)[0])
        raise EmbeddingError(f"edge {d // 2} missing from rotation of vertex {tail[d]}")
    nxt = np.empty(2 * m, dtype=np.int64)
    for d in range(2 * m):
        v = head[d]
        row = out_dart[v]
        nxt[d] = row[pos[d ^ 1] - 1]
    prv = np.empty_like(nxt)
    prv[nxt] = np.arange(2 * m)
    face = np.full(2 * m, -1, dtype=np.int64)
    ptr = [0]
    order: list[int] = []
    faces: list[Face] = []
    for start in range(2 * m):
        if face[start] >= 0:
            continue
        fid = len(faces)
        bnd = []
        d = start
        while face[d] < 0:
            face[d] = fid
            order.append(d)
            bnd.append((int(tail[d]), d >> 1))
            d = int(nxt[d])
        faces.append(Face(fid, tuple(bnd)))
        ptr.append(len(order))
    connected = _is_connected(n, ends)
    if n - m + len(faces) != 2 or not connected:
        raise EmbeddingError("not a planar embedding of a connected graph")
    g._darts = _Darts(
        tail, head, pos, nxt, prv, face,
        np.asarray(ptr, dtype=np.int64), np.asarray(order, dtype=np.int64),
    )
    g._faces = faces
    return faces


def _is_connected(n: int, ends: np.ndarray) -> bool:
    if n == 0:
        return True
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in ends:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    return all(seen)


def validate_embedding(g: EmbeddedPlanarGraph) -> None:
    """Check simplicity, rotation consistency and Euler's formula."""
    seen = set()
    for e, (u, v) in enumerate(g.edges):
        if u == v:
            raise EmbeddingError(f"edge {e} is a loop")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EmbeddingError(f"edge {e} duplicates {key}")
        seen.add(key)
    if len(g.rotation) != g.n:
        raise EmbeddingError("rotation must list every vertex")
    trace_faces(g)
    for face in g._faces:
        vs = face.vertices
        if len(set(vs)) != len(vs):
            raise EmbeddingError(f"face {face.id} boundary is not a simple cycle")


def check_3_connectivity(g: EmbeddedPlanarGraph) -> bool:
    """True iff no set of at most two vertices disconnects ``g``.

    Deletes each vertex in turn and looks for an articulation point in what
    remains, which covers every pair without enumerating them.
    """
    n = g.n
    if n < 4:
        raise ValueError("graph too small")
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    if any(len(a) < 3 for a in adj):
        return False
    for x in range(n):
        if _has_cut_vertex(adj, n, skip=x):
            return False
    return True


def _has_cut_vertex(adj: list[list[int]], n: int, skip: int) -> bool:
    """Articulation-point test (iterative Tarjan) on the graph minus ``skip``."""
    root = 0 if skip != 0 else 1
    disc = [-1] * n
    low = [0] * n
    disc[skip] = -2
    timer = 0
    disc[root] = low[root] = timer
    timer += 1
    root_children = 0
    stack = [(root, -1, iter(adj[root]))]
    visited = 1
    while stack:
        u, parent, it = stack[-1]
        advanced = False
        for w in it:
            if w == skip or w == parent:
                continue
            if disc[w] == -1:
                disc[w] = low[w] = timer
                timer += 1
                visited += 1
                stack.append((w, u, iter(adj[w])))
                advanced = True
                break
            low[u] = min(low[u], disc[w])
        if advanced:
            continue
        stack.pop()
        if parent == -1:
            continue
        low[parent] = min(low[parent], low[u])
        if parent == root:
            root_children += 1
        elif low[u] >= disc[parent]:
            return True
    if visited != n - 1:
        return True
    return root_children > 1


def degree_sequence(g: EmbeddedPlanarGraph) -> list[int]:
    return [len(r) for r in g.rotation]

