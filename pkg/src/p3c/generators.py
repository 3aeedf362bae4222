"""Deterministic embedded 3-connected planar test graphs.

Randomised families draw from SplitMix64 (Steele, Lea & Flood 2014) so that a
(family, size, seed) triple names the same graph bytes in any language:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)                     # all arithmetic mod 2**64

Bounded draws reject values >= 2**64 - (2**64 % k) and return ``x % k``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .planar import EmbeddedPlanarGraph, from_rotation_lists, trace_faces

log = logging.getLogger(__name__)

_MASK = (1 << 64) - 1

FAMILIES = ("wheel", "prism", "prism_stack", "apollonian", "random_reduced")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        if k <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % k

    def shuffle(self, items: list) -> None:
        # Fisher-Yates from the top
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    size: int
    seed: int = 0
    deletions: int | None = None

    def build(self) -> EmbeddedPlanarGraph:
        if self.family == "wheel":
            return wheel(self.size)
        if self.family == "prism":
            return prism_stack(1) if self.size in (0, 1) else prism_stack(self.size)
        if self.family == "prism_stack":
            return prism_stack(self.size)
        if self.family == "apollonian":
            return apollonian(self.size, self.seed)
        if self.family == "random_reduced":
            d = self.deletions if self.deletions is not None else self.size // 3
            return random_reduced(self.size, self.seed, d)
        raise ValueError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")


def wheel(k: int) -> EmbeddedPlanarGraph:
    """Hub 0 surrounded by rim vertices 1..k in counterclockwise order."""
    if k < 4:
        raise ValueError("wheel needs at least 4 rim vertices")
    nbrs = [list(range(1, k + 1))]
    for i in range(1, k + 1):
        nxt = i % k + 1
        prv = (i - 2) % k + 1
        nbrs.append([nxt, 0, prv])
    return from_rotation_lists(nbrs)


def prism_stack(levels: int) -> EmbeddedPlanarGraph:
    """Concentric triangles 0..levels joined by three radial edges per gap.

    Vertex ``3*i + j`` is corner ``j`` of triangle ``i``; the maximum degree
    is 4 and every internal triangle is a nontrivial 3-cutset.
    """
    if levels < 1:
        raise ValueError("prism_stack needs at least one level")
    nbrs = []
    for i in range(levels + 1):
        for j in range(3):
            row = []
            if i < levels:
                row.append(3 * (i + 1) + j)
            row.append(3 * i + (j + 1) % 3)
            if i > 0:
                row.append(3 * (i - 1) + j)
            row.append(3 * i + (j + 2) % 3)
            nbrs.append(row)
    return from_rotation_lists(nbrs)


def octahedron() -> EmbeddedPlanarGraph:
    # poles 0 (top) and 5 (bottom) around the square 1-2-3-4
    nbrs = [
        [1, 2, 3, 4],
        [2, 0, 4, 5],
        [3, 0, 1, 5],
        [4, 0, 2, 5],
        [1, 0, 3, 5],
        [4, 3, 2, 1],
    ]
    return from_rotation_lists(nbrs)


def cube() -> EmbeddedPlanarGraph:
    # inner square 0-3 inside outer square 4-7, both counterclockwise
    nbrs = []
    for j in range(4):
        nbrs.append([j + 4, (j + 1) % 4, (j + 3) % 4])
    for j in range(4):
        nbrs.append([(j + 1) % 4 + 4, j, (j + 3) % 4 + 4])
    return from_rotation_lists(nbrs)


def k4() -> EmbeddedPlanarGraph:
    return from_rotation_lists(_K4)


# K4 as an outer triangle 0-1-2 (counterclockwise) around the centre 3
_K4 = [[1, 3, 2], [2, 3, 0], [0, 3, 1], [0, 1, 2]]


def _ccw_triangles(nbrs: list[list[int]]) -> list[tuple[int, int, int]]:
    g = from_rotation_lists(nbrs)
    out = []
    for face in g.faces:
        vs = face.vertices
        if len(vs) != 3:
            raise AssertionError("expected a triangulation")
        out.append(tuple(vs))
    return out


def _apollonian_rows(n: int, rng: SplitMix64) -> list[list[int]]:
    nbrs = [list(r) for r in _K4]
    faces = _ccw_triangles(nbrs)
    for w in range(4, n):
        i = rng.below(len(faces))
        a, b, c = faces[i]
        # face lies counterclockwise after b at a, after c at b, after a at c
        for x, after in ((a, b), (b, c), (c, a)):
            row = nbrs[x]
            row.insert(row.index(after) + 1, w)
        nbrs.append([a, b, c])
        faces[i] = (a, b, w)
        faces.append((b, c, w))
        faces.append((c, a, w))
    return nbrs


def apollonian(n: int, seed: int = 0) -> EmbeddedPlanarGraph:
    """Random Apollonian network: stack vertices into uniformly chosen faces."""
    if n < 4:
        raise ValueError("apollonian needs n >= 4")
    return from_rotation_lists(_apollonian_rows(n, SplitMix64(seed)))


def random_reduced(n: int, seed: int = 0, deletions: int = 0) -> EmbeddedPlanarGraph:
    """Apollonian network with up to ``deletions`` edges removed, staying 3-connected.

    Edges are tried in a seeded random order; a deletion is kept only when
    every face still meets the merged face in at most a vertex or a shared
    edge.  When the budget cannot be met the graph carries fewer deletions.
    """
    if n < 4:
        raise ValueError("random_reduced needs n >= 4")
    rng = SplitMix64(seed)
    nbrs = _apollonian_rows(n, rng)
    pairs = sorted({(min(u, w), max(u, w)) for u, row in enumerate(nbrs) for w in row})
    rng.shuffle(pairs)
    done = 0
    for u, w in pairs:
        if done >= deletions:
            break
        if len(nbrs[u]) <= 3 or len(nbrs[w]) <= 3:
            continue
        trial = [list(r) for r in nbrs]
        trial[u].remove(w)
        trial[w].remove(u)
        if _still_3_connected(trial, u, w):
            nbrs = trial
            done += 1
    if done < deletions:
        log.info("random_reduced(n=%d, seed=%d): only %d of %d deletions possible", n, seed, done, deletions)
    return from_rotation_lists(nbrs)


def _still_3_connected(nbrs: list[list[int]], u: int, w: int) -> bool:
    g = from_rotation_lists(nbrs)
    faces = [f.vertices for f in g.faces]
    merged = [vs for vs in faces if u in vs and w in vs]
    if len(merged) != 1:
        return False
    big = merged[0]
    big_set = set(big)
    big_edges = {frozenset(p) for p in zip(big, big[1:] + big[:1])}
    for vs in faces:
        if vs is big:
            continue
        common = big_set.intersection(vs)
        if len(common) >= 3:
            return False
        if len(common) == 2:
            pair = frozenset(common)
            if pair not in big_edges:
                return False
            if pair not in {frozenset(p) for p in zip(vs, vs[1:] + vs[:1])}:
                return False
    return True


def corpus_small() -> dict[str, EmbeddedPlanarGraph]:
    """Named small graphs used across the test-suite."""
    out = {"K4": k4(), "prism": prism_stack(1), "octahedron": octahedron(), "cube": cube()}
    for k in range(4, 10):
        out[f"W{k}"] = wheel(k)
    return out


def generate(family: str, size: int, seed: int = 0, deletions: int | None = None) -> EmbeddedPlanarGraph:
    g = GeneratorSpec(family, size, seed, deletions).build()
    trace_faces(g)
    return g
