"""Static SVG drawings of G with a closed curve through each cutset.

Vertices are placed by a Tutte (barycentric) layout with the outer face
pinned to a circle.  Each cutset is drawn as a smooth closed curve through
the positions of its canonical cycle: vertices at their layout points, edges
at midpoints, inner faces at centroids, and the outer face at a point just
outside the circle.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import spsolve

from .bcs import BcsGraph, build_bcs
from .cycles import NotACutset, cycle_of_cutset
from .planar import EmbeddedPlanarGraph

log = logging.getLogger(__name__)

PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
SIZE = 600


class LayoutError(RuntimeError):
    pass


@dataclass
class Drawing:
    svg: str
    curves: int
    warnings: list[str]


def _outer_face(g: EmbeddedPlanarGraph) -> int:
    hint = g.outer_face()
    if hint is not None:
        return hint
    return max(range(g.f), key=lambda i: (len(g.faces[i]), -i))


def tutte_layout(g: EmbeddedPlanarGraph, outer: int | None = None) -> np.ndarray:
    outer = _outer_face(g) if outer is None else outer
    ring = list(dict.fromkeys(g.faces[outer].vertices))
    if len(ring) < 3:
        raise LayoutError("outer face has fewer than three vertices")
    pos = np.zeros((g.n, 2))
    for i, v in enumerate(ring):
        a = 2 * math.pi * i / len(ring)
        pos[v] = (math.cos(a), math.sin(a))
    fixed = np.zeros(g.n, dtype=bool)
    fixed[ring] = True
    free = np.flatnonzero(~fixed)
    if free.size == 0:
        return pos
    at = -np.ones(g.n, dtype=np.int64)
    at[free] = np.arange(free.size)
    rows, cols, vals = [], [], []
    rhs = np.zeros((free.size, 2))
    for i, v in enumerate(free.tolist()):
        nb = g.neighbors(v)
        rows.append(i)
        cols.append(i)
        vals.append(float(len(nb)))
        for u in nb:
            if fixed[u]:
                rhs[i] += pos[u]
            else:
                rows.append(i)
                cols.append(int(at[u]))
                vals.append(-1.0)
    a = csr_matrix((vals, (rows, cols)), shape=(free.size, free.size)).tocsc()
    sol = np.column_stack([spsolve(a, rhs[:, 0]), spsolve(a, rhs[:, 1])])
    if not np.isfinite(sol).all():
        raise LayoutError("singular layout system")
    pos[free] = sol
    return pos


def node_positions(bcs: BcsGraph, pos: np.ndarray, outer: int) -> np.ndarray:
    n, m = bcs.n, bcs.m
    out = np.zeros((bcs.node_count, 2))
    out[:n] = pos
    out[n: n + m] = (pos[bcs.ends[:, 0]] + pos[bcs.ends[:, 1]]) / 2
    for f in range(bcs.nf):
        ds = bcs.face_darts[bcs.face_ptr[f]: bcs.face_ptr[f + 1]]
        out[n + m + f] = pos[bcs.tail[ds]].mean(axis=0)
    # the outer face gets no single point; curves place it per crossing
    out[n + m + outer] = np.nan
    return out


def _curve_points(cyc: list[int], npos: np.ndarray) -> np.ndarray:
    pts = npos[cyc].copy()
    for i in range(len(cyc)):
        if np.isnan(pts[i]).any():
            a = npos[cyc[i - 1]]
            b = npos[cyc[(i + 1) % len(cyc)]]
            mid = (a + b) / 2
            r = np.linalg.norm(mid)
            direction = mid / r if r > 1e-9 else np.array([1.0, 0.0])
            pts[i] = direction * 1.18
    return pts


def _smooth_path(pts: np.ndarray, tx) -> str:
    """Closed Catmull-Rom spline through ``pts`` as cubic Bezier segments."""
    k = len(pts)
    parts = [f"M {tx(pts[0])}"]
    for i in range(k):
        p0, p1, p2, p3 = pts[i - 1], pts[i], pts[(i + 1) % k], pts[(i + 2) % k]
        c1 = p1 + (p2 - p0) / 6
        c2 = p2 - (p3 - p1) / 6
        parts.append(f"C {tx(c1)} {tx(c2)} {tx(p2)}")
    return " ".join(parts) + " Z"


def render_svg(g: EmbeddedPlanarGraph, family=(), bcs: BcsGraph | None = None) -> Drawing:
    warnings: list[str] = []
    outer = _outer_face(g)
    try:
        pos = tutte_layout(g, outer)
    except (LayoutError, RuntimeError, ValueError) as exc:
        warnings.append(f"layout failed ({exc}); drawing vertices on a circle without curves")
        pos = np.array([(math.cos(2 * math.pi * i / g.n), math.sin(2 * math.pi * i / g.n)) for i in range(g.n)])
        family = ()
    half = SIZE / 2
    scale = half / 1.3

    def tx(p) -> str:
        return f"{half + scale * p[0]:.2f},{half - scale * p[1]:.2f}"

    body = []
    for u, v in g.edges:
        a, b = tx(pos[u]).split(","), tx(pos[v]).split(",")
        body.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" stroke="#444" stroke-width="1.5"/>')
    curves = 0
    if family:
        bcs = bcs or build_bcs(g)
        npos = node_positions(bcs, pos, outer)
        for i, t in enumerate(family):
            try:
                cyc = cycle_of_cutset(bcs, t).key
            except NotACutset:
                warnings.append(f"{tuple(t)} is not a cutset; skipped")
                continue
            pts = _curve_points(list(cyc), npos)
            color = PALETTE[i % len(PALETTE)]
            body.append(f'<path d="{_smooth_path(pts, tx)}" fill="none" stroke="{color}" '
                        f'stroke-width="2" opacity="0.8"><title>{" ".join(map(str, t))}</title></path>')
            curves += 1
    for v in range(g.n):
        x, y = tx(pos[v]).split(",")
        body.append(f'<circle cx="{x}" cy="{y}" r="7" fill="white" stroke="black"/>')
        body.append(f'<text x="{x}" y="{y}" font-size="8" text-anchor="middle" dy="3">{v}</text>')
    for w in warnings:
        log.warning(w)
    svg = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">\n<rect width="100%" height="100%" fill="white"/>\n'
           + "\n".join(body) + "\n</svg>\n")
    return Drawing(svg, curves, warnings)
