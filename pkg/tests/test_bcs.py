from __future__ import annotations

import numpy as np
import pytest

from p3c import generators as G
from p3c.bcs import build_bcs, build_dual, dump_bcs
from p3c.planar import parse_graph


@pytest.mark.parametrize(
    "g, nodes, edges, flags",
    [(G.k4(), 14, 36, 24), (G.cube(), 26, 72, 48), (G.wheel(5), 22, 60, 40)],
)
def test_counts(g, nodes, edges, flags):
    b = build_bcs(g)
    assert (b.node_count, b.edge_count, b.flag_count) == (nodes, edges, flags)


def test_every_flag_is_a_triangle(corpus_graph):
    b = build_bcs(corpus_graph)
    for fl in range(b.flag_count):
        v, e, f = b.flag_nodes(fl)
        assert b.adjacent(v, e) and b.adjacent(e, f) and b.adjacent(v, f)


def test_dump_is_a_triangulated_embedding(corpus_graph):
    b = build_bcs(corpus_graph)
    text = dump_bcs(b)
    tags = [ln.split() for ln in text.splitlines() if ln.startswith("t ")]
    assert len(tags) == b.node_count
    assert {t[2] for t in tags} == {"V", "E", "F"}
    h = parse_graph(text)
    assert h.n == b.node_count and h.m == b.edge_count
    assert h.f == b.flag_count
    assert all(len(f) == 3 for f in h.faces)


def test_bipartite_by_kind(w5_bcs):
    b = w5_bcs
    for a, c in b.bedge.tolist():
        assert b.kind(a) != b.kind(c)


def test_degrees(w5_bcs):
    b = w5_bcs
    deg = np.diff(b.bptr)
    assert (deg[b.n: b.n + b.m] == 4).all()
    for v in range(b.n):
        assert deg[v] == 2 * b.g.degree(v)


def test_dual_is_cubic_and_connected(w5_bcs):
    d = build_dual(w5_bcs)
    assert d.flag_count == 40 and d.edge_count == 60
    assert all(d.degree(f) == 3 for f in range(d.flag_count))
    seen, stack = {0}, [0]
    while stack:
        x = stack.pop()
        for y in d.nbr[x].tolist():
            if y not in seen:
                seen.add(y)
                stack.append(y)
    assert len(seen) == 40


def test_edge_flags_are_consistent(corpus_graph):
    b = build_bcs(corpus_graph)
    for eid in range(b.edge_count):
        l, r = b.flags_of_edge(eid)
        a, c = b.bedge[eid]
        assert l != r
        for fl in (l, r):
            assert {int(a), int(c)} <= set(b.flag_nodes(fl))
            assert eid in b.flag_bedge[fl].tolist()
