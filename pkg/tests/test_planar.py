from __future__ import annotations

import networkx as nx
import pytest

from p3c import generators as G
from p3c.planar import (
    EmbeddingError,
    GraphFormatError,
    check_3_connectivity,
    format_graph,
    from_rotation_lists,
    parse_graph,
    trace_faces,
)

K4_TEXT = """\
# K4
p 4 6
e 0 1
e 0 2
e 0 3
e 1 2
e 2 3
e 3 1
r 0 0 1 2
r 1 0 5 3
r 2 1 3 4
r 3 2 4 5
"""


def test_parse_k4():
    g = parse_graph(K4_TEXT)
    assert (g.n, g.m, g.f) == (4, 6, 4)
    assert all(len(f) == 3 for f in g.faces)


def test_round_trip_wheel():
    g = G.wheel(5)
    h = parse_graph(format_graph(g))
    assert (h.n, h.m) == (6, 10)
    assert h.edges == g.edges and h.rotation == g.rotation


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("p 2 1\ne 1 1\n", 2),
        ("e 0 1\n", 1),
        ("p 3 1\ne 0 1\ne 0 1\n", 3),
        ("p 2 1\ne 0 x\n", 2),
        ("p 2 1\ne 0 1\nr 0 0\nr 1 0\nq 1\n", 5),
        ("p 2 1\ne 0 1\nr 0 0 0\nr 1 0\n", 3),
    ],
)
def test_format_errors_report_line(text, lineno):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.lineno == lineno


def test_loop_message():
    with pytest.raises(GraphFormatError, match="loop"):
        parse_graph("p 2 1\ne 1 1\n")


def test_nonplanar_rotation_rejected():
    # K4 with one rotation reversed has the wrong face count
    bad = K4_TEXT.replace("r 0 0 1 2", "r 0 0 2 1")
    with pytest.raises(EmbeddingError):
        trace_faces(parse_graph(bad))


@pytest.mark.parametrize("g, faces", [(G.k4(), [3] * 4), (G.wheel(5), [3] * 5 + [5]), (G.cube(), [4] * 6)])
def test_face_sizes(g, faces):
    assert sorted(len(f) for f in g.faces) == faces


def test_outer_hint():
    g = parse_graph(K4_TEXT + "o 1 0\n")
    f = g.outer_face()
    assert 1 in g.faces[f].vertices and 0 in g.faces[f].vertices


def test_three_connectivity_examples():
    assert check_3_connectivity(G.k4())
    assert check_3_connectivity(G.wheel(5))
    c5 = from_rotation_lists([[(i + 1) % 5, (i - 1) % 5] for i in range(5)])
    assert not check_3_connectivity(c5)
    with pytest.raises(ValueError, match="too small"):
        check_3_connectivity(from_rotation_lists([[1, 2], [2, 0], [0, 1]]))


@pytest.mark.parametrize("seed", range(8))
def test_three_connectivity_matches_networkx(seed):
    g = G.random_reduced(14, seed=seed, deletions=14)
    ng = nx.Graph(g.edges)
    assert check_3_connectivity(g) == (nx.node_connectivity(ng) >= 3)
    # removing the edges at a vertex until degree two breaks it
    v = max(range(g.n), key=g.degree)
    nbrs = g.neighbors(v)
    keep = set(nbrs[:2])
    rows = [[u for u in g.neighbors(x) if not (x == v and u not in keep) and not (u == v and x not in keep)]
            for x in range(g.n)]
    h = from_rotation_lists(rows)
    assert not check_3_connectivity(h)
