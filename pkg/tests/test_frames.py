from __future__ import annotations

import numpy as np
import pytest

from p3c import generators as G
from p3c import oracle
from p3c.bcs import build_bcs
from p3c.cycles import cutset_of, is_canonical, SixCycle, trivial_triples
from p3c.decompose import cut_along
from p3c.frames import (
    BIG,
    find_maximal_big_frames,
    frame_cycle_selection,
    root_pair,
)
from p3c.orientation import Relation, build_index, cycle_table, laminar_relation, outer_flag_for

from _brute import big_groups, brute_frame_paths


@pytest.mark.parametrize("k", [10, 12, 16])
def test_wheel_has_one_big_frame(k):
    b = build_bcs(G.wheel(k))
    frames = find_maximal_big_frames(b).frames
    assert len(frames) == 1
    fr = frames[0]
    outer = next(f.id for f in b.g.faces if len(f) == k)
    assert (fr.pole_vertex, fr.pole_face) == (0, b.n + b.m + outer)
    # k spoke paths hub-spoke-rim-outer, interleaved with k paths hub-triangle-rim edge-outer
    assert fr.k == 2 * k
    kinds = sorted(b.kind(int(x)) + b.kind(int(y)) for x, y in fr.paths)
    assert kinds == ["EV"] * k + ["FE"] * k


@pytest.mark.parametrize("name, g", [("cube", G.cube()), ("W9", G.wheel(9)), ("W4", G.wheel(4)),
                                     ("prism3", G.prism_stack(3)), ("apollonian30", G.apollonian(30, 4)),
                                     ("reduced30", G.random_reduced(30, 2, 25))])
def test_frames_match_brute_force(name, g):
    b = build_bcs(g)
    want = big_groups(brute_frame_paths(b))
    got = {(f.pole_vertex, f.pole_face): sorted(map(tuple, f.paths.tolist())) for f in find_maximal_big_frames(b).frames}
    assert got == want


def test_cube_has_no_big_frame():
    groups = brute_frame_paths(build_bcs(G.cube()))
    assert max(len(v) for v in groups.values()) < BIG
    assert find_maximal_big_frames(build_bcs(G.cube())).frames == []


def test_k4_rejected():
    with pytest.raises(ValueError):
        find_maximal_big_frames(build_bcs(G.k4()))


def test_paths_follow_rotation_at_vertex_pole():
    b = build_bcs(G.wheel(12))
    fr = find_maximal_big_frames(b).frames[0]
    rot = b.neighbors(fr.pole_vertex).tolist()
    pos = [rot.index(int(x)) for x, _ in fr.paths]
    start = pos.index(min(pos))
    assert pos[start:] + pos[:start] == sorted(pos)


@pytest.mark.parametrize("flag_seed", range(5))
def test_root_pair_is_outermost(flag_seed):
    b = build_bcs(G.wheel(12))
    fr = find_maximal_big_frames(b).frames[0]
    outer = (flag_seed * 37) % b.flag_count
    idx = build_index(b, outer)
    r = root_pair(idx, fr)
    root = fr.pair_cycle(r, (r + 1) % fr.k)
    for i in range(fr.k):
        if i == r:
            continue
        other = fr.pair_cycle(i, (i + 1) % fr.k)
        assert laminar_relation(idx, root, other) is Relation.FIRST_CONTAINS_SECOND


@pytest.mark.parametrize("k", [10, 12, 20])
def test_selection_is_laminar_and_canonical(k):
    g = G.wheel(k)
    b = build_bcs(g)
    idx = build_index(b, outer_flag_for(b))
    fr = find_maximal_big_frames(b).frames[0]
    rows = frame_cycle_selection(b, idx, fr, "all")
    assert rows.shape[0] > 0
    tab = cycle_table(idx, rows)
    pairs = np.array([(i, j) for i in range(len(rows)) for j in range(i + 1, len(rows))]).reshape(-1, 2)
    assert (tab.relations(idx, pairs) != Relation.CROSSING).all()
    for r in rows.tolist():
        assert is_canonical(b, r)
        assert 0 in cutset_of(SixCycle(tuple(r)))
    assert oracle.check_laminar_family(g, [tuple(r[0::2]) for r in rows.tolist()])


def test_selection_modes():
    g = G.wheel(12)
    b = build_bcs(g)
    fr = find_maximal_big_frames(b).frames[0]
    for v in range(1, 13):
        idx = build_index(b, outer_flag_for(b, v=v))
        rows = frame_cycle_selection(b, idx, fr, "nonshiftable", v)
        assert rows.shape[0] > 0
        for r in rows.tolist():
            assert oracle.classify_cutset(g, r[0::2], v)["v_nonshiftable"]
    idx = build_index(b, outer_flag_for(b))
    every = {tuple(r) for r in frame_cycle_selection(b, idx, fr, "all").tolist()}
    nontriv = {tuple(r) for r in frame_cycle_selection(b, idx, fr, "nontrivial").tolist()}
    triv = trivial_triples(b)
    # interleaved paths let a selected pair straddle a single rim vertex
    assert nontriv < every
    assert all(tuple(sorted(r[0::2])) not in triv for r in nontriv)
    assert all(tuple(sorted(r[0::2])) in triv for r in every - nontriv)
    with pytest.raises(ValueError):
        frame_cycle_selection(b, idx, fr, "bogus")


@pytest.mark.parametrize("k", [10, 12, 13, 25])
def test_no_big_frame_left_after_cutting(k):
    g = G.wheel(k)
    b = build_bcs(g)
    idx = build_index(b, outer_flag_for(b))
    fr = find_maximal_big_frames(b).frames[0]
    rows = frame_cycle_selection(b, idx, fr, "all")
    pieces = cut_along(b, rows, idx, check=True)
    assert pieces.count == rows.shape[0] + 1
    for piece in pieces:
        nbrs = [set(piece.nbr[piece.ptr[i]: piece.ptr[i + 1]].tolist()) for i in range(piece.size)]
        assert not big_groups(brute_frame_paths(b, nbrs, piece.origin))
