from __future__ import annotations

import random

import numpy as np
import pytest

from p3c import generators as G
from p3c.bcs import build_bcs
from p3c.cycles import cycle_of_cutset, enumerate_canonical_rows
from p3c.orientation import (
    InvalidCycle,
    Relation,
    build_index,
    cycle_table,
    face_in_cycle,
    flood_fill_inside,
    interior_face_count,
    laminar_relation,
    outer_flag_for,
)


def _expected_relation(a: np.ndarray, b: np.ndarray) -> Relation:
    if (a == b).all():
        return Relation.EQUAL
    if not (a & b).any():
        return Relation.DISJOINT
    if (a >= b).all():
        return Relation.FIRST_CONTAINS_SECOND
    if (b >= a).all():
        return Relation.SECOND_CONTAINS_FIRST
    return Relation.CROSSING


def test_preorder_numbers_distinct():
    b = build_bcs(G.k4())
    idx = build_index(b, 0)
    assert len(set(idx.pre.tolist())) == 24
    assert len(set(idx.post.tolist())) == 24


def test_subtree_sizes(w5_bcs):
    idx = build_index(w5_bcs, 0)
    kids = np.flatnonzero(idx.parent == 0)
    assert idx.size[kids].sum() == 39
    assert idx.size[0] == 40


def test_single_flag_boundary(w5_bcs):
    idx = build_index(w5_bcs, 0)
    fl = 7
    v, e, f = w5_bcs.flag_nodes(fl)
    side, count = interior_face_count(idx, [v, e, f])
    assert count == 1
    assert face_in_cycle(idx, fl, [v, e, f])
    # the outer flag's own boundary holds everything else
    v, e, f = w5_bcs.flag_nodes(0)
    assert interior_face_count(idx, [v, e, f])[1] == 39
    assert not face_in_cycle(idx, 0, [v, e, f])


def test_outer_flag_never_inside(corpus_graph):
    b = build_bcs(corpus_graph)
    rows = enumerate_canonical_rows(b)
    idx = build_index(b, outer_flag_for(b))
    for r in rows.tolist():
        assert not face_in_cycle(idx, idx.outer_flag, r)


def test_invalid_cycles_rejected(w5_bcs):
    idx = build_index(w5_bcs, 0)
    with pytest.raises(InvalidCycle):
        cycle_table(idx, [[0, 1, 2, 3, 4, 5]])


@pytest.mark.parametrize("seed", range(3))
def test_agrees_with_flood_fill(corpus_graph, seed):
    b = build_bcs(corpus_graph)
    rng = random.Random(seed)
    outer = rng.randrange(b.flag_count)
    idx = build_index(b, outer)
    cycles = enumerate_canonical_rows(b).tolist()
    for _ in range(6):
        v, e, f = b.flag_nodes(rng.randrange(b.flag_count))
        cycles.append([v, e, f])
    inside = [flood_fill_inside(b, outer, c) for c in cycles]
    for c, ins in zip(cycles, inside):
        assert interior_face_count(idx, c)[1] == int(ins.sum())
        assert int(ins.sum()) + int((~ins).sum()) == b.flag_count
        tab = cycle_table(idx, [c])
        for fl in rng.sample(range(b.flag_count), min(20, b.flag_count)):
            assert tab.contains_flag(idx, 0, fl) == bool(ins[fl])
    six = [i for i, c in enumerate(cycles) if len(c) == 6]
    for i in six:
        for j in six:
            got = laminar_relation(idx, cycles[i], cycles[j])
            assert got == _expected_relation(inside[i], inside[j]), (cycles[i], cycles[j])


def test_w5_crossing_pair(w5, w5_bcs):
    idx = build_index(w5_bcs, 0)
    a = cycle_of_cutset(w5_bcs, (0, 1, 3)).key
    c = cycle_of_cutset(w5_bcs, (0, 2, 4)).key
    assert laminar_relation(idx, a, c) is Relation.CROSSING
    assert laminar_relation(idx, a, a) is Relation.EQUAL
    assert not Relation.CROSSING.laminar


def test_inside_flags_border_the_cycle(w5_bcs):
    idx = build_index(w5_bcs, 3)
    rows = enumerate_canonical_rows(w5_bcs)
    tab = cycle_table(idx, rows)
    for i in range(len(tab)):
        ins = flood_fill_inside(w5_bcs, 3, rows[i].tolist())
        assert ins[tab.inside_flags(i)].all()
