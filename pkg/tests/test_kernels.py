from __future__ import annotations

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from p3c import generators as G
from p3c import kernels as K
from p3c.bcs import build_bcs
from p3c.cycles import enumerate_canonical_rows
from p3c.orientation import build_index, cycle_table

needs_numba = pytest.mark.skipif(not K.USE_NUMBA, reason="compiled kernels disabled")


@pytest.fixture(scope="module")
def case():
    g = G.random_reduced(40, seed=5, deletions=20)
    b = build_bcs(g)
    return g, b, build_index(b, 3)


def _same(a, b):
    if isinstance(a, tuple):
        assert len(a) == len(b)
        for x, y in zip(a, b):
            _same(x, y)
    else:
        np.testing.assert_array_equal(np.asarray(a), np.asarray(b))


@needs_numba
def test_backend_name():
    assert K.backend() == "numba"


@needs_numba
def test_tree_kernels_agree(case):
    _, b, _ = case
    for name, args in [
        ("bfs_tree", (b.flag_nbr, b.flag_bedge, 3)),
        ("dual_components", (b.flag_nbr, b.flag_bedge, np.arange(b.edge_count) % 7 == 0)),
    ]:
        _same(getattr(K, name)(*args), K.PY[name](*args))
    parent, _, order = K.bfs_tree(b.flag_nbr, b.flag_bedge, 3)
    _same(K.subtree_sizes(order, parent), K.PY["subtree_sizes"](order, parent))
    _same(K.pre_post(order, parent), K.PY["pre_post"](order, parent))


@needs_numba
def test_cycle_kernels_agree(case):
    g, b, idx = case
    args = (b.bptr, b.bnbr, np.arange(b.node_count, dtype=np.int64), b.n, b.m, b.gn_ptr, b.gn_nbr,
            b.gn_edge, b.dface, b.face_ptr, b.vf_ptr, b.vf_face, b.vf_dart)
    _same(K.enumerate_canonical(*args), K.PY["enumerate_canonical"](*args))
    rows = enumerate_canonical_rows(b)
    side = (rows, b.n, b.m, b.ends, b.dface, b.vf_ptr, b.vf_face, b.vf_dart, b.edge_flags)
    _same(K.cycle_sides(*side), K.PY["cycle_sides"](*side))
    tab = cycle_table(idx, rows)
    pairs = K.shared_node_pairs(rows, b.node_count, 2)
    _same(pairs, K.PY["shared_node_pairs"](rows, b.node_count, 2))
    rel = (pairs, tab.kids, tab.left, tab.right, idx.pre, idx.post)
    _same(K.relations(*rel), K.PY["relations"](*rel))
    sc = (tab.eid, tab.left, idx.edge_child, idx.size)
    _same(K.signed_counts(*sc), K.PY["signed_counts"](*sc))


@needs_numba
def test_frame_and_mis_kernels_agree():
    b = build_bcs(G.wheel(15))
    args = (b.n, b.m, b.bptr, b.bnbr, b.ends, b.dface, b.prv, b.vf_ptr, b.vf_face, b.vf_dart,
            b.gn_ptr, b.gn_nbr, b.gn_edge, 10)
    _same(K.frame_paths(*args), K.PY["frame_paths"](*args))
    ptr = np.array([0, 1, 3, 4, 4], dtype=np.int64)
    nbr = np.array([1, 0, 2, 1], dtype=np.int64)
    elig = np.array([True, True, True, True])
    pre = np.array([False, True, False, False])
    _same(K.greedy_mis(4, ptr, nbr, elig, pre), K.PY["greedy_mis"](4, ptr, nbr, elig, pre))
    assert K.greedy_mis(4, ptr, nbr, elig, pre).tolist() == [False, True, False, True]


def _run(env_flag: str | None, text: str) -> dict:
    env = dict(os.environ)
    env.pop("P3C_NO_NUMBA", None)
    if env_flag is not None:
        env["P3C_NO_NUMBA"] = env_flag
    out = subprocess.run([sys.executable, "-m", "p3c.cli", "decompose", "-"], input=text, env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_fallback_backend_gives_identical_output(tmp_path):
    from p3c.planar import format_graph

    for g in (G.wheel(14), G.random_reduced(35, seed=3, deletions=12), G.prism_stack(8)):
        text = format_graph(g)
        assert _run("1", text) == _run(None, text)


def test_env_flag_selects_python():
    code = "import p3c.kernels as K; print(K.backend())"
    env = dict(os.environ, P3C_NO_NUMBA="yes")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
