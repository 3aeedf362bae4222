from __future__ import annotations

import sys

import pytest

from p3c import generators as G
from p3c.bcs import build_bcs


def small_corpus() -> dict:
    out = dict(G.corpus_small())
    for n in (5, 8, 12):
        out[f"apollonian{n}"] = G.apollonian(n, seed=n)
    for s in range(4):
        out[f"reduced12_{s}"] = G.random_reduced(12, seed=s, deletions=6)
    return out


CORPUS = small_corpus()


@pytest.fixture(params=sorted(CORPUS), ids=sorted(CORPUS))
def corpus_graph(request):
    return CORPUS[request.param]


@pytest.fixture
def w5():
    return G.wheel(5)


@pytest.fixture
def w5_bcs(w5):
    return build_bcs(w5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.summary_line(num))
