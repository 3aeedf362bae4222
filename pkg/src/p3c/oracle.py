"""Brute-force ground truth for 3-cutsets, laminarity, maximality and tree decompositions.

Everything here works on the plain vertex/edge structure of the input graph
and recomputes components from scratch; nothing is shared with the
subdivision pipeline.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .planar import EmbeddedPlanarGraph

Triple = tuple[int, int, int]

EXHAUSTIVE_MAX_N = 12


class OracleError(AssertionError):
    pass


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if self.reason:
            out["reason"] = self.reason
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in (sorted(x) if isinstance(x, (set, frozenset)) else x)]
    if isinstance(x, np.integer):
        return int(x)
    return x


def adjacency(g: EmbeddedPlanarGraph) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def components_without(adj: Sequence[set[int]], removed: Iterable[int]) -> list[list[int]]:
    gone = set(removed)
    seen = set(gone)
    comps = []
    for s in range(len(adj)):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


class _Fast:
    """scipy-backed component labelling for sampling on larger graphs."""

    def __init__(self, g: EmbeddedPlanarGraph):
        e = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
        self.n = g.n
        self.e = e

    def labels(self, removed: Iterable[int]) -> np.ndarray:
        gone = np.zeros(self.n, dtype=bool)
        gone[list(removed)] = True
        keep = ~(gone[self.e[:, 0]] | gone[self.e[:, 1]])
        e = self.e[keep]
        a = csr_matrix((np.ones(e.shape[0]), (e[:, 0], e[:, 1])), shape=(self.n, self.n))
        _, lab = connected_components(a, directed=False)
        # removed vertices are isolated in the matrix; relabel survivors densely
        lab = lab.astype(np.int64)
        lab[gone] = -1
        keep_v = ~gone
        _, dense = np.unique(lab[keep_v], return_inverse=True)
        lab[keep_v] = dense.ravel()
        return lab


def enumerate_all_3cutsets(g: EmbeddedPlanarGraph) -> list[tuple[Triple, list[list[int]]]]:
    """Every separating triple with its components, by deleting all C(n,3) triples."""
    if g.n < 4:
        raise ValueError("graph too small")
    adj = adjacency(g)
    out = []
    for t in itertools.combinations(range(g.n), 3):
        comps = components_without(adj, t)
        if len(comps) >= 2:
            if len(comps) != 2:
                raise OracleError(f"triple {t} leaves {len(comps)} components")
            out.append((t, comps))
    return out


def _sep_labels(adj, X) -> dict[int, int]:
    lab = {}
    for i, comp in enumerate(components_without(adj, X)):
        for v in comp:
            lab[v] = i
    return lab


def _separates(lab: dict[int, int], Y: Iterable[int]) -> bool:
    seen = {lab[y] for y in Y if y in lab}
    return len(seen) >= 2


def cutsets_laminar(g: EmbeddedPlanarGraph, X: Sequence[int], Y: Sequence[int], adj=None) -> bool:
    """Neither cutset separates two vertices of the other."""
    adj = adj or adjacency(g)
    return not (_separates(_sep_labels(adj, X), Y) or _separates(_sep_labels(adj, Y), X))


def contained_in_side(g: EmbeddedPlanarGraph, X: Sequence[int], Xp: Sequence[int], adj=None) -> bool:
    """One-directional family laminarity: X' lies in X plus a single component of G - X."""
    adj = adj or adjacency(g)
    lab = _sep_labels(adj, X)
    rest = [y for y in Xp if y not in set(X)]
    return len({lab[y] for y in rest}) <= 1


def classify_cutset(g: EmbeddedPlanarGraph, X: Sequence[int], v: int | None = None, adj=None) -> dict:
    adj = adj or adjacency(g)
    X = tuple(sorted(X))
    comps = components_without(adj, X)
    single = any(len(c) == 1 for c in comps)
    deg3 = any(len(adj[u]) == 3 and tuple(sorted(adj[u])) == X for u in range(g.n))
    if single != deg3:
        raise OracleError(f"trivial-cutset definitions disagree on {X}")
    out = {"trivial": single, "v_nonshiftable": None}
    if v is not None:
        out["v_nonshiftable"] = _v_nonshiftable(adj, X, comps, v)
    return out


def _v_nonshiftable(adj, X, comps, v) -> bool:
    if v in X:
        return False
    home = next(set(c) for c in comps if v in c)
    return all(sum(1 for u in adj[w] if u not in home) >= 2 for w in X)


def in_class(info: dict, mode: str) -> bool:
    if mode == "all":
        return True
    if mode == "nontrivial":
        return not info["trivial"]
    if mode == "nonshiftable":
        return bool(info["v_nonshiftable"])
    raise ValueError(f"unknown mode {mode!r}")


def class_cutsets(g: EmbeddedPlanarGraph, mode: str = "all", v: int | None = None) -> list[Triple]:
    adj = adjacency(g)
    return [t for t, _ in enumerate_all_3cutsets(g)
            if in_class(classify_cutset(g, t, v, adj), mode)]


def _is_cutset(adj, t) -> bool:
    return len(components_without(adj, t)) >= 2


def separating_triangles(g: EmbeddedPlanarGraph) -> list[Triple]:
    """Triangles of G whose removal disconnects it."""
    adj = adjacency(g)
    out = []
    for a in range(g.n):
        for b in adj[a]:
            if b <= a:
                continue
            for c in adj[a] & adj[b]:
                if c > b and _is_cutset(adj, (a, b, c)):
                    out.append((a, b, c))
    return sorted(out)


def _crossing_pair_fast(g: EmbeddedPlanarGraph, fam: list[Triple]) -> tuple[int, int] | None:
    fast = _Fast(g)
    lab = np.stack([fast.labels(X) for X in fam])  # (F, n)
    arr = np.asarray(fam, dtype=np.int64)
    for i in range(len(fam)):
        ly = lab[i][arr]  # how X_i splits every member
        lx = lab[:, arr[i]]  # how every member splits X_i
        sep = np.zeros(len(fam), dtype=bool)
        for part in (ly, lx):
            ok = part >= 0
            diff = (part[:, :, None] != part[:, None, :]) & ok[:, :, None] & ok[:, None, :]
            sep |= diff.any(axis=(1, 2))
        sep[i] = False
        hit = np.flatnonzero(sep)
        if hit.size:
            return i, int(hit[0])
    return None


def check_laminar_family(g: EmbeddedPlanarGraph, family: Sequence[Sequence[int]], adj=None) -> Verdict:
    adj = adj or adjacency(g)
    fam = [tuple(sorted(X)) for X in family]
    if len(set(fam)) != len(fam):
        return Verdict(False, "duplicate cutset", fam)
    for X in fam:
        if not _is_cutset(adj, X):
            return Verdict(False, "not a cutset", {"triple": X, "components": components_without(adj, X)})
    if len(fam) > 200:
        hit = _crossing_pair_fast(g, fam)
        if hit is None:
            return Verdict(True)
        i, j = hit
        return Verdict(False, "not laminar", {"pair": [fam[i], fam[j]]})
    labs = [_sep_labels(adj, X) for X in fam]
    for i, j in itertools.combinations(range(len(fam)), 2):
        if _separates(labs[i], fam[j]) or _separates(labs[j], fam[i]):
            return Verdict(False, "not laminar", {
                "pair": [fam[i], fam[j]],
                "components": [components_without(adj, fam[i]), components_without(adj, fam[j])],
            })
    return Verdict(True)


def is_maximal_laminar(g: EmbeddedPlanarGraph, family: Sequence[Sequence[int]], mode: str = "all",
                       v: int | None = None) -> Verdict:
    """Exhaustive check: laminar, of the mode's class, and no eligible cutset can be added."""
    adj = adjacency(g)
    lam = check_laminar_family(g, family, adj)
    if not lam:
        return lam
    fam = {tuple(sorted(X)) for X in family}
    for X in fam:
        if not in_class(classify_cutset(g, X, v, adj), mode):
            return Verdict(False, "cutset outside the requested class", X)
    labs = [(Y, _sep_labels(adj, Y)) for Y in fam]
    for X, comps in enumerate_all_3cutsets(g):
        if X in fam or not in_class(classify_cutset(g, X, v, adj), mode):
            continue
        lx = _sep_labels(adj, X)
        if not any(_separates(lx, Y) or _separates(ly, X) for Y, ly in labs):
            return Verdict(False, "not maximal", {"triple": X, "components": comps})
    return Verdict(True)


def sample_maximality(g: EmbeddedPlanarGraph, family: Sequence[Sequence[int]], mode: str = "all",
                      v: int | None = None, samples: int = 10_000, seed: int = 0) -> Verdict:
    """Randomised maximality check for graphs too large for exhaustive search.

    Half of the candidate triples are uniform; the other half pick a random
    vertex and two vertices within distance two of it, where cutsets are
    far more common.  Every sampled cutset of the class that is not in the
    family must conflict with a family member.
    """
    rng = random.Random(seed)
    adj = adjacency(g)
    fast = _Fast(g)
    fam = [tuple(sorted(X)) for X in family]
    famset = set(fam)
    flab = np.stack([fast.labels(Y) for Y in fam]) if fam else np.zeros((0, g.n), dtype=np.int64)
    famarr = np.asarray(fam, dtype=np.int64).reshape(-1, 3)
    near = [sorted(adj[u] | {w for x in adj[u] for w in adj[x]} - {u}) for u in range(g.n)]
    tested = 0
    found = 0
    for s in range(samples):
        if s % 2 == 0:
            t = tuple(sorted(rng.sample(range(g.n), 3)))
        else:
            x = rng.randrange(g.n)
            if len(near[x]) < 2:
                continue
            y, z = rng.sample(near[x], 2)
            t = tuple(sorted((x, y, z)))
        if t in famset:
            continue
        tested += 1
        lab = fast.labels(t)
        if lab.max() < 1:
            continue
        if not in_class(classify_cutset(g, t, v, adj), mode):
            continue
        found += 1
        # t separates a member, or a member separates t
        if fam:
            ly = lab[famarr]
            sep_a = ((ly[:, :, None] != ly[:, None, :]) & (ly[:, :, None] >= 0) & (ly[:, None, :] >= 0)).any(axis=(1, 2))
            lx = flab[:, list(t)]
            sep_b = ((lx[:, :, None] != lx[:, None, :]) & (lx[:, :, None] >= 0) & (lx[:, None, :] >= 0)).any(axis=(1, 2))
            if (sep_a | sep_b).any():
                continue
        return Verdict(False, "not maximal", {"triple": t})
    return Verdict(True, f"{found} eligible cutsets among {tested} sampled triples")


def _bags_edges(td):
    if isinstance(td, dict):
        bags = td["bags"]
        edges = [(e["u"], e["w"], tuple(e["adhesion"])) for e in td["edges"]]
    else:
        bags = td.bags
        edges = [(u, w, tuple(a)) for u, w, a in td.edges]
    return [set(b) for b in bags], edges


def validate_tree_decomposition(g: EmbeddedPlanarGraph, td, family: Sequence[Sequence[int]]) -> Verdict:
    bags, edges = _bags_edges(td)
    nb = len(bags)
    if nb == 0:
        return Verdict(False, "no bags")
    covered = set().union(*bags)
    for v in range(g.n):
        if v not in covered:
            return Verdict(False, "vertex in no bag", v)
    for u, v in g.edges:
        if not any(u in b and v in b for b in bags):
            return Verdict(False, "edge in no bag", (u, v))
    if len(edges) != nb - 1:
        return Verdict(False, "tree edge count is not bags - 1", len(edges))
    tadj: list[list[int]] = [[] for _ in range(nb)]
    for u, w, _ in edges:
        if not (0 <= u < nb and 0 <= w < nb) or u == w:
            return Verdict(False, "bad tree edge", (u, w))
        tadj[u].append(w)
        tadj[w].append(u)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in tadj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nb:
        return Verdict(False, "bags do not form a tree")
    for v in range(g.n):
        holds = {i for i, b in enumerate(bags) if v in b}
        start = next(iter(holds))
        reach = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in tadj[x]:
                if y in holds and y not in reach:
                    reach.add(y)
                    stack.append(y)
        if reach != holds:
            return Verdict(False, "bags of a vertex are disconnected", v)
    adhesions = []
    for u, w, a in edges:
        inter = bags[u] & bags[w]
        if len(inter) != 3:
            return Verdict(False, "adhesion size is not 3", {"edge": (u, w), "intersection": sorted(inter)})
        if set(a) != inter:
            return Verdict(False, "listed adhesion differs from bag intersection", {"edge": (u, w)})
        adhesions.append(tuple(sorted(inter)))
    if sorted(adhesions) != sorted(tuple(sorted(X)) for X in family):
        return Verdict(False, "adhesions differ from the family", {"adhesions": sorted(adhesions)})
    return Verdict(True)


@dataclass
class OracleReport:
    n: int
    all_cutsets: list[dict]
    v: int | None = None
    verdicts: dict = field(default_factory=dict)
    definition_disagreements: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"n": self.n, "cutset_count": len(self.all_cutsets), "cutsets": self.all_cutsets}
        if self.v is not None:
            out["vertex_v"] = self.v
        if self.verdicts:
            out["verdicts"] = {k: v.to_json() for k, v in self.verdicts.items()}
        out["definition_disagreements"] = self.definition_disagreements
        return out


def report(g: EmbeddedPlanarGraph, v: int | None = None, result: dict | None = None,
           mode: str = "all") -> OracleReport:
    """Classify every cutset and, given a pipeline result, judge it."""
    adj = adjacency(g)
    cuts = enumerate_all_3cutsets(g)
    rows = []
    for t, comps in cuts:
        info = classify_cutset(g, t, v, adj)
        rows.append({"cutset": list(t), "components": comps, **info})
    rep = OracleReport(g.n, rows, v)
    # pairwise vs one-directional laminarity
    for (X, _), (Y, _) in itertools.combinations(cuts, 2):
        pair = cutsets_laminar(g, X, Y, adj)
        one = contained_in_side(g, X, Y, adj) and contained_in_side(g, Y, X, adj)
        if pair != one:
            rep.definition_disagreements.append({"pair": [list(X), list(Y)], "pairwise": pair, "one_directional": one})
    if result is not None:
        fam = [tuple(x) for x in result.get("cutsets", [])]
        mode = result.get("mode", mode)
        rep.verdicts["maximal_laminar"] = is_maximal_laminar(g, fam, mode, v)
        if "tree" in result:
            rep.verdicts["tree"] = validate_tree_decomposition(g, result["tree"], fam)
    return rep
