"""Array kernels for the hot loops.

Every kernel is written once as plain Python over numpy arrays.  When numba
is importable and ``P3C_NO_NUMBA`` is unset (or ``0``), the module rebinds
each kernel to its ``@njit`` compilation at import time; otherwise the same
source runs under the interpreter.  The uncompiled originals stay reachable
through :data:`PY` so tests and the benchmark can compare both paths.

Node ids follow the BCS layout: vertices ``[0, n)``, edges ``[n, n+m)``,
faces ``[n+m, n+m+f)``.  BCS edge ids: ``d`` joins ``tail(d)`` to edge
``d >> 1``; ``2m + d`` joins that edge to ``face(d)``; ``4m + d`` joins
``tail(d)`` to ``face(d)``.
"""
from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("P3C_NO_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG not in ("", "0", "false", "no")

try:  # pragma: no cover - depends on environment
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV

# relation codes shared with orientation.Relation
EQUAL, DISJOINT, FIRST_CONTAINS, SECOND_CONTAINS, CROSSING = 0, 1, 2, 3, 4


def _grow(arr, need):
    if need <= arr.shape[0]:
        return arr
    cap = arr.shape[0] * 2
    if cap < need:
        cap = need
    out = np.empty((cap,) + arr.shape[1:], dtype=arr.dtype)
    out[: arr.shape[0]] = arr
    return out


# ---------------------------------------------------------------------------
# lookups
# ---------------------------------------------------------------------------


def bsearch(arr, lo, hi, key):
    """Index of ``key`` in sorted ``arr[lo:hi]`` or -1."""
    while lo < hi:
        mid = (lo + hi) >> 1
        v = arr[mid]
        if v < key:
            lo = mid + 1
        elif v > key:
            hi = mid
        else:
            return mid
    return -1


def g_edge(u, v, gn_ptr, gn_nbr, gn_edge):
    """Edge id joining G-vertices ``u`` and ``v`` or -1."""
    i = bsearch(gn_nbr, gn_ptr[u], gn_ptr[u + 1], v)
    if i < 0:
        return -1
    return gn_edge[i]


def corner_dart(v, f, vf_ptr, vf_face, vf_dart):
    """Dart leaving ``v`` with face ``f`` on its left, or -1 if ``v`` is not on ``f``."""
    i = bsearch(vf_face, vf_ptr[v], vf_ptr[v + 1], f)
    if i < 0:
        return -1
    return vf_dart[i]


def bcs_edge(a, b, n, m, ends, dface, vf_ptr, vf_face, vf_dart):
    """BCS edge id between nodes ``a`` and ``b`` or -1."""
    if a > b:
        a, b = b, a
    if a < n:
        if b < n:
            return -1
        if b < n + m:
            e = b - n
            if ends[e, 0] == a:
                return 2 * e
            if ends[e, 1] == a:
                return 2 * e + 1
            return -1
        d = corner_dart(a, b - n - m, vf_ptr, vf_face, vf_dart)
        if d < 0:
            return -1
        return 4 * m + d
    if a < n + m and b >= n + m:
        e = a - n
        f = b - n - m
        if dface[2 * e] == f:
            return 2 * m + 2 * e
        if dface[2 * e + 1] == f:
            return 2 * m + 2 * e + 1
    return -1


def edge_on_face(e, f, dface):
    return dface[2 * e] == f or dface[2 * e + 1] == f


# ---------------------------------------------------------------------------
# dual spanning tree
# ---------------------------------------------------------------------------


def bfs_tree(flag_nbr, flag_bedge, root):
    nflag = flag_nbr.shape[0]
    parent = np.full(nflag, -1, dtype=np.int64)
    pedge = np.full(nflag, -1, dtype=np.int64)
    order = np.empty(nflag, dtype=np.int64)
    seen = np.zeros(nflag, dtype=np.bool_)
    seen[root] = True
    order[0] = root
    head = 0
    tail = 1
    while head < tail:
        f = order[head]
        head += 1
        for k in range(3):
            g = flag_nbr[f, k]
            if not seen[g]:
                seen[g] = True
                parent[g] = f
                pedge[g] = flag_bedge[f, k]
                order[tail] = g
                tail += 1
    return parent, pedge, order[:tail]


def subtree_sizes(order, parent):
    size = np.ones(parent.shape[0], dtype=np.int64)
    for i in range(order.shape[0] - 1, 0, -1):
        f = order[i]
        size[parent[f]] += size[f]
    return size


def pre_post(order, parent):
    """Preorder and postorder numbers of a rooted tree given in BFS order."""
    nn = parent.shape[0]
    cnt = np.zeros(nn + 1, dtype=np.int64)
    for i in range(1, order.shape[0]):
        cnt[parent[order[i]] + 1] += 1
    for i in range(nn):
        cnt[i + 1] += cnt[i]
    fill = cnt[:-1].copy()
    kids = np.empty(max(order.shape[0] - 1, 1), dtype=np.int64)
    for i in range(1, order.shape[0]):
        p = parent[order[i]]
        kids[fill[p]] = order[i]
        fill[p] += 1
    pre = np.full(nn, -1, dtype=np.int64)
    post = np.full(nn, -1, dtype=np.int64)
    stack = np.empty(nn, dtype=np.int64)
    it = np.zeros(nn, dtype=np.int64)
    root = order[0]
    sp = 0
    stack[0] = root
    pre[root] = 0
    npre = 1
    npost = 0
    while sp >= 0:
        u = stack[sp]
        k = cnt[u] + it[u]
        if k < cnt[u + 1]:
            it[u] += 1
            c = kids[k]
            pre[c] = npre
            npre += 1
            sp += 1
            stack[sp] = c
        else:
            post[u] = npost
            npost += 1
            sp -= 1
    return pre, post


def dual_components(flag_nbr, flag_bedge, cut):
    """Label flags by connected component after deleting dual edges with ``cut`` set."""
    nflag = flag_nbr.shape[0]
    label = np.full(nflag, -1, dtype=np.int64)
    queue = np.empty(nflag, dtype=np.int64)
    ncomp = 0
    for s in range(nflag):
        if label[s] >= 0:
            continue
        label[s] = ncomp
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            f = queue[head]
            head += 1
            for k in range(3):
                if cut[flag_bedge[f, k]]:
                    continue
                g = flag_nbr[f, k]
                if label[g] < 0:
                    label[g] = ncomp
                    queue[tail] = g
                    tail += 1
        ncomp += 1
    return label, ncomp


# ---------------------------------------------------------------------------
# cycles against the dual tree
# ---------------------------------------------------------------------------


def cycle_sides(cyc, n, m, ends, dface, vf_ptr, vf_face, vf_dart, edge_flags):
    """BCS edge ids and left/right flags of every directed edge of each cycle.

    Rows of ``cyc`` are closed walks of equal length.  A missing edge yields
    id -1 and the caller must reject the cycle.
    """
    k, L = cyc.shape
    eid = np.full((k, L), -1, dtype=np.int64)
    left = np.full((k, L), -1, dtype=np.int64)
    right = np.full((k, L), -1, dtype=np.int64)
    for i in range(k):
        for j in range(L):
            a = cyc[i, j]
            b = cyc[i, (j + 1) % L]
            e = bcs_edge(a, b, n, m, ends, dface, vf_ptr, vf_face, vf_dart)
            eid[i, j] = e
            if e < 0:
                continue
            if a < b:
                left[i, j] = edge_flags[e, 0]
                right[i, j] = edge_flags[e, 1]
            else:
                left[i, j] = edge_flags[e, 1]
                right[i, j] = edge_flags[e, 0]
    return eid, left, right


def signed_counts(eid, left, edge_child, size):
    """Signed subtree sum of each cycle for the side on its left."""
    k, L = eid.shape
    out = np.zeros(k, dtype=np.int64)
    for i in range(k):
        s = 0
        for j in range(L):
            c = edge_child[eid[i, j]]
            if c < 0:
                continue
            if c == left[i, j]:
                s += size[c]
            else:
                s -= size[c]
        out[i] = s
    return out


def tree_children(eid, edge_child):
    k, L = eid.shape
    out = np.full((k, L), -1, dtype=np.int64)
    for i in range(k):
        for j in range(L):
            out[i, j] = edge_child[eid[i, j]]
    return out


def flag_inside(kids, f, pre, post):
    """Parity test: is flag ``f`` strictly inside the cycle with tree-edge children ``kids``?"""
    odd = False
    pf = pre[f]
    qf = post[f]
    for j in range(kids.shape[0]):
        c = kids[j]
        if c >= 0 and pre[c] <= pf and post[c] >= qf:
            odd = not odd
    return odd


def flags_inside(kids, flags, pre, post):
    out = np.zeros(flags.shape[0], dtype=np.bool_)
    for i in range(flags.shape[0]):
        out[i] = flag_inside(kids, flags[i], pre, post)
    return out


def relation(ki, li, ri, kj, lj, rj, pre, post):
    """Laminarity class of two simple cycles from the flags bordering them.

    Every region of the union of the two cycles touches one of its edges, so
    the membership pattern of the bordering flags decides the relation.
    """
    h11 = False
    h10 = False
    h01 = False
    for side in range(4):
        for t in range(li.shape[0] if side < 2 else lj.shape[0]):
            if side == 0:
                f = li[t]
            elif side == 1:
                f = ri[t]
            elif side == 2:
                f = lj[t]
            else:
                f = rj[t]
            a = flag_inside(ki, f, pre, post)
            b = flag_inside(kj, f, pre, post)
            if a and b:
                h11 = True
            elif a:
                h10 = True
            elif b:
                h01 = True
    if not h10 and not h01:
        return EQUAL
    if not h11:
        return DISJOINT
    if h10 and h01:
        return CROSSING
    if h10:
        return FIRST_CONTAINS
    return SECOND_CONTAINS


def relations(pairs, kids, left, right, pre, post):
    out = np.empty(pairs.shape[0], dtype=np.int64)
    for t in range(pairs.shape[0]):
        i = pairs[t, 0]
        j = pairs[t, 1]
        out[t] = relation(kids[i], left[i], right[i], kids[j], left[j], right[j], pre, post)
    return out


def shared_node_pairs(cyc, nnodes, min_shared):
    """Pairs ``i < j`` of cycles sharing at least ``min_shared`` nodes."""
    k, L = cyc.shape
    cnt = np.zeros(nnodes + 1, dtype=np.int64)
    for i in range(k):
        for j in range(L):
            cnt[cyc[i, j] + 1] += 1
    for v in range(nnodes):
        cnt[v + 1] += cnt[v]
    fill = cnt[:-1].copy()
    members = np.empty(k * L, dtype=np.int64)
    for i in range(k):
        for j in range(L):
            v = cyc[i, j]
            members[fill[v]] = i
            fill[v] += 1
    npairs = 0
    for v in range(nnodes):
        s = cnt[v + 1] - cnt[v]
        npairs += s * (s - 1) // 2
    codes = np.empty(npairs, dtype=np.int64)
    t = 0
    for v in range(nnodes):
        for a in range(cnt[v], cnt[v + 1]):
            for b in range(a + 1, cnt[v + 1]):
                i = members[a]
                j = members[b]
                if i > j:
                    i, j = j, i
                codes[t] = i * k + j
                t += 1
    codes.sort()
    out = np.empty((npairs, 2), dtype=np.int64)
    r = 0
    a = 0
    while a < npairs:
        b = a
        while b < npairs and codes[b] == codes[a]:
            b += 1
        if b - a >= min_shared:
            out[r, 0] = codes[a] // k
            out[r, 1] = codes[a] % k
            r += 1
        a = b
    return out[:r]


# ---------------------------------------------------------------------------
# canonical 6-cycles
# ---------------------------------------------------------------------------


def canonical_check(x, p, y, q, z, r, n, m, dface, face_ptr, vf_ptr, vf_face, vf_dart):
    """Canonical test for the alternating 6-cycle x-p-y-q-z-r built from unique 2-paths.

    The three mids must already be valid for their pairs (edge node when the
    endpoints are adjacent, shared face otherwise).
    """
    if p == q or q == r or p == r:
        return False
    nm = n + m
    # vertex-face chords
    if q >= nm and corner_dart(x, q - nm, vf_ptr, vf_face, vf_dart) >= 0:
        return False
    if r >= nm and corner_dart(y, r - nm, vf_ptr, vf_face, vf_dart) >= 0:
        return False
    if p >= nm and corner_dart(z, p - nm, vf_ptr, vf_face, vf_dart) >= 0:
        return False
    # edge-face chords
    if p < nm and q >= nm and edge_on_face(p - n, q - nm, dface):
        return False
    if p < nm and r >= nm and edge_on_face(p - n, r - nm, dface):
        return False
    if q < nm and p >= nm and edge_on_face(q - n, p - nm, dface):
        return False
    if q < nm and r >= nm and edge_on_face(q - n, r - nm, dface):
        return False
    if r < nm and p >= nm and edge_on_face(r - n, p - nm, dface):
        return False
    if r < nm and q >= nm and edge_on_face(r - n, q - nm, dface):
        return False
    # boundary of a triangular face
    if p < nm and q < nm and r < nm:
        e = p - n
        for s in range(2):
            f = dface[2 * e + s]
            if face_ptr[f + 1] - face_ptr[f] == 3 and corner_dart(z, f, vf_ptr, vf_face, vf_dart) >= 0:
                return False
    return True


def mid_node(u, v, n, m, gn_ptr, gn_nbr, gn_edge, vf_ptr, vf_face):
    """The only node that can sit between G-vertices ``u`` and ``v`` on a canonical cycle.

    Returns -1 if there is none, -2 if two faces are shared (G not 3-connected).
    """
    e = g_edge(u, v, gn_ptr, gn_nbr, gn_edge)
    if e >= 0:
        return n + e
    found = -1
    i = vf_ptr[u]
    j = vf_ptr[v]
    while i < vf_ptr[u + 1] and j < vf_ptr[v + 1]:
        a = vf_face[i]
        b = vf_face[j]
        if a < b:
            i += 1
        elif a > b:
            j += 1
        else:
            if found >= 0:
                return -2
            found = n + m + a
            i += 1
            j += 1
    return found


def enumerate_canonical(hptr, hnbr, hbcs, n, m, gn_ptr, gn_nbr, gn_edge, dface, face_ptr,
                        vf_ptr, vf_face, vf_dart):
    """All canonical cycles of a (possibly cut) copy of BCS(G).

    ``hptr``/``hnbr`` is the CSR adjacency of the copy and ``hbcs`` maps copy
    nodes to BCS ids.  Each cycle is reported once per copy as the row
    ``(x, p, y, q, z, r)`` of BCS ids with ``x < y < z``, alongside the same
    row in copy ids.
    """
    nh = hbcs.shape[0]
    nm = n + m
    mark = np.full(nh, -1, dtype=np.int64)
    n2 = np.empty(16, dtype=np.int64)
    n2mid = np.empty(16, dtype=np.int64)
    out = np.empty((16, 6), dtype=np.int64)
    outh = np.empty((16, 6), dtype=np.int64)
    nout = 0
    for xh in range(nh):
        xb = hbcs[xh]
        if xb >= n:
            continue
        cnt = 0
        for a in range(hptr[xh], hptr[xh + 1]):
            ph = hnbr[a]
            pb = hbcs[ph]
            for b in range(hptr[ph], hptr[ph + 1]):
                yh = hnbr[b]
                yb = hbcs[yh]
                if yb >= n or yh == xh:
                    continue
                if pb >= nm and g_edge(xb, yb, gn_ptr, gn_nbr, gn_edge) >= 0:
                    continue
                if mark[yh] >= 0:
                    continue
                mark[yh] = pb
                if cnt == n2.shape[0]:
                    n2 = _grow(n2, cnt + 1)
                    n2mid = _grow(n2mid, cnt + 1)
                n2[cnt] = yh
                n2mid[cnt] = pb
                cnt += 1
        for t in range(cnt):
            yh = n2[t]
            yb = hbcs[yh]
            if yb <= xb:
                continue
            pb = n2mid[t]
            ph = -1
            for a in range(hptr[xh], hptr[xh + 1]):
                if hbcs[hnbr[a]] == pb:
                    ph = hnbr[a]
                    break
            for a in range(hptr[yh], hptr[yh + 1]):
                qh = hnbr[a]
                qb = hbcs[qh]
                if qb == pb:
                    continue
                for b in range(hptr[qh], hptr[qh + 1]):
                    zh = hnbr[b]
                    zb = hbcs[zh]
                    if zb >= n or zb <= yb:
                        continue
                    rb = mark[zh]
                    if rb < 0:
                        continue
                    if qb >= nm and g_edge(yb, zb, gn_ptr, gn_nbr, gn_edge) >= 0:
                        continue
                    if not canonical_check(xb, pb, yb, qb, zb, rb, n, m, dface, face_ptr,
                                           vf_ptr, vf_face, vf_dart):
                        continue
                    if nout == out.shape[0]:
                        out = _grow(out, nout + 1)
                        outh = _grow(outh, nout + 1)
                    rh = -1
                    for c in range(hptr[zh], hptr[zh + 1]):
                        if hbcs[hnbr[c]] == rb:
                            rh = hnbr[c]
                            break
                    outh[nout, 0] = xh
                    outh[nout, 1] = ph
                    outh[nout, 2] = yh
                    outh[nout, 3] = qh
                    outh[nout, 4] = zh
                    outh[nout, 5] = rh
                    out[nout, 0] = xb
                    out[nout, 1] = pb
                    out[nout, 2] = yb
                    out[nout, 3] = qb
                    out[nout, 4] = zb
                    out[nout, 5] = rb
                    nout += 1
        for t in range(cnt):
            mark[n2[t]] = -1
    return out[:nout], outh[:nout]


# ---------------------------------------------------------------------------
# frames
# ---------------------------------------------------------------------------


def frame_paths(n, m, bptr, bnbr, ends, dface, prv, vf_ptr, vf_face, vf_dart, gn_ptr, gn_nbr,
                gn_edge, min_paths):
    """Pole pairs (G-vertex, G-face) joined by at least ``min_paths`` frame paths.

    Returns ``(poles, ptr, paths, total)``: ``poles[i] = (a, b)`` as BCS ids,
    ``paths[ptr[i]:ptr[i+1]]`` the interior nodes ``(x, y)`` in rotation
    order around ``a``, and the number of candidate paths examined.
    """
    nm = n + m
    buf = np.empty((64, 3), dtype=np.int64)
    poles = np.empty((4, 2), dtype=np.int64)
    ptr = np.zeros(5, dtype=np.int64)
    paths = np.empty((64, 2), dtype=np.int64)
    npoles = 0
    npaths = 0
    total = 0
    for a in range(n):
        cnt = 0
        for s in range(bptr[a], bptr[a + 1]):
            x = bnbr[s]
            if x < nm:
                # a - edge - other endpoint - face at that endpoint
                e = x - n
                y = ends[e, 1] if ends[e, 0] == a else ends[e, 0]
                for t in range(bptr[y], bptr[y + 1]):
                    b = bnbr[t]
                    if b < nm:
                        continue
                    total += 1
                    f = b - nm
                    if edge_on_face(e, f, dface):
                        continue
                    if corner_dart(a, f, vf_ptr, vf_face, vf_dart) >= 0:
                        continue
                    if cnt == buf.shape[0]:
                        buf = _grow(buf, cnt + 1)
                    buf[cnt, 0] = b
                    buf[cnt, 1] = x
                    buf[cnt, 2] = y
                    cnt += 1
            else:
                f0 = x - nm
                for t in range(bptr[x], bptr[x + 1]):
                    y = bnbr[t]
                    if y == a:
                        continue
                    if y < n:
                        # a - face - vertex - face
                        if g_edge(a, y, gn_ptr, gn_nbr, gn_edge) >= 0:
                            continue
                        d = corner_dart(y, f0, vf_ptr, vf_face, vf_dart)
                        g1 = dface[d ^ 1]
                        g2 = dface[prv[d] ^ 1]
                        for u in range(bptr[y], bptr[y + 1]):
                            b = bnbr[u]
                            if b < nm or b == x:
                                continue
                            total += 1
                            f = b - nm
                            if f == g1 or f == g2:
                                continue
                            if corner_dart(a, f, vf_ptr, vf_face, vf_dart) >= 0:
                                continue
                            if cnt == buf.shape[0]:
                                buf = _grow(buf, cnt + 1)
                            buf[cnt, 0] = b
                            buf[cnt, 1] = x
                            buf[cnt, 2] = y
                            cnt += 1
                    else:
                        # a - face - edge - other face of that edge
                        e = y - n
                        total += 1
                        if ends[e, 0] == a or ends[e, 1] == a:
                            continue
                        f = dface[2 * e]
                        if f == f0:
                            f = dface[2 * e + 1]
                        if corner_dart(a, f, vf_ptr, vf_face, vf_dart) >= 0:
                            continue
                        if cnt == buf.shape[0]:
                            buf = _grow(buf, cnt + 1)
                        buf[cnt, 0] = nm + f
                        buf[cnt, 1] = x
                        buf[cnt, 2] = y
                        cnt += 1
        if cnt < min_paths:
            continue
        idx = np.argsort(buf[:cnt, 0], kind="mergesort")
        i = 0
        while i < cnt:
            j = i
            bi = buf[idx[i], 0]
            while j < cnt and buf[idx[j], 0] == bi:
                j += 1
            if j - i >= min_paths:
                if npoles + 1 >= poles.shape[0]:
                    poles = _grow(poles, npoles + 2)
                    ptr = _grow(ptr, npoles + 3)
                poles[npoles, 0] = a
                poles[npoles, 1] = bi
                paths = _grow(paths, npaths + (j - i))
                for t in range(i, j):
                    paths[npaths, 0] = buf[idx[t], 1]
                    paths[npaths, 1] = buf[idx[t], 2]
                    npaths += 1
                npoles += 1
                ptr[npoles] = npaths
            i = j
    return poles[:npoles], ptr[: npoles + 1], paths[:npaths], total


# ---------------------------------------------------------------------------
# conflict graph
# ---------------------------------------------------------------------------


def greedy_mis(nnodes, adj_ptr, adj_nbr, eligible, preselected):
    """Greedy maximal independent set scanning nodes in id order.

    ``preselected`` nodes enter first; they must be pairwise non-adjacent.
    """
    state = np.zeros(nnodes, dtype=np.int8)  # 1 chosen, 2 blocked
    for v in range(nnodes):
        if preselected[v]:
            state[v] = 1
    for v in range(nnodes):
        if state[v] == 1:
            for a in range(adj_ptr[v], adj_ptr[v + 1]):
                w = adj_nbr[a]
                if state[w] == 0:
                    state[w] = 2
    for v in range(nnodes):
        if state[v] != 0 or not eligible[v]:
            continue
        state[v] = 1
        for a in range(adj_ptr[v], adj_ptr[v + 1]):
            w = adj_nbr[a]
            if state[w] == 0:
                state[w] = 2
    return state == 1


_KERNELS = [
    "_grow", "bsearch", "g_edge", "corner_dart", "bcs_edge", "edge_on_face",
    "bfs_tree", "subtree_sizes", "pre_post", "dual_components",
    "cycle_sides", "signed_counts", "tree_children", "flag_inside", "flags_inside",
    "relation", "relations", "shared_node_pairs",
    "canonical_check", "mid_node", "enumerate_canonical", "frame_paths", "greedy_mis",
]

PY = {name: globals()[name] for name in _KERNELS}

if USE_NUMBA:  # pragma: no branch
    _jit = numba.njit(cache=True, nogil=True)
    for _name in _KERNELS:
        globals()[_name] = _jit(PY[_name])
    del _name


def backend() -> str:
    return "numba" if USE_NUMBA else "python"
