"""Hot numeric kernels with two interchangeable backends.

The numba backend (default) JIT-compiles the loops below; setting the
environment variable ``ANTIPODES_NUMBA=0`` before import selects a pure-numpy
fallback.  Both backends perform the same float64 operations per point pair
(per-axis squared differences accumulated in axis order), so every integer
count they produce is bit-identical across backends and thread counts.

Threshold comparisons happen on squared distances against precomputed
``eps_sq``/``far_sq``; grid pruning bounds carry small one-sided safety
margins so a pruned fast path can never disagree with the pairwise scan.
"""

import os

import numpy as np

_env = os.environ.get("ANTIPODES_NUMBA", "1").strip().lower()
_want_numba = _env not in ("0", "false", "off", "no")

if _want_numba:
    try:
        from numba import njit, prange, set_num_threads

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dependency
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False

USING_NUMBA = HAVE_NUMBA

# relative/absolute slack applied to grid pruning bounds; covers the at most
# ~2 ulp a point can sit outside its nominal cell after the floor division
_REL = 1e-12
_ABS = 1e-14


def set_threads(n):
    """Cap worker threads for the parallel kernels (numba backend only)."""
    if USING_NUMBA and n is not None and n >= 1:
        set_num_threads(int(n))


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------


def _pair_dsq_block(A, B):
    """Squared distances between two coordinate blocks, axis-order summation."""
    dsq = np.zeros((A.shape[0], B.shape[0]))
    for t in range(A.shape[1]):
        diff = A[:, t, None] - B[None, :, t]
        dsq += diff * diff
    return dsq


def _max_pairwise_dsq_np(P):
    n = P.shape[0]
    best = 0.0
    chunk = max(1, 2**21 // max(n, 1))
    for s in range(0, n, chunk):
        dsq = _pair_dsq_block(P[s : s + chunk], P)
        m = float(dsq.max()) if dsq.size else 0.0
        if m > best:
            best = m
    return best


def _brute_counts_np(P, eps_sq, far_sq):
    """Unordered off-diagonal (near, far) pair counts."""
    n = P.shape[0]
    near = 0
    far = 0
    chunk = max(1, 2**21 // max(n, 1))
    for s in range(0, n, chunk):
        dsq = _pair_dsq_block(P[s : s + chunk], P)
        # keep strictly-upper pairs only
        rows = np.arange(s, min(s + chunk, n))
        upper = np.arange(n)[None, :] > rows[:, None]
        near += int(((dsq <= eps_sq) & upper).sum())
        far += int(((dsq >= far_sq) & upper).sum())
    return near, far


def _point_max_dsq_np(P, Q):
    """For each row of Q, the max squared distance to any row of P."""
    out = np.zeros(Q.shape[0])
    chunk = max(1, 2**21 // max(P.shape[0], 1))
    for s in range(0, Q.shape[0], chunk):
        dsq = _pair_dsq_block(Q[s : s + chunk], P)
        out[s : s + chunk] = dsq.max(axis=1)
    return out


def _grid_near_np(P, uniq, starts, offsets, eps_sq):
    cell_map = {tuple(c): i for i, c in enumerate(uniq)}
    total = 0
    for ci in range(uniq.shape[0]):
        s0, e0 = starts[ci], starts[ci + 1]
        block = P[s0:e0]
        dsq = _pair_dsq_block(block, block)
        upper = np.triu(np.ones(dsq.shape, bool), 1)
        total += int(((dsq <= eps_sq) & upper).sum())
        base = uniq[ci]
        for off in offsets:
            cj = cell_map.get(tuple(base + off))
            if cj is None:
                continue
            s1, e1 = starts[cj], starts[cj + 1]
            dsq = _pair_dsq_block(block, P[s1:e1])
            total += int((dsq <= eps_sq).sum())
    return total


def _grid_far_np(P, uniq, starts, counts, h, far_sq):
    k = uniq.shape[0]
    total = 0
    same_gap = h * (1.0 + _REL) + _ABS
    same_max = uniq.shape[1] * same_gap * same_gap
    for i in range(k):
        s0, e0 = starts[i], starts[i + 1]
        block = P[s0:e0]
        if same_max >= far_sq:
            dsq = _pair_dsq_block(block, block)
            upper = np.triu(np.ones(dsq.shape, bool), 1)
            total += int(((dsq >= far_sq) & upper).sum())
        if i + 1 >= k:
            continue
        dc = np.abs(uniq[i + 1 :] - uniq[i])
        g = np.maximum(dc - 1, 0) * h
        g = np.maximum(g * (1.0 - _REL) - _ABS, 0.0)
        G = (dc + 1) * h * (1.0 + _REL) + _ABS
        minsq = (g * g).sum(axis=1)
        maxsq = (G * G).sum(axis=1)
        reach = maxsq >= far_sq
        whole = reach & (minsq >= far_sq)
        total += int((counts[i + 1 :][whole] * counts[i]).sum())
        for j in np.nonzero(reach & ~whole)[0] + i + 1:
            s1, e1 = starts[j], starts[j + 1]
            dsq = _pair_dsq_block(block, P[s1:e1])
            total += int((dsq >= far_sq).sum())
    return total


def _pt_seg_dsq_np(px, py, ax, ay, bx, by):
    vx = bx - ax
    vy = by - ay
    wx = px - ax
    wy = py - ay
    vv = vx * vx + vy * vy
    t = np.where(vv > 0.0, (wx * vx + wy * vy) / np.where(vv > 0.0, vv, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    dx = wx - t * vx
    dy = wy - t * vy
    return dx * dx + dy * dy


def _strip_mask_np(P, hull, eps_sq):
    # same decision as the numba kernel ("some edge within eps", an
    # order-independent predicate), evaluated window-first around the edge
    # that matched the previous point, falling back to a full scan
    n = P.shape[0]
    m = hull.shape[0]
    ax = hull[:, 0]
    ay = hull[:, 1]
    bx = np.roll(hull[:, 0], -1)
    by = np.roll(hull[:, 1], -1)
    keep = np.zeros(n, np.uint8)
    window = min(m, 128)
    idx = np.arange(window)
    last = 0
    for i in range(n):
        px, py = P[i, 0], P[i, 1]
        e = (last + idx) % m
        dsq = _pt_seg_dsq_np(px, py, ax[e], ay[e], bx[e], by[e])
        hit = np.nonzero(dsq <= eps_sq)[0]
        if len(hit):
            keep[i] = 1
            last = int(e[hit[0]])
            continue
        if window < m:
            dsq = _pt_seg_dsq_np(px, py, ax, ay, bx, by)
            hit = np.nonzero(dsq <= eps_sq)[0]
            if len(hit):
                keep[i] = 1
                last = int(hit[0])
    return keep


def _box_edges_np(lo, hi, far_sq):
    """Upper-triangle (i <= j) pairs of boxes whose max corner gap reaches far_sq."""
    k = lo.shape[0]
    I = []
    J = []
    for i in range(k):
        g1 = np.abs(lo[i] - hi[i:])
        g2 = np.abs(hi[i] - lo[i:])
        G = np.maximum(g1, g2) * (1.0 + _REL) + _ABS
        j = np.nonzero((G * G).sum(axis=1) >= far_sq)[0] + i
        I.append(np.full(len(j), i, np.int64))
        J.append(j.astype(np.int64))
    if not I:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(I), np.concatenate(J)


def _profile_hist_np(indptr, indices, centers, radius_sq, nlev):
    k = indptr.shape[0] - 1
    A = np.zeros((k, k), np.int32)
    for v in range(k):
        A[v, indices[indptr[v] : indptr[v + 1]]] = 1
    out = np.zeros((k, nlev), np.int64)
    chunk = max(1, 2**22 // max(k, 1))
    for s in range(0, k, chunk):
        common = A[s : s + chunk] @ A  # |N(v) ∩ N(w)|
        dsq = _pair_dsq_block(centers[s : s + chunk], centers)
        eligible = dsq > radius_sq
        eligible[np.arange(common.shape[0]), np.arange(s, s + common.shape[0])] = False
        cc = np.where(eligible, common, 0)
        pos = cc > 0
        lev = np.zeros_like(cc)
        lev[pos] = np.floor(np.log2(cc[pos])).astype(lev.dtype)
        lev = np.minimum(lev, nlev - 1)
        for t in range(nlev):
            out[s : s + chunk, t] = ((lev == t) & pos).sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _max_pairwise_dsq_nb(P):
        n = P.shape[0]
        d = P.shape[1]
        best = 0.0
        for i in prange(n):
            local = 0.0
            for j in range(i + 1, n):
                dsq = 0.0
                for t in range(d):
                    diff = P[i, t] - P[j, t]
                    dsq += diff * diff
                if dsq > local:
                    local = dsq
            best = max(best, local)
        return best

    @njit(cache=True, parallel=True)
    def _brute_counts_nb(P, eps_sq, far_sq):
        n = P.shape[0]
        d = P.shape[1]
        near = 0
        far = 0
        for i in prange(n):
            cn = 0
            cf = 0
            for j in range(i + 1, n):
                dsq = 0.0
                for t in range(d):
                    diff = P[i, t] - P[j, t]
                    dsq += diff * diff
                if dsq <= eps_sq:
                    cn += 1
                if dsq >= far_sq:
                    cf += 1
            near += cn
            far += cf
        return near, far

    @njit(cache=True, parallel=True)
    def _point_max_dsq_nb(P, Q):
        n = P.shape[0]
        d = P.shape[1]
        out = np.zeros(Q.shape[0])
        for q in prange(Q.shape[0]):
            best = 0.0
            for j in range(n):
                dsq = 0.0
                for t in range(d):
                    diff = Q[q, t] - P[j, t]
                    dsq += diff * diff
                if dsq > best:
                    best = dsq
            out[q] = best
        return out

    @njit(cache=True)
    def _find_cell(uniq, key):
        lo = 0
        hi = uniq.shape[0]
        while lo < hi:
            mid = (lo + hi) // 2
            less = False
            greater = False
            for t in range(uniq.shape[1]):
                if uniq[mid, t] < key[t]:
                    less = True
                    break
                if uniq[mid, t] > key[t]:
                    greater = True
                    break
            if less:
                lo = mid + 1
            elif greater:
                hi = mid
            else:
                return mid
        return -1

    @njit(cache=True, parallel=True)
    def _grid_near_nb(P, uniq, starts, offsets, eps_sq):
        k = uniq.shape[0]
        d = P.shape[1]
        total = 0
        for ci in prange(k):
            cnt = 0
            s0 = starts[ci]
            e0 = starts[ci + 1]
            for a in range(s0, e0):
                for b in range(a + 1, e0):
                    dsq = 0.0
                    for t in range(d):
                        diff = P[a, t] - P[b, t]
                        dsq += diff * diff
                    if dsq <= eps_sq:
                        cnt += 1
            key = np.empty(d, np.int64)
            for o in range(offsets.shape[0]):
                for t in range(d):
                    key[t] = uniq[ci, t] + offsets[o, t]
                cj = _find_cell(uniq, key)
                if cj < 0:
                    continue
                s1 = starts[cj]
                e1 = starts[cj + 1]
                for a in range(s0, e0):
                    for b in range(s1, e1):
                        dsq = 0.0
                        for t in range(d):
                            diff = P[a, t] - P[b, t]
                            dsq += diff * diff
                        if dsq <= eps_sq:
                            cnt += 1
            total += cnt
        return total

    @njit(cache=True, parallel=True)
    def _grid_far_nb(P, uniq, starts, counts, h, far_sq):
        k = uniq.shape[0]
        d = P.shape[1]
        total = 0
        same_gap = h * (1.0 + _REL) + _ABS
        same_max = d * same_gap * same_gap
        for i in prange(k):
            cnt = 0
            s0 = starts[i]
            e0 = starts[i + 1]
            if same_max >= far_sq:
                for a in range(s0, e0):
                    for b in range(a + 1, e0):
                        dsq = 0.0
                        for t in range(d):
                            diff = P[a, t] - P[b, t]
                            dsq += diff * diff
                        if dsq >= far_sq:
                            cnt += 1
            for j in range(i + 1, k):
                minsq = 0.0
                maxsq = 0.0
                for t in range(d):
                    dc = uniq[i, t] - uniq[j, t]
                    if dc < 0:
                        dc = -dc
                    g = (dc - 1) * h
                    if g < 0.0:
                        g = 0.0
                    g = g * (1.0 - _REL) - _ABS
                    if g < 0.0:
                        g = 0.0
                    G = (dc + 1) * h * (1.0 + _REL) + _ABS
                    minsq += g * g
                    maxsq += G * G
                if maxsq < far_sq:
                    continue
                s1 = starts[j]
                e1 = starts[j + 1]
                if minsq >= far_sq:
                    cnt += (e0 - s0) * (e1 - s1)
                else:
                    for a in range(s0, e0):
                        for b in range(s1, e1):
                            dsq = 0.0
                            for t in range(d):
                                diff = P[a, t] - P[b, t]
                                dsq += diff * diff
                            if dsq >= far_sq:
                                cnt += 1
            total += cnt
        return total

    @njit(cache=True)
    def _pt_seg_dsq(px, py, ax, ay, bx, by):
        vx = bx - ax
        vy = by - ay
        wx = px - ax
        wy = py - ay
        vv = vx * vx + vy * vy
        if vv > 0.0:
            t = (wx * vx + wy * vy) / vv
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        else:
            t = 0.0
        dx = wx - t * vx
        dy = wy - t * vy
        return dx * dx + dy * dy

    @njit(cache=True)
    def _strip_mask_nb(P, hull, eps_sq):
        n = P.shape[0]
        m = hull.shape[0]
        keep = np.zeros(n, np.uint8)
        last = 0
        for i in range(n):
            px = P[i, 0]
            py = P[i, 1]
            # consecutive points tend to sit near the same hull edge
            for step in range(m):
                e = last + step
                if e >= m:
                    e -= m
                f = e + 1
                if f == m:
                    f = 0
                dsq = _pt_seg_dsq(px, py, hull[e, 0], hull[e, 1], hull[f, 0], hull[f, 1])
                if dsq <= eps_sq:
                    keep[i] = 1
                    last = e
                    break
        return keep

    @njit(cache=True, parallel=True)
    def _box_edges_nb(lo, hi, far_sq):
        k = lo.shape[0]
        d = lo.shape[1]
        row = np.zeros(k + 1, np.int64)
        for i in prange(k):
            c = 0
            for j in range(i, k):
                maxsq = 0.0
                for t in range(d):
                    g1 = lo[i, t] - hi[j, t]
                    if g1 < 0.0:
                        g1 = -g1
                    g2 = hi[i, t] - lo[j, t]
                    if g2 < 0.0:
                        g2 = -g2
                    G = g1 if g1 > g2 else g2
                    G = G * (1.0 + _REL) + _ABS
                    maxsq += G * G
                if maxsq >= far_sq:
                    c += 1
            row[i + 1] = c
        total = 0
        for i in range(k):
            total += row[i + 1]
            row[i + 1] = total
        I = np.empty(total, np.int64)
        J = np.empty(total, np.int64)
        for i in prange(k):
            p = row[i]
            for j in range(i, k):
                maxsq = 0.0
                for t in range(d):
                    g1 = lo[i, t] - hi[j, t]
                    if g1 < 0.0:
                        g1 = -g1
                    g2 = hi[i, t] - lo[j, t]
                    if g2 < 0.0:
                        g2 = -g2
                    G = g1 if g1 > g2 else g2
                    G = G * (1.0 + _REL) + _ABS
                    maxsq += G * G
                if maxsq >= far_sq:
                    I[p] = i
                    J[p] = j
                    p += 1
        return I, J

    @njit(cache=True, parallel=True)
    def _profile_hist_nb(indptr, indices, centers, radius_sq, nlev):
        k = indptr.shape[0] - 1
        out = np.zeros((k, nlev), np.int64)
        for v in prange(k):
            cnt = np.zeros(k, np.int64)
            for ui in range(indptr[v], indptr[v + 1]):
                u = indices[ui]
                for wi in range(indptr[u], indptr[u + 1]):
                    cnt[indices[wi]] += 1
            for w in range(k):
                c = cnt[w]
                if c <= 0 or w == v:
                    continue
                dx = centers[v, 0] - centers[w, 0]
                dy = centers[v, 1] - centers[w, 1]
                if dx * dx + dy * dy <= radius_sq:
                    continue
                lev = 0
                cc = c
                while cc > 1:
                    cc >>= 1
                    lev += 1
                if lev >= nlev:
                    lev = nlev - 1
                out[v, lev] += 1
        return out


# public dispatch table ------------------------------------------------------

if USING_NUMBA:
    max_pairwise_dsq = _max_pairwise_dsq_nb
    brute_counts = _brute_counts_nb
    point_max_dsq = _point_max_dsq_nb
    grid_near = _grid_near_nb
    grid_far = _grid_far_nb
    strip_mask = _strip_mask_nb
    box_edges = _box_edges_nb
    profile_hist = _profile_hist_nb
else:
    max_pairwise_dsq = _max_pairwise_dsq_np
    brute_counts = _brute_counts_np
    point_max_dsq = _point_max_dsq_np
    grid_near = _grid_near_np
    grid_far = _grid_far_np
    strip_mask = _strip_mask_np
    box_edges = _box_edges_np
    profile_hist = _profile_hist_np


def build_grid(coords, cell_side):
    """Hash points to integer cells of the given side, grouped and sorted.

    Returns (order, uniq, starts): a permutation sorting points by cell,
    the (k, d) lexicographically sorted occupied cells, and prefix offsets
    into the sorted point array.  The cell of a point is floor(coord / side)
    componentwise.
    """
    cells = np.floor(coords / cell_side).astype(np.int64)
    order = np.lexsort(cells.T[::-1])
    sc = cells[order]
    if len(sc) == 0:
        return order, sc, np.zeros(1, np.int64)
    change = np.any(sc[1:] != sc[:-1], axis=1)
    starts = np.concatenate(([0], np.nonzero(change)[0] + 1, [len(sc)])).astype(np.int64)
    uniq = np.ascontiguousarray(sc[starts[:-1]])
    return order, uniq, starts


def half_neighbor_offsets(d):
    """Offsets in {-1,0,1}^d that are lexicographically positive.

    Visiting only these from each cell enumerates every unordered pair of
    Chebyshev-adjacent cells exactly once.
    """
    grids = np.meshgrid(*([np.array([-1, 0, 1], np.int64)] * d), indexing="ij")
    offs = np.stack([g.ravel() for g in grids], axis=1)
    keep = []
    for o in offs:
        nz = np.nonzero(o)[0]
        if len(nz) and o[nz[0]] > 0:
            keep.append(o)
    return np.array(keep, np.int64).reshape(-1, d)
