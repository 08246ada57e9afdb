"""Box-graph profiling: common-neighbor tail counts and edge growth fits.

The box graph has one vertex per occupied box and an edge wherever the
antipodality matrix has a one.  The profile measures, for each vertex v and
each dyadic s, how many non-forbidden vertices share at least s neighbors
with v; geometry says that tail decays like k/s outside a ~sqrt(eps)
forbidden ball around v.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import InputError


@dataclass(frozen=True)
class BoxGraph:
    """k vertices with CSR adjacency and per-vertex plane positions."""

    k: int
    indptr: np.ndarray
    indices: np.ndarray
    centers: np.ndarray  # (k, 2)

    @property
    def edge_count(self):
        off_diag = int((self.indices != np.repeat(np.arange(self.k), np.diff(self.indptr))).sum())
        return off_diag // 2

    @classmethod
    def from_matrix(cls, M, bp):
        """Build from an AntipodalityMatrix and its BoxPartition."""
        rows = M.rows
        counts = np.bincount(rows, minlength=M.k)
        indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
        return cls(M.k, indptr, M.cols.astype(np.int64), np.ascontiguousarray(bp.centers))

    @classmethod
    def from_edges(cls, k, pairs, centers=None):
        """Build from undirected (i, j) pairs; centers default to zeros."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= k):
            raise InputError("edge endpoint out of range")
        off = pairs[:, 0] != pairs[:, 1]
        rows = np.concatenate([pairs[:, 0], pairs[off, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[off, 0]])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        dup = np.ones(len(rows), bool)
        dup[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        rows, cols = rows[dup], cols[dup]
        counts = np.bincount(rows, minlength=k)
        indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
        if centers is None:
            centers = np.zeros((k, 2))
        return cls(k, indptr, cols, np.ascontiguousarray(np.asarray(centers, dtype=np.float64)))


@dataclass(frozen=True)
class CommonNeighborProfile:
    """Max-over-vertices tail counts of shared-neighbor sizes."""

    k: int
    forbidden_radius: float
    s_values: tuple  # dyadic thresholds 1, 2, 4, ...
    counts: tuple  # count_s = max_v |{w not forbidden: |N(v) & N(w)| >= s}|
    c_emp: float  # max_s s * count_s / k
    c_forbidden: float  # max_v |N_v| / sqrt(k)

    def rows(self):
        return list(zip(self.s_values, self.counts))


def common_neighbor_profile(g, forbidden_radius):
    """Tabulate shared-neighbor tails outside each vertex's forbidden ball.

    For each vertex v the set N_v = {w : |center_w - center_v| <= radius}
    (which always contains v) is excluded; for s in 1, 2, 4, ..., the table
    reports the max over v of how many eligible w still share >= s
    neighbors with v.  c_emp = max_s s * count_s / k is the empirical
    constant of the k/s decay.
    """
    if forbidden_radius < 0:
        raise InputError("forbidden radius must be nonnegative")
    k = g.k
    nlev = max(1, int(math.floor(math.log2(max(k, 1)))) + 1)
    hist = _kernels.profile_hist(
        g.indptr, g.indices, g.centers, forbidden_radius * forbidden_radius, nlev
    )
    # count of eligible w with common >= 2^t, per vertex, then max over v
    tail = np.cumsum(hist[:, ::-1], axis=1)[:, ::-1]
    counts = tail.max(axis=0) if k else np.zeros(nlev, np.int64)
    s_values = tuple(1 << t for t in range(nlev))
    c_emp = max((s * int(c) / k for s, c in zip(s_values, counts)), default=0.0)
    # forbidden-set sizes from pairwise center distances
    rsq = forbidden_radius * forbidden_radius
    sizes = np.zeros(k, np.int64)
    chunk = max(1, 2**21 // max(k, 1))
    C = g.centers
    for s in range(0, k, chunk):
        dsq = np.zeros((min(chunk, k - s), k))
        for t in range(C.shape[1]):
            diff = C[s : s + chunk, t, None] - C[None, :, t]
            dsq += diff * diff
        sizes[s : s + chunk] = (dsq <= rsq).sum(axis=1)
    c_forbidden = float(sizes.max() / math.sqrt(k)) if k else 0.0
    return CommonNeighborProfile(
        k, forbidden_radius, s_values, tuple(int(c) for c in counts), float(c_emp), c_forbidden
    )


def edge_growth_check(sweep):
    """Fit log|E| against log k over a sweep of (k, |E|) pairs.

    Returns (slope, log_coefficient): the least-squares slope, and the
    constant b in log|E| = 1.5 log k + 0.5 log log k + b fitted with the
    exponent pinned, i.e. the empirical prefactor of the
    sqrt(log k) * k^(3/2) growth envelope.
    """
    ks = np.array([float(k) for k, _ in sweep])
    es = np.array([float(e) for _, e in sweep])
    if len(ks) < 4 or len(np.unique(ks)) < 4:
        raise InputError("need at least 4 sweep points with distinct k")
    if (ks <= 1).any() or (es <= 0).any():
        raise InputError("need k > 1 and |E| > 0 for log-log fitting")
    x = np.log(ks)
    y = np.log(es)
    slope, _ = np.polyfit(x, y, 1)
    log_coefficient = float(np.mean(y - 1.5 * x - 0.5 * np.log(np.log(ks))))
    return float(slope), log_coefficient
