"""Points, point sets, finite metric tables, and their text formats.

All objects are immutable after construction and safe to share across
threads; the functions here are pure.  Coordinates are float64 throughout
and threshold comparisons elsewhere in the package are exact float
comparisons with no fuzz, so counting results are deterministic.
"""

import math

import numpy as np

from . import _kernels

# sets whose diameter exceeds 1 by more than this are treated as actually
# violating the unit-diameter normalization (below it is float dust)
DIAM_SLACK = 1e-9


class InputError(ValueError):
    """Raised when an operation's input contract is violated."""


class FormatError(ValueError):
    """Malformed text input; carries the offending 1-based line number."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


def distance(p, q):
    """Euclidean distance between two points of equal dimension."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise InputError(f"dimension mismatch: {p.shape} vs {q.shape}")
    dsq = 0.0
    for t in range(p.shape[0]):
        diff = p[t] - q[t]
        dsq += diff * diff
    return math.sqrt(dsq)


def validate_epsilon(eps):
    """Thresholds live strictly inside (0, 1); returns eps as float."""
    try:
        eps = float(eps)
    except (TypeError, ValueError):
        raise InputError(f"epsilon must be a number in (0, 1), got {eps!r}") from None
    if not (0.0 < eps < 1.0) or math.isnan(eps):
        raise InputError(f"epsilon must be in (0, 1), got {eps!r}")
    return eps


class PointSet:
    """Finite list of d-dimensional points with a cached exact diameter.

    The diameter is the exact maximum pairwise Euclidean distance, computed
    by a full pairwise scan so it agrees bit-for-bit with any brute-force
    recomputation.
    """

    __slots__ = ("coords", "diam")

    def __init__(self, coords):
        arr = np.ascontiguousarray(coords, dtype=np.float64)
        if arr.ndim != 2:
            raise InputError("coords must be an (n, d) array")
        n, d = arr.shape
        if n < 1 or d < 1:
            raise InputError("need at least one point of dimension >= 1")
        if not np.isfinite(arr).all():
            raise InputError("coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)
        object.__setattr__(self, "diam", math.sqrt(_kernels.max_pairwise_dsq(arr)))

    def __setattr__(self, name, value):
        raise AttributeError("PointSet is immutable")

    @classmethod
    def _trusted(cls, coords, diam):
        """Internal: skip the O(n^2) diameter scan when the caller can prove
        the exact value (it must equal what the scan would produce)."""
        obj = object.__new__(cls)
        arr = np.ascontiguousarray(coords, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(obj, "coords", arr)
        object.__setattr__(obj, "diam", float(diam))
        return obj

    @property
    def n(self):
        return self.coords.shape[0]

    @property
    def dim(self):
        return self.coords.shape[1]

    def __repr__(self):
        return f"PointSet(n={self.n}, d={self.dim}, diam={self.diam:.6g})"


def diameter(ps):
    """Exact max pairwise distance of a point set (0 for a single point)."""
    return ps.diam


def normalize_to_unit_diameter(ps):
    """Rescale about the centroid so the diameter becomes 1 (within 2e-12)."""
    if ps.n < 2 or ps.diam == 0.0:
        raise InputError("cannot normalize a degenerate point set")
    centroid = ps.coords.mean(axis=0)
    scaled = (ps.coords - centroid) * (1.0 / ps.diam)
    return PointSet(scaled)


class FiniteMetric:
    """Distance table on n points: symmetric, zero diagonal, nonnegative."""

    __slots__ = ("table",)

    def __init__(self, table):
        arr = np.ascontiguousarray(table, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InputError("metric table must be a square matrix")
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise InputError("distances must be finite and nonnegative")
        if (np.diag(arr) != 0).any():
            raise InputError("diagonal must be zero")
        if not np.array_equal(arr, arr.T):
            raise InputError("metric table must be symmetric")
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteMetric is immutable")

    @property
    def n(self):
        return self.table.shape[0]

    def dist(self, i, j):
        return float(self.table[i, j])

    @property
    def diam(self):
        return float(self.table.max())

    def check_triangle(self, samples=2000, seed=0):
        """Spot-check d(i,k) <= d(i,j) + d(j,k) on random triples."""
        n = self.n
        if n < 3:
            return True
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, n, size=(samples, 3))
        t = self.table
        lhs = t[idx[:, 0], idx[:, 2]]
        rhs = t[idx[:, 0], idx[:, 1]] + t[idx[:, 1], idx[:, 2]]
        return bool((lhs <= rhs + 1e-12).all())


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------
#
# Point set:   first line "d n", then n lines of d whitespace-separated
#              decimal coordinates; writers emit 17 significant digits.
# Metric:      first line "n", then n rows of n distances, same digits.


def write_pointset(path, ps):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{ps.dim} {ps.n}\n")
        for row in ps.coords:
            f.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def read_pointset(path):
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines:
        raise FormatError(1, "empty file, expected header 'd n'")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(1, f"expected header 'd n', got {lines[0]!r}")
    try:
        d, n = int(head[0]), int(head[1])
    except ValueError:
        raise FormatError(1, f"non-integer header fields in {lines[0]!r}") from None
    if d < 1 or n < 1:
        raise FormatError(1, f"need d >= 1 and n >= 1, got d={d} n={n}")
    if len(lines) < n + 1:
        raise FormatError(len(lines) + 1, f"expected {n} coordinate lines, file ends early")
    out = np.empty((n, d), dtype=np.float64)
    for i in range(n):
        parts = lines[i + 1].split()
        if len(parts) != d:
            raise FormatError(i + 2, f"expected {d} coordinates, got {len(parts)}")
        try:
            out[i] = [float(x) for x in parts]
        except ValueError:
            raise FormatError(i + 2, f"non-numeric coordinate in {lines[i + 1]!r}") from None
    return PointSet(out)


def write_metric(path, fm):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{fm.n}\n")
        for row in fm.table:
            f.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def read_metric(path):
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines:
        raise FormatError(1, "empty file, expected point count")
    try:
        n = int(lines[0].split()[0])
    except (ValueError, IndexError):
        raise FormatError(1, f"expected point count, got {lines[0]!r}") from None
    if len(lines) < n + 1:
        raise FormatError(len(lines) + 1, f"expected {n} table rows, file ends early")
    out = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        parts = lines[i + 1].split()
        if len(parts) != n:
            raise FormatError(i + 2, f"expected {n} entries, got {len(parts)}")
        try:
            out[i] = [float(x) for x in parts]
        except ValueError:
            raise FormatError(i + 2, f"non-numeric entry in {lines[i + 1]!r}") from None
    return FiniteMetric(out)
