"""The certificate chain: hull -> boundary strip -> boxes -> matrix -> spectra.

For a planar point set of diameter <= 1 the chain of inequalities

    antipodes <= <n, M n> <= lambda_1(M) ||n||^2,
    lambda_1(M) <= sqrt(ones(M)),      neighbors >= ||n||^2

is verified instance by instance, where n is the occupancy vector of the
eps/4 boxes covering the boundary strip and M flags box pairs far enough
apart to host an antipodal pair.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .counting import count_pairs_grid
from .geometry import DIAM_SLACK, InputError, PointSet, validate_epsilon

# relative slack allowed on the eigenvalue link only: the power iteration
# estimate is a certified lower bound on lambda_1, so the quadratic-form
# comparison tolerates this much of its convergence residue
EIG_SLACK = 1e-8


class NonConvergenceError(RuntimeError):
    """Power iteration hit its cap; carries the last Rayleigh bracket."""

    def __init__(self, last, prev, iterations):
        super().__init__(
            f"power iteration did not converge in {iterations} steps "
            f"(last Rayleigh values {prev!r} -> {last!r})"
        )
        self.last = last
        self.prev = prev


@dataclass(frozen=True)
class ConvexHull:
    """Counterclockwise strictly convex vertex cycle (d=2).

    Degenerate inputs are represented honestly: one vertex for a single
    repeated point, two for a collinear set.
    """

    vertices: np.ndarray


@dataclass(frozen=True)
class BoxPartition:
    """Occupied eps/4 grid cells over a point set, in fixed cell order."""

    cell_side: float
    cells: np.ndarray  # (k, 2) int64, lexicographically sorted
    occupancy: np.ndarray  # (k,) int64
    k: int

    @property
    def lo(self):
        return self.cells * self.cell_side

    @property
    def hi(self):
        return (self.cells + 1) * self.cell_side

    @property
    def centers(self):
        return (self.cells + 0.5) * self.cell_side


@dataclass(frozen=True)
class AntipodalityMatrix:
    """Symmetric 0/1 matrix over boxes, stored as a sorted ordered-pair list.

    Entry (i, j) is set when the max corner-to-corner distance between the
    closed cells reaches 1 - eps.  ``rows``/``cols`` list every nonzero in
    row-major order, both orders included, so len(rows) == tr(M^T M).
    """

    k: int
    rows: np.ndarray
    cols: np.ndarray

    @property
    def ones_count(self):
        return int(len(self.rows))

    def dense(self):
        M = np.zeros((self.k, self.k))
        M[self.rows, self.cols] = 1.0
        return M


@dataclass(frozen=True)
class BoundReport:
    """Everything the chain produces for one instance, plus per-link flags."""

    n: int
    epsilon: float
    exact_neighbors: int
    exact_antipodes: int
    strip_points: int
    k: int
    k_times_eps: float  # observable constant in the k ~ 1/eps cover bound
    quad_form: int
    norm_sq: int
    lambda1: float
    trace_mtm: int
    links: dict = field(compare=False)
    chain_ok: bool = True

    def as_dict(self):
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "exact_neighbors": self.exact_neighbors,
            "exact_antipodes": self.exact_antipodes,
            "strip_points": self.strip_points,
            "k": self.k,
            "k_times_eps": self.k_times_eps,
            "quad_form": self.quad_form,
            "norm_sq": self.norm_sq,
            "lambda1": self.lambda1,
            "trace_mtm": self.trace_mtm,
            "links": dict(self.links),
            "chain_ok": self.chain_ok,
        }


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(ps):
    """Monotone-chain hull, CCW, no three collinear vertices retained."""
    if ps.dim != 2:
        raise InputError("convex hull is implemented for d=2 only")
    pts = np.unique(ps.coords, axis=0)
    if pts.shape[0] == 1:
        return ConvexHull(np.ascontiguousarray(pts))
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    verts = np.array(lower[:-1] + upper[:-1])
    if verts.shape[0] < 2:  # all points collinear: keep the two endpoints
        verts = np.array([pts[0], pts[-1]])
    return ConvexHull(np.ascontiguousarray(verts))


def filter_boundary_strip(ps, hull, eps, check=False):
    """Keep exactly the points within distance eps of the hull boundary.

    Dropped points cannot reach distance 1 - eps from anything else, so
    removing them never lowers the antipode count; with check=True that
    claim is verified by a full scan.
    """
    eps = validate_epsilon(eps)
    keep = _kernels.strip_mask(ps.coords, hull.vertices, eps * eps)
    mask = keep.astype(bool)
    if check and not mask.all():
        far_sq = (1.0 - eps) * (1.0 - eps)
        worst = _kernels.point_max_dsq(ps.coords, np.ascontiguousarray(ps.coords[~mask]))
        if (worst >= far_sq).any():
            raise AssertionError("strip filter dropped a point with an antipodal partner")
    if mask.all():
        return ps
    # both endpoints of any diameter pair are extreme points, hence on the
    # hull boundary at distance 0, hence always kept: the strip inherits the
    # parent's exact diameter
    return PointSet._trusted(ps.coords[mask], ps.diam)


def partition_boxes(ps, eps):
    """Occupied eps/4 cells (anchored at the origin) with occupancy vector."""
    eps = validate_epsilon(eps)
    h = eps / 4.0
    _, uniq, starts = _kernels.build_grid(ps.coords, h)
    return BoxPartition(h, uniq, np.diff(starts).astype(np.int64), int(uniq.shape[0]))


def antipodality_matrix(bp, eps):
    """Flag every box pair whose closed cells could host an antipodal pair."""
    eps = validate_epsilon(eps)
    far_sq = (1.0 - eps) * (1.0 - eps)
    lo = np.ascontiguousarray(bp.lo)
    hi = np.ascontiguousarray(bp.hi)
    I, J = _kernels.box_edges(lo, hi, far_sq)
    off = I != J
    rows = np.concatenate([I, J[off]])
    cols = np.concatenate([J, I[off]])
    order = np.lexsort((cols, rows))
    return AntipodalityMatrix(bp.k, rows[order], cols[order])


def top_eigenvalue(M, tol=1e-9, max_iter=100_000):
    """Largest eigenvalue of the symmetric 0/1 matrix via power iteration.

    Iterates x -> M(Mx) from the all-ones vector, so the estimate
    sqrt(<x, M^2 x> / <x, x>) = ||Mx|| / ||x|| converges to lambda_1 even
    when the spectrum contains -lambda_1 (bipartite-like box graphs), and
    is always a certified lower bound that dominates the plain Rayleigh
    quotient <x, Mx> / <x, x> of the final iterate.
    """
    if M.k < 1:
        raise InputError("matrix must have at least one box")
    if M.ones_count == 0:
        return 0.0
    rows = M.rows
    cols = M.cols
    x = np.ones(M.k)
    lam_prev = -1.0
    lam = 0.0
    for _ in range(max_iter):
        y = np.bincount(rows, weights=x[cols], minlength=M.k)
        nx = math.sqrt(float(x @ x))
        lam_new = math.sqrt(float(y @ y)) / nx
        z = np.bincount(rows, weights=y[cols], minlength=M.k)
        nz = math.sqrt(float(z @ z))
        if nz == 0.0:
            return 0.0
        if abs(lam_new - lam) <= tol * max(lam_new, 1e-300) and abs(lam - lam_prev) <= tol * max(
            lam_new, 1e-300
        ):
            return lam_new
        lam_prev = lam
        lam = lam_new
        x = z / nz
    raise NonConvergenceError(lam, lam_prev, max_iter)


def trace_mtm(M):
    """tr(M^T M) = number of ones in M (both orders of each box pair)."""
    return M.ones_count


def bound_report(ps, eps, check=False):
    """Run the full chain on a planar unit-diameter set and flag each link."""
    eps = validate_epsilon(eps)
    if ps.dim != 2:
        raise InputError("the certificate chain is implemented for d=2 only")
    if ps.diam > 1.0 + DIAM_SLACK:
        raise InputError(f"diameter {ps.diam!r} exceeds 1")
    exact = count_pairs_grid(ps, eps)
    hull = convex_hull(ps)
    strip = filter_boundary_strip(ps, hull, eps, check=check)
    bp = partition_boxes(strip, eps)
    M = antipodality_matrix(bp, eps)
    occ = bp.occupancy
    quad = int(occ[M.rows] @ occ[M.cols])
    norm_sq = int(occ @ occ)
    lam1 = top_eigenvalue(M)
    trace = trace_mtm(M)
    links = {
        "antipodes_le_quad_form": exact.antipodes_ordered <= quad,
        "neighbors_ge_norm_sq": exact.neighbors_ordered >= norm_sq,
        "quad_form_le_lambda1_norm_sq": quad <= lam1 * norm_sq * (1.0 + EIG_SLACK),
        "lambda1_le_sqrt_trace": lam1 <= math.sqrt(trace),
    }
    return BoundReport(
        n=ps.n,
        epsilon=eps,
        exact_neighbors=exact.neighbors_ordered,
        exact_antipodes=exact.antipodes_ordered,
        strip_points=strip.n,
        k=bp.k,
        k_times_eps=bp.k * eps,
        quad_form=quad,
        norm_sq=norm_sq,
        lambda1=lam1,
        trace_mtm=trace,
        links=links,
        chain_ok=all(links.values()),
    )
