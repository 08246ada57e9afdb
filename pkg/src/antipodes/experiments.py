"""Epsilon sweeps, scaling-exponent fits, and annealing search.

Sweeps regenerate the configured family at every epsilon (families whose
construction depends on it get the fresh value), count exactly with the
grid engine, and optionally attach the full certificate chain.  The search
is plain simulated annealing over point displacements with the exact
ordered-pair ratio as its objective; its results are heuristic evidence
about attainable ratios, not bounds.
"""

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import _kernels
from .counting import count_pairs_grid
from .generators import GeneratorSpec, gen_circle, make
from .geometry import InputError, PointSet, validate_epsilon
from .pipeline import BoundReport, bound_report


@dataclass(frozen=True)
class SweepRow:
    """One epsilon's exact counts (ratio is None when antipodes vanish)."""

    epsilon: float
    n: int
    neighbors: int
    antipodes: int
    ratio: Optional[float]
    bound: Optional[BoundReport] = None


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares slope of log2(ratio) against log2(epsilon)."""

    slope: float
    intercept: float
    r_squared: float
    epsilon_range: tuple


@dataclass(frozen=True)
class AnnealSchedule:
    proposals: int = 200_000
    t_decay: float = 0.999
    sigma_hi: Optional[float] = None  # defaults to eps
    sigma_lo: Optional[float] = None  # defaults to eps / 100
    trace_every: int = 1000


@dataclass(frozen=True)
class SearchState:
    """Final annealing state: current and best configurations plus history."""

    current: PointSet
    current_objective: float
    best: PointSet
    best_objective: float
    temperature: float
    seed: int
    epsilon: float
    accepted: int
    proposals: int
    trace: list = field(compare=False)


def sweep(spec: GeneratorSpec, eps_list, with_bounds=False):
    """One SweepRow per epsilon (strictly decreasing), counts exact."""
    eps_list = [validate_epsilon(e) for e in eps_list]
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise InputError("epsilon list must be strictly decreasing")
    rows = []
    for eps in eps_list:
        ps = make(replace(spec, epsilon=eps))
        counts = count_pairs_grid(ps, eps)
        if counts.antipodes_ordered < 10 * ps.n:
            warnings.warn(
                f"family {spec.family!r} at eps={eps}: fewer than 10 antipodes "
                f"per point; increase n for stable scaling",
                stacklevel=2,
            )
        bound = bound_report(ps, eps) if with_bounds else None
        rows.append(
            SweepRow(
                epsilon=eps,
                n=ps.n,
                neighbors=counts.neighbors_ordered,
                antipodes=counts.antipodes_ordered,
                ratio=counts.ratio,
                bound=bound,
            )
        )
    return rows


def fit_exponent(rows):
    """Fit ratio ~ eps^alpha by least squares on dyadic logs.

    Rows with zero antipodes carry no ratio and are excluded; at least four
    usable rows are required.
    """
    usable = [r for r in rows if r.ratio is not None and r.ratio > 0]
    if len(usable) < 4:
        raise InputError(f"need at least 4 rows with antipodes, got {len(usable)}")
    x = np.log2([r.epsilon for r in usable])
    y = np.log2([r.ratio for r in usable])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r_sq = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_sq,
        epsilon_range=(min(r.epsilon for r in usable), max(r.epsilon for r in usable)),
    )


def _objective(coords, eps_sq, far_sq, n):
    near2, far2 = _kernels.brute_counts(coords, eps_sq, far_sq)
    neighbors = 2 * int(near2) + n
    antipodes = 2 * int(far2)
    if antipodes == 0:
        return math.inf, neighbors, antipodes
    return neighbors / antipodes, neighbors, antipodes


def _renormalized(coords):
    centroid = coords.mean(axis=0)
    diam = math.sqrt(_kernels.max_pairwise_dsq(coords))
    return (coords - centroid) * (1.0 / diam)


def extremal_search(n, eps, seed=0, schedule=None, start=None):
    """Anneal toward a low neighbors/antipodes ratio at fixed epsilon.

    One uniformly chosen point takes a Gaussian step (sigma annealed from
    eps down to eps/100), the set is renormalized to diameter 1, and the
    move is Metropolis-accepted on the exact objective.  Deterministic
    given the seed.  A start without any antipodal pair is replaced by the
    circle configuration.
    """
    eps = validate_epsilon(eps)
    if n > 5000:
        raise InputError("search is budgeted for n <= 5000")
    if n < 4:
        raise InputError("search needs n >= 4")
    sched = schedule or AnnealSchedule()
    sigma_hi = sched.sigma_hi if sched.sigma_hi is not None else eps
    sigma_lo = sched.sigma_lo if sched.sigma_lo is not None else eps / 100.0
    rng = np.random.default_rng(seed)
    eps_sq = eps * eps
    far_sq = (1.0 - eps) * (1.0 - eps)

    ps = start if start is not None else gen_circle(n)
    if ps.n != n:
        raise InputError(f"start has {ps.n} points, expected {n}")
    coords = _renormalized(np.array(ps.coords))
    obj, nb, ap = _objective(coords, eps_sq, far_sq, n)
    if not math.isfinite(obj):
        coords = _renormalized(np.array(gen_circle(n).coords))
        obj, nb, ap = _objective(coords, eps_sq, far_sq, n)
        if not math.isfinite(obj):
            raise InputError("even the circle start has no antipodes at this epsilon")

    best = coords.copy()
    best_obj = obj
    temp = obj
    accepted = 0
    trace = [(0, obj, best_obj)]
    dim = coords.shape[1]
    span = max(sched.proposals - 1, 1)
    for t in range(sched.proposals):
        sigma = sigma_hi * (sigma_lo / sigma_hi) ** (t / span)
        i = int(rng.integers(n))
        step = rng.normal(0.0, sigma, size=dim)
        cand = coords.copy()
        cand[i] += step
        cand = _renormalized(cand)
        cobj, cnb, cap = _objective(cand, eps_sq, far_sq, n)
        if cobj <= obj or rng.random() < math.exp(-(cobj - obj) / temp):
            coords = cand
            obj = cobj
            accepted += 1
            if obj < best_obj:
                best = coords.copy()
                best_obj = obj
                trace.append((t + 1, obj, best_obj))
        temp *= sched.t_decay
        if (t + 1) % sched.trace_every == 0:
            trace.append((t + 1, obj, best_obj))

    best_ps = PointSet(best)
    # the annealing loop scores with the brute kernel; confirm the reported
    # best against the grid engine, which is bit-identical by contract
    verify = count_pairs_grid(best_ps, eps)
    assert verify.ratio == best_obj, "grid recount disagrees with search objective"
    return SearchState(
        current=PointSet(coords),
        current_objective=obj,
        best=best_ps,
        best_objective=best_obj,
        temperature=temp,
        seed=seed,
        epsilon=eps,
        accepted=accepted,
        proposals=sched.proposals,
        trace=trace,
    )
