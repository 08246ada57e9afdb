"""Deterministic generators for the extremal and counterexample families.

Every Euclidean generator emits a point set of diameter <= 1 (exactly 1
where an antipodal pair is constructed explicitly), and is bit-reproducible
from its arguments and seed.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import FiniteMetric, InputError, PointSet, validate_epsilon

FAMILIES = (
    "circle",
    "reuleaux",
    "polygon",
    "sphere_d",
    "origin_plus_cap",
    "two_clusters",
    "random_disk",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one generated configuration."""

    family: str
    n: int
    epsilon: Optional[float] = None
    k: Optional[int] = None  # polygon side count; None derives it from epsilon
    d: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES and self.family != "star":
            raise InputError(f"unknown family {self.family!r}")


def _clamp_norm_sq(P, rsq):
    """Nudge coordinates toward zero until each squared norm is <= rsq.

    The construction below mirrors points through the origin, so keeping
    every squared norm at or below rsq makes the mirrored pair at angle 0
    the exact float diameter.
    """
    for i in range(P.shape[0]):
        s = 0.0
        for t in range(P.shape[1]):
            s += P[i, t] * P[i, t]
        while s > rsq:
            j = int(np.argmax(np.abs(P[i])))
            P[i, j] = np.nextafter(P[i, j], 0.0)
            s = 0.0
            for t in range(P.shape[1]):
                s += P[i, t] * P[i, t]


def gen_circle(n):
    """n points equally spaced by angle on the circle of radius 1/2.

    For even n the sample contains exactly opposite points and the diameter
    is exactly 1.0; for odd n it falls short of 1.
    """
    if n < 3:
        raise InputError("circle needs n >= 3")
    if n % 2 == 0:
        half = n // 2
        th = 2.0 * np.pi * np.arange(half) / n
        P = 0.5 * np.stack([np.cos(th), np.sin(th)], axis=1)
        _clamp_norm_sq(P, 0.25)
        P = np.concatenate([P, -P])
        # the clamped mirror pair at angle 0 realizes the diameter exactly
        return PointSet._trusted(P, 1.0)
    th = 2.0 * np.pi * np.arange(n) / n
    P = 0.5 * np.stack([np.cos(th), np.sin(th)], axis=1)
    _clamp_norm_sq(P, 0.25)
    return PointSet(P)


def polygon_sides_for_epsilon(eps):
    """Smallest even k >= pi / sqrt(2 eps), so opposite sides stay antipodal.

    With circumradius 1/2 the apothem satisfies 2a = cos(pi/k) >= 1 - eps
    exactly when k is at or above that threshold.
    """
    eps = validate_epsilon(eps)
    k = int(math.ceil(math.pi / math.sqrt(2.0 * eps)))
    if k % 2:
        k += 1
    return max(k, 4)


def gen_polygon(n, k):
    """Regular k-gon (k even), circumradius 1/2, n points evenly on its sides.

    Each vertex is included; sides receive floor/ceil(n/k) points spaced
    evenly by arclength within the side.
    """
    if k % 2 or k < 4:
        raise InputError("polygon needs even k >= 4")
    if n < k:
        raise InputError("polygon needs n >= k")
    half = k // 2
    th = 2.0 * np.pi * np.arange(half) / k
    V = 0.5 * np.stack([np.cos(th), np.sin(th)], axis=1)
    _clamp_norm_sq(V, 0.25)
    V = np.concatenate([V, -V])  # vertex i+k/2 is the exact negation of i
    q, r = divmod(n, k)
    parts = []
    for i in range(k):
        a = V[i]
        b = V[(i + 1) % k]
        cnt = q + (1 if i < r else 0)
        t = np.arange(cnt, dtype=np.float64) / cnt
        parts.append(a + t[:, None] * (b - a))
    # opposite vertices are exact mirror pairs at distance 1; interior side
    # points sit strictly inside the circumcircle
    return PointSet._trusted(np.concatenate(parts), 1.0)


def gen_reuleaux(n, eps, seed=0):
    """Reuleaux triangle of width 1 with clustered vertices.

    Places ceil(sqrt(eps) * n / 3) points at each of the three corners
    (jittered into the corner cone by at most eps/100) and spreads the rest
    evenly by arclength over the three radius-1 arcs.  The total corner mass
    is ~sqrt(eps) * n, which keeps the ordered neighbor count within factor
    3 of eps * n^2 under the diagonal-inclusive convention.
    """
    if n < 30:
        raise InputError("reuleaux needs n >= 30")
    eps = validate_epsilon(eps)
    rng = np.random.default_rng(seed)
    V = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])
    centroid = V.mean(axis=0)
    m = int(math.ceil(math.sqrt(eps) * n / 3.0))
    n_arc = n - 3 * m
    if n_arc < 3:
        raise InputError("n too small for this epsilon: no arc points left")
    parts = []
    for v in V:
        u = centroid - v
        base = math.atan2(u[1], u[0])
        # corner interior spans 120 degrees; stay 5 degrees inside it
        ang = base + rng.uniform(-55.0, 55.0, size=m) * math.pi / 180.0
        r = rng.uniform(0.0, eps / 100.0, size=m)
        parts.append(v + np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1))
    per = np.full(3, n_arc // 3)
    per[: n_arc % 3] += 1
    for i in range(3):
        c = V[i]
        a = V[(i + 1) % 3]
        b = V[(i + 2) % 3]
        th_a = math.atan2(a[1] - c[1], a[0] - c[0])
        th_b = math.atan2(b[1] - c[1], b[0] - c[0])
        span = (th_b - th_a) % (2.0 * math.pi)
        if span > math.pi:
            th_a, th_b = th_b, th_a
            span = (th_b - th_a) % (2.0 * math.pi)
        t = (np.arange(per[i]) + 0.5) / per[i]
        th = th_a + t * span
        parts.append(c + np.stack([np.cos(th), np.sin(th)], axis=1))
    return PointSet(np.concatenate(parts))


def _fibonacci_sphere(n):
    """Deterministic even placement on the unit sphere in R^3."""
    i = np.arange(n, dtype=np.float64)
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    z = 1.0 - 2.0 * (i + 0.5) / n
    th = 2.0 * np.pi * i / golden
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([r * np.cos(th), r * np.sin(th), z], axis=1)


def _repulsion_sphere(n, d, rng, target_chord, rounds=400):
    """Maximin descent on the unit sphere in R^d (used for d >= 4)."""
    X = rng.normal(size=(n, d))
    X /= np.linalg.norm(X, axis=1)[:, None]
    for it in range(rounds):
        G = X @ X.T
        np.fill_diagonal(G, -1.0)
        j = np.argmax(G, axis=1)
        worst = math.sqrt(max(0.0, 2.0 - 2.0 * G.max()))
        if worst >= 1.5 * target_chord:
            break
        step = 0.3 * target_chord
        push = X - X[j]
        norms = np.linalg.norm(push, axis=1)
        close = norms < 2.0 * target_chord
        push[~close] = 0.0
        nz = close & (norms > 0)
        push[nz] /= norms[nz][:, None]
        X = X + step * push
        X /= np.linalg.norm(X, axis=1)[:, None]
    return X


def gen_sphere_d(n, d, seed=0):
    """n points spread evenly over the sphere of radius 1/2 in R^d.

    d=2 reduces to the circle construction; d=3 uses a seeded jittered
    Fibonacci placement; d>=4 uses pairwise-repulsion descent.  Minimum
    pairwise separation is at least (1/4) * n^(-1/(d-1)).
    """
    if d < 2:
        raise InputError("sphere needs d >= 2")
    if n < 10:
        raise InputError("sphere needs n >= 10")
    if d == 2:
        return gen_circle(n)
    rng = np.random.default_rng(seed)
    if d == 3:
        X = _fibonacci_sphere(n)
        # tangential jitter bounded well below the ~3.09/sqrt(n) lattice
        # spacing, so the separation guarantee keeps a ~1.8x margin
        jit = 0.35 * 3.09 / math.sqrt(n)
        V = rng.normal(size=(n, 3))
        V -= (V * X).sum(axis=1)[:, None] * X
        V /= np.linalg.norm(V, axis=1)[:, None]
        X = X + V * rng.uniform(0.0, jit, size=n)[:, None]
        X /= np.linalg.norm(X, axis=1)[:, None]
    else:
        target_chord = 2.0 * 0.25 * n ** (-1.0 / (d - 1))
        X = _repulsion_sphere(n, d, rng, target_chord)
    return PointSet(0.5 * X)


def gen_origin_plus_cap(n, d, eps, seed=0):
    """A jittered cluster at the origin plus n points on a spherical cap.

    The cluster holds ceil(eps^((d-1)/2) * n) points within eps/100 of the
    origin; the cap sits on the sphere of radius 1 - eps/100 with angular
    radius pi/6, which caps the set diameter at 1.
    """
    if d < 2:
        raise InputError("needs d >= 2")
    if n < 10:
        raise InputError("needs n >= 10")
    eps = validate_epsilon(eps)
    rng = np.random.default_rng(seed)
    delta = eps ** ((d - 1) / 2.0)
    m = int(math.ceil(delta * n))
    rho = 1.0 - eps / 100.0
    # origin cluster, jitter inside a ball of radius eps/100
    dirs = rng.normal(size=(m, d))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    rad = (eps / 100.0) * rng.uniform(0.0, 1.0, size=m) ** (1.0 / d)
    cluster = dirs * rad[:, None]
    # cap of angular half-width pi/6 around the first axis
    if d == 2:
        th = -np.pi / 6.0 + (np.arange(n) + 0.5) / n * (np.pi / 3.0)
        cap = np.stack([np.cos(th), np.sin(th)], axis=1)
    elif d == 3:
        i = np.arange(n, dtype=np.float64)
        golden = (1.0 + math.sqrt(5.0)) / 2.0
        zmin = math.cos(np.pi / 6.0)
        x = zmin + (1.0 - zmin) * (i + 0.5) / n
        ph = 2.0 * np.pi * i / golden
        r = np.sqrt(np.maximum(0.0, 1.0 - x * x))
        cap = np.stack([x, r * np.cos(ph), r * np.sin(ph)], axis=1)
    else:
        u = rng.uniform(size=n)
        ang = np.arccos(1.0 - u * (1.0 - math.cos(np.pi / 6.0)))
        perp = rng.normal(size=(n, d - 1))
        perp /= np.linalg.norm(perp, axis=1)[:, None]
        cap = np.concatenate([np.cos(ang)[:, None], np.sin(ang)[:, None] * perp], axis=1)
    return PointSet(np.concatenate([cluster, rho * cap]))


def gen_two_clusters(n, eps, seed=0):
    """Two tight clusters nearly a unit apart: every cross pair is an
    antipode, every within pair a neighbor."""
    if n < 2:
        raise InputError("needs n >= 2")
    eps = validate_epsilon(eps)
    rng = np.random.default_rng(seed)
    gap = 1.0 - eps / 2.0
    sizes = (n // 2, n - n // 2)
    centers = (np.array([-gap / 2.0, 0.0]), np.array([gap / 2.0, 0.0]))
    parts = []
    for m, c in zip(sizes, centers):
        ang = rng.uniform(0.0, 2.0 * np.pi, size=m)
        rad = (eps / 20.0) * np.sqrt(rng.uniform(0.0, 1.0, size=m))
        parts.append(c + np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1))
    return PointSet(np.concatenate(parts))


def gen_random_disk(n, d=2, seed=0):
    """n uniform points in the ball of radius 1/2 (diameter <= 1)."""
    if n < 1:
        raise InputError("needs n >= 1")
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(n, d))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    rad = 0.5 * rng.uniform(0.0, 1.0, size=n) ** (1.0 / d)
    return PointSet(dirs * rad[:, None])


def star_metric(n):
    """Hub-and-leaves metric: d(0, j) = 1 and d(i, j) = 2 for distinct leaves.

    Arbitrarily many mutually far pairs, yet no two points are close; the
    neighbor/antipode ratio of the Euclidean setting has no analogue here.
    """
    if n < 2:
        raise InputError("needs n >= 2 (hub plus at least one leaf)")
    t = np.full((n, n), 2.0)
    t[0, :] = 1.0
    t[:, 0] = 1.0
    np.fill_diagonal(t, 0.0)
    return FiniteMetric(t)


def make(spec: GeneratorSpec):
    """Build the point set (or metric) described by a GeneratorSpec."""
    f = spec.family
    if f == "circle":
        return gen_circle(spec.n)
    if f == "polygon":
        k = spec.k if spec.k is not None else polygon_sides_for_epsilon(spec.epsilon)
        return gen_polygon(spec.n, k)
    if f == "reuleaux":
        return gen_reuleaux(spec.n, spec.epsilon, seed=spec.seed)
    if f == "sphere_d":
        return gen_sphere_d(spec.n, spec.d, seed=spec.seed)
    if f == "origin_plus_cap":
        return gen_origin_plus_cap(spec.n, spec.d, spec.epsilon, seed=spec.seed)
    if f == "two_clusters":
        return gen_two_clusters(spec.n, spec.epsilon, seed=spec.seed)
    if f == "random_disk":
        return gen_random_disk(spec.n, spec.d, seed=spec.seed)
    if f == "star":
        return star_metric(spec.n)
    raise InputError(f"unknown family {f!r}")
