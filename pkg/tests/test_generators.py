import math

import numpy as np
import pytest

from antipodes.counting import count_pairs_brute, count_pairs_grid
from antipodes.experiments import fit_exponent, sweep
from antipodes.generators import (
    GeneratorSpec,
    gen_circle,
    gen_origin_plus_cap,
    gen_polygon,
    gen_reuleaux,
    gen_sphere_d,
    gen_two_clusters,
    make,
    polygon_sides_for_epsilon,
    star_metric,
)
from antipodes.geometry import InputError
from oracles import hausdorff_to_circle

ALL_SPECS = [
    GeneratorSpec("circle", 500),
    GeneratorSpec("polygon", 500, epsilon=1 / 64),
    GeneratorSpec("reuleaux", 500, epsilon=1 / 64, seed=3),
    GeneratorSpec("sphere_d", 500, d=3, seed=4),
    GeneratorSpec("sphere_d", 200, d=4, seed=5),
    GeneratorSpec("origin_plus_cap", 300, d=2, epsilon=1 / 64, seed=6),
    GeneratorSpec("origin_plus_cap", 300, d=3, epsilon=1 / 16, seed=7),
    GeneratorSpec("two_clusters", 101, epsilon=0.05, seed=8),
    GeneratorSpec("random_disk", 400, d=2, seed=9),
    GeneratorSpec("random_disk", 400, d=3, seed=10),
]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: f"{s.family}-d{s.d}")
def test_unit_diameter_invariant(spec):
    ps = make(spec)
    assert ps.diam <= 1.0 + 1e-9


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: f"{s.family}-d{s.d}")
def test_determinism(spec):
    a = make(spec)
    b = make(spec)
    assert np.array_equal(a.coords, b.coords)


# circle ---------------------------------------------------------------------


def test_circle_quarter_turns():
    ps = gen_circle(4)
    expect = np.array([[0.5, 0.0], [0.0, 0.5], [-0.5, 0.0], [0.0, -0.5]])
    assert np.allclose(ps.coords, expect, atol=1e-15)


def test_circle_even_diameter_exact():
    assert gen_circle(2000).diam == 1.0


def test_circle_odd_diameter_below_one():
    ps = gen_circle(2001)
    assert ps.diam < 1.0


def test_circle_per_point_counts():
    n, eps = 2000, 1.0 / 64.0
    c = count_pairs_brute(gen_circle(n), eps)
    per_antipodes = c.antipodes_ordered / n
    per_neighbors = (c.neighbors_ordered - n) / n
    assert math.sqrt(eps) * n / 2 <= per_antipodes <= 2 * math.sqrt(eps) * n
    assert eps * n / 2 <= per_neighbors <= 2 * eps * n


def test_circle_rejects_tiny():
    with pytest.raises(InputError):
        gen_circle(2)


# polygon --------------------------------------------------------------------


def test_polygon_apothem_value():
    # square: apothem = cos(pi/4)/2 = sqrt(2)/4
    ps = gen_polygon(8, 4)
    k = 4
    verts = ps.coords[:: len(ps.coords) // k][:k]
    mids = (verts + np.roll(verts, -1, axis=0)) / 2.0
    apothem = np.linalg.norm(mids, axis=1)
    assert np.allclose(apothem, 0.5 * math.cos(math.pi / 4), atol=1e-12)
    assert abs(apothem[0] - math.sqrt(2) / 4) < 1e-12


def test_polygon_hexagon_vertices():
    ps = gen_polygon(6, 6)
    assert ps.n == 6
    assert ps.diam == 1.0  # opposite vertices at distance 2R
    assert np.allclose(np.linalg.norm(ps.coords, axis=1), 0.5, atol=1e-15)


def test_polygon_antipode_total():
    eps = 1.0 / 256.0
    n = 20000
    k = polygon_sides_for_epsilon(eps)
    assert k == 36  # nearest even integer to pi / sqrt(2 eps) here
    c = count_pairs_grid(gen_polygon(n, k), eps)
    target = math.sqrt(eps) * n * n
    assert target / 3 <= c.antipodes_ordered <= 3 * target


def test_polygon_rejects_odd_k():
    with pytest.raises(InputError):
        gen_polygon(100, 7)


def test_polygon_vertices_included():
    ps = gen_polygon(23, 4)
    verts = {tuple(v) for v in gen_polygon(4, 4).coords}
    got = {tuple(p) for p in ps.coords}
    assert verts <= got


def test_polygon_hausdorff_to_circle():
    ps = gen_polygon(6400, 64)
    assert hausdorff_to_circle(ps.coords, 0.5) < 2e-3


# reuleaux -------------------------------------------------------------------


def test_reuleaux_triangle_vertices_present():
    ps = gen_reuleaux(600, 1 / 64, seed=0)
    V = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    for v in V:
        d = np.linalg.norm(ps.coords - v, axis=1).min()
        assert d <= (1 / 64) / 100


def test_reuleaux_scaling_counts():
    n, eps = 10000, 1.0 / 64.0
    c = count_pairs_grid(gen_reuleaux(n, eps, seed=1), eps)
    assert math.sqrt(eps) * n * n / 3 <= c.antipodes_ordered <= 3 * math.sqrt(eps) * n * n
    assert eps * n * n / 3 <= c.neighbors_ordered <= 3 * eps * n * n


def test_reuleaux_rejects_tiny():
    with pytest.raises(InputError):
        gen_reuleaux(20, 0.1)


# spheres --------------------------------------------------------------------


def test_sphere_points_on_sphere():
    for d, n in ((3, 500), (4, 150)):
        ps = gen_sphere_d(n, d, seed=1)
        r = np.linalg.norm(ps.coords, axis=1)
        assert np.abs(r - 0.5).max() <= 1e-12


def test_sphere_minimum_separation():
    for d, n in ((3, 2000), (4, 200), (5, 120)):
        ps = gen_sphere_d(n, d, seed=2)
        c = ps.coords
        dsq = ((c[:, None, :] - c[None, :, :]) ** 2).sum(-1)
        np.fill_diagonal(dsq, np.inf)
        min_sep = math.sqrt(dsq.min())
        assert min_sep >= 0.25 * n ** (-1.0 / (d - 1))


def test_sphere_d2_reduces_to_circle():
    assert np.array_equal(gen_sphere_d(100, 2).coords, gen_circle(100).coords)


def test_sphere_d3_ratio_exponent():
    spec = GeneratorSpec("sphere_d", 5000, d=3, seed=11)
    eps_list = [2.0**-j for j in range(2, 7)]
    fit = fit_exponent(sweep(spec, eps_list))
    assert 0.75 <= fit.slope <= 1.25


# origin plus cap ------------------------------------------------------------


def test_cap_delta_for_d3():
    # delta = eps^((d-1)/2) = eps when d = 3
    eps = 1.0 / 16.0
    ps = gen_origin_plus_cap(1000, 3, eps, seed=0)
    cluster = (np.linalg.norm(ps.coords, axis=1) <= eps / 100).sum()
    assert cluster == math.ceil(eps * 1000)


def test_cap_antipodes_near_delta_n_sq():
    n, eps = 5000, 1.0 / 64.0
    ps = gen_origin_plus_cap(n, 2, eps, seed=1)
    total = ps.n
    c = count_pairs_grid(ps, eps)
    delta = math.sqrt(eps)
    target = delta * total * total
    assert target / 3 <= c.antipodes_ordered <= 3 * target


def test_cap_diameter_many_seeds():
    for seed in range(5):
        ps = gen_origin_plus_cap(200, 2, 1 / 32, seed=seed)
        assert ps.diam <= 1.0 + 1e-9


# two clusters ---------------------------------------------------------------


def test_two_clusters_cross_and_within():
    ps = gen_two_clusters(8, 0.1, seed=0)
    c = count_pairs_brute(ps, 0.1)
    assert c.antipodes_ordered == 32
    assert c.neighbors_ordered >= 32


# star metric ----------------------------------------------------------------


def test_star_metric_table():
    fm = star_metric(3)
    assert fm.dist(1, 2) == 2.0
    assert fm.dist(0, 1) == 1.0 and fm.dist(0, 2) == 1.0
    assert fm.check_triangle()
    assert fm.diam == 2.0


def test_star_metric_rejects_tiny():
    with pytest.raises(InputError):
        star_metric(1)


def test_make_dispatch_star():
    fm = make(GeneratorSpec("star", 5))
    assert fm.n == 5


def test_unknown_family_rejected():
    with pytest.raises(InputError):
        GeneratorSpec("klein_bottle", 10)
