import warnings

import numpy as np
import pytest

from antipodes.counting import (
    PairCounts,
    count_pairs_brute,
    count_pairs_grid,
    count_pairs_metric,
    pigeonhole_lower_bound,
    ratio_floor,
)
from antipodes.generators import (
    gen_circle,
    gen_random_disk,
    gen_two_clusters,
    star_metric,
)
from antipodes.geometry import InputError, PointSet
from oracles import slow_pair_counts


def both_engines(ps, eps):
    b = count_pairs_brute(ps, eps)
    g = count_pairs_grid(ps, eps)
    assert (b.neighbors_ordered, b.antipodes_ordered) == (
        g.neighbors_ordered,
        g.antipodes_ordered,
    ), "engines disagree"
    return b


def test_far_segment():
    c = both_engines(PointSet([[0.0, 0.0], [1.0, 0.0]]), 0.1)
    assert c.antipodes_ordered == 2
    assert c.neighbors_ordered == 2


def test_single_point():
    c = both_engines(PointSet([[0.3, 0.1]]), 0.5)
    assert c.antipodes_ordered == 0
    assert c.neighbors_ordered == 1


def test_half_distance_pair():
    c = both_engines(PointSet([[0.0, 0.0], [0.5, 0.0]]), 0.1)
    assert c.neighbors_ordered == 2
    assert c.antipodes_ordered == 0


def test_two_clusters_closed_form():
    ps = gen_two_clusters(8, 0.1)
    c = both_engines(ps, 0.1)
    assert c.antipodes_ordered == 2 * 4 * 4
    assert c.neighbors_ordered >= 2 * 16  # counting the diagonal
    assert (c.neighbors_ordered, c.antipodes_ordered) == slow_pair_counts(
        ps.coords.tolist(), 0.1
    )


def test_two_clusters_minimal():
    c = both_engines(gen_two_clusters(2, 0.1), 0.1)
    assert c.antipodes_ordered == 2
    assert c.neighbors_ordered == 2


def test_matches_slow_oracle_random():
    rng = np.random.default_rng(0)
    for trial in range(8):
        n = int(rng.integers(5, 80))
        d = int(rng.integers(2, 4))
        ps = gen_random_disk(n, d=d, seed=trial)
        eps = float(2.0 ** -rng.integers(1, 6))
        c = both_engines(ps, eps)
        assert (c.neighbors_ordered, c.antipodes_ordered) == slow_pair_counts(
            ps.coords.tolist(), eps
        )


def test_grid_equals_brute_many_seeds():
    rng = np.random.default_rng(123)
    for trial in range(40):
        n = int(rng.integers(20, 2000))
        d = int(rng.integers(2, 4))
        eps = float(2.0 ** -rng.integers(3, 9))
        ps = gen_random_disk(n, d=d, seed=10_000 + trial)
        both_engines(ps, eps)


def test_grid_equals_brute_on_circle():
    both_engines(gen_circle(4096), 1.0 / 64.0)


def test_counts_monotone_in_epsilon():
    ps = gen_random_disk(500, seed=9)
    eps_grid = [2.0**-j for j in range(8, 2, -1)]  # increasing
    prev = None
    for eps in eps_grid:
        c = count_pairs_grid(ps, eps)
        if prev is not None:
            assert c.neighbors_ordered >= prev.neighbors_ordered
            assert c.antipodes_ordered >= prev.antipodes_ordered
        prev = c


def test_pair_count_invariants():
    rng = np.random.default_rng(4)
    for trial in range(10):
        n = int(rng.integers(2, 300))
        ps = gen_random_disk(n, seed=trial + 50)
        eps = float(2.0 ** -rng.integers(1, 8))
        c = count_pairs_grid(ps, eps)
        assert c.neighbors_ordered >= n
        assert c.neighbors_ordered <= n * n
        assert c.antipodes_ordered <= n * n - n
        assert (c.neighbors_ordered - n) % 2 == 0
        assert c.antipodes_ordered % 2 == 0


def test_diameter_contract():
    ps = PointSet([[0.0, 0.0], [1.5, 0.0]])
    with pytest.raises(InputError):
        count_pairs_brute(ps, 0.1)
    with pytest.raises(InputError):
        count_pairs_grid(ps, 0.1)


def test_diameter_warning_between_dust_and_error():
    ps = PointSet([[0.0, 0.0], [1.0 + 1e-10, 0.0]])
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        count_pairs_brute(ps, 0.1)
    assert any("diameter" in str(w.message) for w in rec)


def test_ties_count_on_both_thresholds():
    # distances exactly eps and exactly 1-eps must both be included
    ps = PointSet([[0.0, 0.0], [0.25, 0.0], [0.75, 0.0]])
    c = both_engines(ps, 0.25)
    # (0,1) at exactly eps -> neighbor; (0,2) at exactly 1-eps -> antipode
    assert c.neighbors_ordered == 3 + 2
    assert c.antipodes_ordered >= 2


def test_metric_star_closed_form():
    for n in (3, 10, 57):
        fm = star_metric(n)
        c = count_pairs_metric(fm, 0.5, 2.0)
        assert c.neighbors_ordered == n  # diagonal only
        assert c.antipodes_ordered == (n - 1) * (n - 2)
    assert count_pairs_metric(star_metric(3), 0.5, 2.0).antipodes_ordered == 2


def test_metric_threshold_order_error():
    fm = star_metric(5)
    with pytest.raises(InputError):
        count_pairs_metric(fm, 2.0, 0.5)
    with pytest.raises(InputError):
        count_pairs_metric(fm, 0.5, 3.5)  # beyond the diameter


def test_pigeonhole_coincident_cluster():
    rng = np.random.default_rng(8)
    eps = 1.0 / 16.0
    pts = rng.uniform(-eps / 100, eps / 100, size=(40, 2))
    ps = PointSet(pts)
    k_cover, bound = pigeonhole_lower_bound(ps, eps)
    c = count_pairs_grid(ps, eps)
    assert k_cover <= 4
    assert bound >= ps.n * ps.n // 4
    assert c.neighbors_ordered == ps.n * ps.n


def test_pigeonhole_two_far_points():
    ps = PointSet([[0.0, 0.0], [1.0, 0.0]])
    k_cover, bound = pigeonhole_lower_bound(ps, 0.1)
    assert k_cover == 2
    assert bound == 2
    assert count_pairs_grid(ps, 0.1).neighbors_ordered == 2


def test_pigeonhole_circle():
    ps = gen_circle(4096)
    eps = 1.0 / 64.0
    k_cover, bound = pigeonhole_lower_bound(ps, eps)
    assert count_pairs_grid(ps, eps).neighbors_ordered >= bound


def test_pigeonhole_always_holds_randomized():
    rng = np.random.default_rng(77)
    for trial in range(15):
        n = int(rng.integers(2, 400))
        ps = gen_random_disk(n, seed=trial)
        eps = float(2.0 ** -rng.integers(2, 8))
        _, bound = pigeonhole_lower_bound(ps, eps)
        assert count_pairs_grid(ps, eps).neighbors_ordered >= bound


def test_ratio_floor_direction_on_families():
    for ps, eps in [
        (gen_circle(2048), 1.0 / 32.0),
        (gen_two_clusters(300, 0.05), 0.05),
        (gen_random_disk(800, seed=2), 1.0 / 16.0),
    ]:
        c = count_pairs_grid(ps, eps)
        if c.antipodes_ordered:
            assert c.neighbors_ordered >= ratio_floor(eps) * c.antipodes_ordered


def test_ratio_property():
    c = PairCounts(10, 0.1, 50, 0)
    assert c.ratio is None
    c = PairCounts(10, 0.1, 50, 25)
    assert c.ratio == 2.0
