import math

import numpy as np
import pytest

from antipodes.generators import gen_polygon, polygon_sides_for_epsilon
from antipodes.geometry import InputError
from antipodes.graphs import BoxGraph, common_neighbor_profile, edge_growth_check
from antipodes.pipeline import antipodality_matrix, partition_boxes
from oracles import profile_by_sets


def graph_from_dense(A, centers=None):
    k = A.shape[0]
    rows, cols = np.nonzero(np.triu(A, 0))
    return BoxGraph.from_edges(k, np.stack([rows, cols], axis=1), centers=centers)


def adj_sets(A):
    return [set(np.nonzero(row)[0].tolist()) for row in A]


def test_edgeless_graph_profile_zero():
    g = BoxGraph.from_edges(6, np.empty((0, 2)), centers=np.random.default_rng(0).uniform(size=(6, 2)))
    prof = common_neighbor_profile(g, 0.0)
    assert all(c == 0 for c in prof.counts)
    assert prof.c_emp == 0.0


def test_profile_matches_set_oracle_complete_bipartite():
    m = 6
    A = np.zeros((2 * m, 2 * m), int)
    A[:m, m:] = 1
    A[m:, :m] = 1
    rng = np.random.default_rng(1)
    centers = rng.uniform(0, 1, size=(2 * m, 2))
    g = graph_from_dense(A, centers)
    radius = 0.25
    prof = common_neighbor_profile(g, radius)
    oracle = profile_by_sets(adj_sets(A), centers, radius)
    assert dict(prof.rows()) == oracle


def test_profile_matches_set_oracle_random():
    rng = np.random.default_rng(2)
    for trial in range(4):
        k = int(rng.integers(5, 40))
        A = np.triu(rng.integers(0, 2, size=(k, k)), 1)
        A = A + A.T
        centers = rng.uniform(0, 1, size=(k, 2))
        radius = float(rng.uniform(0, 0.5))
        prof = common_neighbor_profile(graph_from_dense(A, centers), radius)
        assert dict(prof.rows()) == profile_by_sets(adj_sets(A), centers, radius)


def test_profile_forbidden_radius_excludes_near_vertices():
    # star-like: all vertices share neighbor 0; far vertices count, near do not
    k = 10
    A = np.zeros((k, k), int)
    A[0, 1:] = 1
    A[1:, 0] = 1
    centers = np.zeros((k, 2))
    centers[:, 0] = np.arange(k) * 0.1
    g = graph_from_dense(A, centers)
    wide = common_neighbor_profile(g, 10.0)  # everything forbidden
    assert all(c == 0 for c in wide.counts)
    none = common_neighbor_profile(g, 0.0)
    # vertices 1..k-1 pairwise share the hub
    assert dict(none.rows())[1] == k - 2


def test_profile_reports_forbidden_constant():
    rng = np.random.default_rng(3)
    k = 30
    centers = rng.uniform(0, 1, size=(k, 2))
    g = BoxGraph.from_edges(k, np.empty((0, 2)), centers=centers)
    prof = common_neighbor_profile(g, 0.3)
    sizes = [
        int((np.linalg.norm(centers - centers[v], axis=1) <= 0.3).sum()) for v in range(k)
    ]
    assert prof.c_forbidden == pytest.approx(max(sizes) / math.sqrt(k))


def test_box_graph_from_matrix_edges():
    ps = gen_polygon(2000, 18)
    eps = 1 / 64
    bp = partition_boxes(ps, eps)
    M = antipodality_matrix(bp, eps)
    g = BoxGraph.from_matrix(M, bp)
    assert g.k == bp.k
    assert g.edge_count == M.ones_count // 2
    prof = common_neighbor_profile(g, 10 * math.sqrt(eps))
    assert prof.c_emp >= 0  # recorded, not asserted: the decay constant
    assert prof.counts[0] <= g.k


def test_edge_growth_planted_three_halves():
    ks = [50, 100, 200, 400, 800]
    sweep = [(k, k**1.5) for k in ks]
    slope, _ = edge_growth_check(sweep)
    assert slope == pytest.approx(1.5, abs=1e-6)


def test_edge_growth_planted_square():
    ks = [50, 100, 200, 400]
    slope, _ = edge_growth_check([(k, float(k) ** 2) for k in ks])
    assert slope == pytest.approx(2.0, abs=1e-6)


def test_edge_growth_log_coefficient_recovers_constant():
    ks = np.array([64, 128, 256, 512, 1024], float)
    C = 0.37
    sweep = [(k, C * math.sqrt(math.log(k)) * k**1.5) for k in ks]
    _, logc = edge_growth_check(sweep)
    assert math.exp(logc) == pytest.approx(C, rel=1e-9)


def test_edge_growth_needs_four_points():
    with pytest.raises(InputError):
        edge_growth_check([(10, 100), (20, 300), (40, 900)])


def test_profile_constant_on_dense_circle(big_circle):
    eps = 1.0 / 256.0
    bp = partition_boxes(big_circle, eps)
    M = antipodality_matrix(bp, eps)
    g = BoxGraph.from_matrix(M, bp)
    prof = common_neighbor_profile(g, 10 * math.sqrt(eps))
    # on the circle every pair of boxes sharing antipodal neighbors sits
    # inside the forbidden ball, so the tail counts vanish outright; the
    # recorded decay constant just needs to stay O(1)
    print(f"circle box graph k={g.k}: c_emp={prof.c_emp:.2f} c_forbidden={prof.c_forbidden:.2f}")
    assert prof.c_emp <= 10.0
    assert prof.counts == tuple(sorted(prof.counts, reverse=True))  # tails nest
    unrestricted = common_neighbor_profile(g, 0.0)
    assert unrestricted.counts[0] > 0  # the zeros above come from the ball


def test_edge_growth_polygon_family():
    pairs = []
    for j in range(4, 9):
        eps = 2.0**-j
        k_poly = polygon_sides_for_epsilon(eps)
        ps = gen_polygon(8000, k_poly)
        bp = partition_boxes(ps, eps)
        M = antipodality_matrix(bp, eps)
        g = BoxGraph.from_matrix(M, bp)
        pairs.append((g.k, g.edge_count))
    slope, _ = edge_growth_check(pairs)
    assert 1.3 <= slope <= 1.7
