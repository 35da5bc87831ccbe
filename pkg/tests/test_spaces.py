"""Metric kernel: distances, sampling, and the metric axioms."""

import math
import random

import pytest

from urwidth.spaces import (
    bouquet_space,
    disjoint_union,
    graph_space,
    interval_space,
    is_chain_connected,
    subset_diameter,
    wedge_sphere_space,
)


def test_bouquet_same_loop_arc_arithmetic():
    sp = bouquet_space(2, 10.0, 0.5)
    assert sp.dist(sp.point(1, 2.0), sp.point(1, 9.0)) == pytest.approx(3.0)


def test_bouquet_cross_loop_through_wedge():
    sp = bouquet_space(2, 10.0, 0.5)
    assert sp.dist(sp.point(1, 2.0), sp.point(2, 3.0)) == pytest.approx(5.0)


def test_bouquet_antipodes_at_full_loop_length():
    sp = bouquet_space(3, 10.0, 0.5)
    assert sp.dist(sp.antipode(1), sp.antipode(2)) == pytest.approx(10.0)


def test_bouquet_sampling_includes_shared_wedge_point():
    sp = bouquet_space(3, 10.0, 0.5)
    assert sp.sample_set.count(sp.wedge_point) == 1
    # ceil(L/h) points per loop, wedge point shared
    assert len(sp.sample_set) == 1 + 3 * (sp.n_per_loop - 1)


def test_bouquet_rejects_bad_parameters():
    with pytest.raises(ValueError):
        bouquet_space(2, 10.0, 2.0)  # h > L/8
    with pytest.raises(ValueError):
        bouquet_space(2, -1.0, 0.1)
    with pytest.raises(ValueError):
        bouquet_space(0, 10.0, 0.5)


def test_wedge_pole_to_antipode():
    sp = wedge_sphere_space(1, 2, 2.0, n=16, seed=1)
    assert sp.dist(sp.pole, sp.antipode(1)) == pytest.approx(2 * math.pi)


def test_wedge_cross_sphere_antipodes():
    sp = wedge_sphere_space(2, 2, 2.0, n=16, seed=1)
    assert sp.dist(sp.antipode(1), sp.antipode(2)) == pytest.approx(4 * math.pi)


def test_wedge_circle_matches_bouquet_metric():
    # k=1 sphere of radius L/(2*pi) is a circle of circumference L: the two
    # constructors must agree on matched points.
    L = 10.0
    bq = bouquet_space(2, L, 0.5)
    ws = wedge_sphere_space(2, 1, L / (2 * math.pi), n=16, seed=3)

    def embed(p):
        if p == bq.wedge_point:
            return ws.pole
        theta = 2 * math.pi * p.s / L
        return ws.point(p.loop, (math.cos(theta), math.sin(theta)))

    rnd = random.Random(7)
    for _ in range(200):
        p = rnd.choice(bq.sample_set)
        q = rnd.choice(bq.sample_set)
        assert ws.dist(embed(p), embed(q)) == pytest.approx(bq.dist(p, q), abs=1e-9)


def test_wedge_rejects_degenerate_direction():
    sp = wedge_sphere_space(1, 2, 1.0, n=16, seed=0)
    with pytest.raises(ValueError):
        sp.point(1, (0.5, 0.5, 0.5))


def test_interval_space_grid_and_distance():
    sp = interval_space(11)
    assert sp.dist(0.3, 0.7) == pytest.approx(0.4)
    assert interval_space(2).diameter() == pytest.approx(1.0)
    assert interval_space(101).resolution == pytest.approx(0.01)


def test_graph_space_shortest_paths():
    tri = graph_space([("a", "b"), ("b", "c"), ("a", "c")])
    assert tri.dist("a", "c") == pytest.approx(1.0)
    path = graph_space([("a", "b", 2.0), ("b", "c", 3.0)])
    assert path.dist("a", "c") == pytest.approx(5.0)


def test_graph_space_k4_diameter_matches_floyd_warshall():
    verts = list(range(4))
    edges = [(u, v) for i, u in enumerate(verts) for v in verts[i + 1 :]]
    sp = graph_space(edges)
    # independent all-pairs oracle
    inf = float("inf")
    d = {u: {v: (0 if u == v else inf) for v in verts} for u in verts}
    for u, v in edges:
        d[u][v] = d[v][u] = 1.0
    for k in verts:
        for i in verts:
            for j in verts:
                d[i][j] = min(d[i][j], d[i][k] + d[k][j])
    oracle = max(d[u][v] for u in verts for v in verts)
    assert sp.diameter() == pytest.approx(oracle) == pytest.approx(1.0)


def test_graph_space_rejects_disconnected_with_component_report():
    with pytest.raises(ValueError, match="components"):
        graph_space([("a", "b"), ("c", "d")])


def test_disjoint_union_separation_and_identity():
    a = bouquet_space(2, 10.0, 0.5)
    b = bouquet_space(2, 10.0, 0.5)
    u = disjoint_union(a, b, 100.0)
    for p in a.sample_set[:20]:
        for q in b.sample_set[:20]:
            assert u.dist((0, p), (1, q)) >= 100.0
    # within-component distances preserved bit-exactly
    p, q = a.sample_set[3], a.sample_set[11]
    assert u.dist((0, p), (0, q)) == a.dist(p, q)


def test_disjoint_union_minimum_achieved_at_anchors():
    a = bouquet_space(1, 10.0, 1.0)
    b = bouquet_space(1, 10.0, 1.0)
    u = disjoint_union(a, b, 100.0)
    best = min(
        u.dist(p, q)
        for p in u.sample_set
        for q in u.sample_set
        if p[0] == 0 and q[0] == 1
    )
    assert best == pytest.approx(100.0)
    assert u.dist((0, u.anchors[0]), (1, u.anchors[1])) == pytest.approx(100.0)


def test_subset_diameter_values():
    sp = bouquet_space(2, 10.0, 0.25)
    assert subset_diameter(sp, [sp.point(1, 3.0)]) == 0.0
    arc = [p for p in sp.sample_set if p.loop == 1 and sp.dist(p, sp.antipode(1)) <= 0.75]
    assert subset_diameter(sp, arc) == pytest.approx(1.5)
    loop = [sp.wedge_point] + [p for p in sp.sample_set if p.loop == 1]
    assert subset_diameter(sp, loop) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        subset_diameter(sp, [])


def test_subset_diameter_monotone_under_inclusion():
    sp = bouquet_space(3, 10.0, 0.5)
    rnd = random.Random(5)
    for _ in range(50):
        pts = rnd.sample(sp.sample_set, 8)
        sub = rnd.sample(pts, 4)
        assert subset_diameter(sp, sub) <= subset_diameter(sp, pts)


def _union_find_connected(space, pts, h):
    """Independent oracle: union-find over the {d <= h} graph."""
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if space.dist(pts[i], pts[j]) <= h:
                parent[find(i)] = find(j)
    return len({find(i) for i in range(len(pts))}) == 1


def test_chain_connectivity_cases():
    sp = bouquet_space(2, 10.0, 0.25)
    far = [sp.point(1, 1.0), sp.point(1, 4.0)]
    assert not is_chain_connected(sp, far, 1.0)
    arc = [sp.point(1, 1.0 + 0.25 * i) for i in range(9)]
    assert is_chain_connected(sp, arc, 0.25)
    # points on two loops, all >= L/4 from the wedge point, step L/8
    split = [p for p in sp.sample_set if p.loop != 0 and min(p.s, 10 - p.s) >= 2.5]
    assert not is_chain_connected(sp, split, 1.25)
    assert _union_find_connected(sp, split, 1.25) is False


def test_chain_connectivity_matches_union_find_oracle():
    sp = bouquet_space(2, 10.0, 0.5)
    rnd = random.Random(11)
    for _ in range(40):
        pts = rnd.sample(sp.sample_set, rnd.randint(2, 12))
        h = rnd.choice([0.5, 1.0, 2.0, 5.0])
        assert is_chain_connected(sp, pts, h) == _union_find_connected(sp, pts, h)


@pytest.mark.parametrize(
    "make",
    [
        lambda: bouquet_space(3, 10.0, 0.5),
        lambda: wedge_sphere_space(2, 2, 2.0, n=40, seed=2),
        lambda: interval_space(41),
        lambda: graph_space([(0, 1, 1.5), (1, 2, 0.5), (2, 3, 2.0), (3, 0, 1.0), (0, 2, 2.5)]),
        lambda: disjoint_union(bouquet_space(1, 6.0, 0.5), interval_space(11), 4.0),
    ],
)
def test_metric_axioms_on_random_triples(make):
    sp = make()
    rnd = random.Random(13)
    pts = sp.sample_set
    for _ in range(10_000):
        p, q, r = (rnd.choice(pts) for _ in range(3))
        dpq = sp.dist(p, q)
        assert dpq >= 0.0
        assert dpq == sp.dist(q, p)  # symmetry is exact
        if p == q:
            assert dpq == 0.0
        else:
            assert dpq > 0.0
        assert dpq <= sp.dist(p, r) + sp.dist(r, q) + 1e-12
