"""Margin problems: construction, validation, safe regions, permutations."""

import itertools
import random

import pytest

from urwidth.problems import (
    bouquet_problem,
    interval_union_problem,
    permuted_problem,
    safe_region,
    scaled_problem,
    union_problem,
    validate_margin,
    wedge_problem,
)


def test_bouquet_pairwise_class_distance():
    p = bouquet_problem(3, 10.0, 1.0, 0.5)
    rep = validate_margin(p)
    # balls of radius gamma/4 around antipodes at mutual distance L
    assert rep.min_pair == pytest.approx(9.5)
    assert rep.strict_pass


def test_bouquet_single_class_vacuous_margin():
    p = bouquet_problem(1, 10.0, 1.0, 0.5)
    rep = validate_margin(p)
    assert rep.strict_pass
    assert rep.worst_pair is None


def test_bouquet_safe_ball_sample_count():
    p = bouquet_problem(3, 10.0, 1.0, 0.1)
    for j in range(3):
        # exhaustive scan oracle over the sample set
        scan = [
            x
            for x in p.space.sample_set
            if p.space.dist(x, p.space.antipode(j + 1)) <= 0.75 + 1e-9
        ]
        assert len(scan) >= 15
        assert sorted(p.safe_points(j)) == sorted(scan)


def test_bouquet_rejects_oversized_margin():
    with pytest.raises(ValueError):
        bouquet_problem(3, 10.0, 1.0001, 0.1)  # gamma >= L/10


def test_scaled_center_geometry():
    p = scaled_problem(2, 3, 60.0, 1.0, 0.5)
    assert p.k == 6
    centers = [r.pieces[0].center for r in p.regions]
    # consecutive same-loop gap L/(2m) = 10, exhaustively
    for loop_centers in (centers[:3], centers[3:]):
        for a, b in zip(loop_centers, loop_centers[1:]):
            assert p.space.dist(a, b) == pytest.approx(10.0)
    # every center at least L/4 = 15 from the wedge point, minimum attained
    dv = [p.space.dist(c, p.space.wedge_point) for c in centers]
    assert min(dv) == pytest.approx(15.0)
    assert all(d >= 15.0 - 1e-12 for d in dv)


def test_scaled_m1_reduces_to_bouquet():
    a = scaled_problem(3, 1, 10.0, 1.0, 0.5)
    b = bouquet_problem(3, 10.0, 1.0, 0.5)
    assert [r.pieces for r in a.regions] == [r.pieces for r in b.regions]
    assert [r.points for r in a.regions] == [r.points for r in b.regions]


def test_scaled_margin_report():
    p = scaled_problem(2, 3, 60.0, 1.0, 0.5)
    rep = validate_margin(p)
    assert rep.min_pair == pytest.approx(9.5)  # 10 - gamma/2 same-loop
    assert min(rep.safe_gaps.values()) == pytest.approx(8.5)
    assert rep.safe_disjoint
    assert any("L/(2m)" in note for note in rep.notes)


def test_scaled_rejects_violated_spacing():
    with pytest.raises(ValueError):
        scaled_problem(2, 3, 9.0, 1.0, 0.5)  # L/m = 3 <= 3*gamma


def test_interval_problem_margin_strict():
    p = interval_union_problem([(0.1, 0.2), (0.6, 0.8)], 0.05, 101)
    rep = validate_margin(p)
    assert rep.min_pair > 0.05
    assert rep.strict_pass


def test_interval_problem_full_interval_rejected():
    with pytest.raises(ValueError):
        interval_union_problem([(0.0, 1.0)], 0.1, 101)


def test_interval_problem_negative_class_count():
    p = interval_union_problem([(0.0, 0.4)], 0.1, 101)
    neg = p.regions[1].points
    # grid points beyond the gamma-neighbourhood with one step of clearance:
    # [0.51, 1.0] on the 0.01 grid
    assert len(neg) == 50
    assert min(neg) == pytest.approx(0.51)
    assert max(neg) == pytest.approx(1.0)


def test_interval_problem_rejects_under_separated():
    with pytest.raises(ValueError):
        interval_union_problem([(0.1, 0.2), (0.24, 0.3)], 0.05, 101)


def test_validate_margin_fail_names_pair():
    # hand-built problem with two classes at distance exactly gamma
    from urwidth.problems import ClassRegion, FamilyTag, MarginProblem, SegmentPiece
    from urwidth.spaces import interval_space

    space = interval_space(101)
    regions = [
        ClassRegion(1, (SegmentPiece(0.0, 0.25),), [0.0, 0.25]),
        ClassRegion(2, (SegmentPiece(0.5, 0.75),), [0.5, 0.75]),
    ]
    p = MarginProblem(space, 0.25, regions, FamilyTag("custom", {}))
    rep = validate_margin(p)
    assert rep.min_pair == pytest.approx(0.25)
    assert not rep.strict_pass
    assert rep.worst_pair == (0, 1)


def test_safe_region_radius_grows():
    p = bouquet_problem(2, 10.0, 1.0, 0.25)
    sr = safe_region(p)
    for pieces in sr.pieces:
        assert pieces[0].radius == pytest.approx(0.75)  # gamma/4 + gamma/2


def test_safe_region_shrinks_to_classes_as_gamma_vanishes():
    tiny = bouquet_problem(2, 10.0, 1e-6, 0.25)
    for j in range(2):
        assert sorted(tiny.safe_points(j)) == sorted(tiny.regions[j].points)


def test_interval_safe_region_adds_grid_points():
    p = interval_union_problem([(0.2, 0.4)], 0.1, 101)
    pos_safe = p.safe_points(0)
    pos = p.regions[0].points
    # gamma/2 = 0.05 adds 5 grid points on each side
    assert len(pos_safe) == len(pos) + 10


def test_safe_region_structure():
    p = bouquet_problem(3, 10.0, 1.0, 0.25)
    sr = safe_region(p)
    assert sr.labels == [1, 2, 3]
    assert sr.gamma == 1.0
    assert sr.resolution == p.space.resolution
    assert [sorted(pts) for pts in sr.points] == [
        sorted(p.safe_points(j)) for j in range(3)
    ]
    # margin-invalid input is rejected
    from urwidth.problems import ClassRegion, FamilyTag, MarginProblem, SegmentPiece
    from urwidth.spaces import interval_space

    bad = MarginProblem(
        interval_space(11),
        0.5,
        [
            ClassRegion(1, (SegmentPiece(0.0, 0.2),), [0.0, 0.2]),
            ClassRegion(2, (SegmentPiece(0.5, 0.7),), [0.5, 0.7]),
        ],
        FamilyTag("custom", {}),
    )
    with pytest.raises(ValueError, match="margin-invalid"):
        safe_region(bad)


def test_safe_region_monotone_in_gamma():
    big = bouquet_problem(3, 10.0, 1.0, 0.25)
    small = bouquet_problem(3, 10.0, 0.5, 0.25)
    for j in range(3):
        assert set(small.safe_points(j)) <= set(big.safe_points(j))


def test_safe_lists_pairwise_disjoint_on_random_instances():
    rnd = random.Random(23)
    for _ in range(20):
        w = rnd.randint(1, 4)
        L = rnd.uniform(6.0, 20.0)
        gamma = rnd.uniform(0.05, L / 10 * 0.95)
        p = bouquet_problem(w, L, gamma, L / rnd.randint(16, 40))
        seen = {}
        for j in range(p.k):
            for x in p.safe_points(j):
                assert x not in seen, f"point {x} safe for classes {seen[x]} and {j}"
                seen[x] = j


def test_permuted_problem_identity_and_swap():
    p = bouquet_problem(3, 10.0, 1.0, 0.5)
    same = permuted_problem(p, (1, 2, 3))
    assert same.labels == p.labels
    swapped = permuted_problem(p, (2, 1, 3))
    assert swapped.labels == [2, 1, 3]
    assert [r.pieces for r in swapped.regions] == [r.pieces for r in p.regions]


def test_permuted_problem_all_relabelings_share_geometry():
    p = bouquet_problem(3, 10.0, 1.0, 0.5)
    base = validate_margin(p)
    labelings = set()
    for sig in itertools.permutations((1, 2, 3)):
        q = permuted_problem(p, sig)
        labelings.add(tuple(q.labels))
        rep = validate_margin(q)
        assert rep.pair_table == base.pair_table  # bit-exact
    assert len(labelings) == 6


def test_permuted_problem_rejects_non_bijection():
    p = bouquet_problem(3, 10.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        permuted_problem(p, (1, 1, 3))


def test_wedge_problem_margin():
    p = wedge_problem(2, 2, 2.0, 1.0, n=32, seed=4)
    rep = validate_margin(p)
    import math

    assert rep.min_pair == pytest.approx(2 * math.pi * 2 - 0.5)
    assert rep.strict_pass


def test_union_problem_relabels_and_separates():
    a = bouquet_problem(2, 10.0, 1.0, 0.5)
    b = bouquet_problem(3, 10.0, 1.0, 0.5)
    u = union_problem(a, b, 100.0)
    assert u.labels == [1, 2, 3, 4, 5]
    rep = validate_margin(u)
    assert rep.strict_pass
    # cross-component class pairs are at least the separation apart
    for (i, j), d in rep.pair_table.items():
        if i < 2 <= j:
            assert d >= 100.0
