"""Covering verification, certificates, exact cover search, width brackets."""

import itertools
import math
import random

import pytest

from urwidth.coverings import (
    canonical_covering,
    min_ball_cover,
    parameter_window,
    separation_certificate,
    verify_covering,
    width_bracket,
)
from urwidth.problems import (
    bouquet_problem,
    interval_union_problem,
    scaled_problem,
    union_problem,
    wedge_problem,
)


def test_canonical_bouquet_covering_passes_all_conditions():
    p = bouquet_problem(3, 10.0, 1.0, 0.25)
    cov = canonical_covering(p, 4.0)
    assert cov.size == 3
    for tri in cov.triples:
        from urwidth.spaces import subset_diameter

        assert subset_diameter(p.space, tri.support) == pytest.approx(1.5)
    rep = verify_covering(p, cov)
    assert rep.passed


def test_canonical_single_class():
    p = bouquet_problem(1, 10.0, 1.0, 0.25)
    assert canonical_covering(p, 4.0).size == 1


def test_canonical_rejects_tight_locality():
    p = bouquet_problem(3, 10.0, 1.0, 0.25)
    with pytest.raises(ValueError):
        canonical_covering(p, 1.0)  # below 3*gamma/2


def test_deleted_triple_breaks_coverage_with_named_ball():
    p = bouquet_problem(3, 10.0, 1.0, 0.25)
    cov = canonical_covering(p, 4.0)
    dropped_label = cov.triples[1].assignment[cov.triples[1].support[0]]
    del cov.triples[1]
    rep = verify_covering(p, cov)
    assert not rep.passed
    assert rep.uncovered
    assert {lab for lab, _ in rep.uncovered} == {dropped_label}


def test_overwide_support_fails_diameter_with_witness():
    p = bouquet_problem(2, 10.0, 1.0, 0.25)
    cov = canonical_covering(p, 4.0)
    # graft a point from the other loop onto triple 0
    alien = p.safe_points(1)[0]
    cov.triples[0].support.append(alien)
    cov.triples[0].assignment[alien] = p.regions[1].label
    cov.h = 10.0  # keep connectivity out of the picture
    rep = verify_covering(p, cov)
    assert not rep.triple_checks[0].diameter_ok
    pair = rep.triple_checks[0].witness
    assert pair is not None
    assert p.space.dist(*pair) > 4.0


def test_mislabelled_support_point_reported():
    p = bouquet_problem(2, 10.0, 1.0, 0.25)
    cov = canonical_covering(p, 4.0)
    x = cov.triples[0].support[0]
    cov.triples[0].assignment[x] = p.regions[1].label
    rep = verify_covering(p, cov)
    assert not rep.correctness_ok
    assert rep.violations[0][1] == x


def test_scaled_canonical_covering_verifies():
    p = scaled_problem(2, 3, 60.0, 1.0, 0.5)
    cov = canonical_covering(p, 4.0)
    assert cov.size == 6
    assert verify_covering(p, cov).passed


def test_separation_certificate_bouquet():
    p = bouquet_problem(3, 10.0, 1.0, 0.5)
    cert = separation_certificate(p, 4.0)
    assert cert.delta_star == pytest.approx(8.5)
    assert cert.lb == 3
    assert cert.method == "pairwise-separation"


def test_separation_certificate_scaled():
    p = scaled_problem(2, 3, 60.0, 1.0, 0.5)
    cert = separation_certificate(p, 4.0)
    assert cert.lb == 6
    assert cert.delta_star == pytest.approx(8.5)
    # cross-loop safe sets at distance >= 2*(L/4 - 3*gamma/4)
    cross = [
        d for (i, j), d in cert.delta_table.items() if (i < 3) != (j < 3)
    ]
    assert min(cross) >= 2 * (60.0 / 4 - 0.75) - 1e-9


def test_separation_certificate_reach_components():
    p = bouquet_problem(3, 10.0, 1.0, 0.5)
    cert = separation_certificate(p, 10.0)  # D0 = L: reach graph complete
    assert cert.lb == 1
    assert cert.method == "reach-components"
    assert cert.components == [[0, 1, 2]]


def test_min_ball_cover_matches_canonical_size():
    p = bouquet_problem(3, 10.0, 1.0, 0.5)
    cov, info = min_ball_cover(p, 4.0)
    assert info.method == "exact-dp"
    assert info.size == 3
    assert verify_covering(p, cov).passed


def test_min_ball_cover_single_ball():
    p = bouquet_problem(1, 10.0, 1.0, 0.5)
    cov, info = min_ball_cover(p, 4.0)
    assert info.size == 1


def test_min_ball_cover_exhaustive_minimality_oracle():
    # independent oracle: no smaller subset of the same candidate family covers
    from urwidth.coverings import _candidate_balls

    p = bouquet_problem(2, 10.0, 1.0, 0.5)
    d0, h = 4.0, 2 * p.space.resolution
    cov, info = min_ball_cover(p, d0, h)
    universe, candidates = _candidate_balls(p, d0, h, None, None)
    full = (1 << len(universe)) - 1
    masks = [m for _, m in candidates]
    for size in range(1, info.size):
        for combo in itertools.combinations(range(len(masks)), size):
            acc = 0
            for i in combo:
                acc |= masks[i]
            assert acc != full, f"cover of size {size} exists, solver said {info.size}"


def test_min_ball_cover_small_locality_needs_multiple_patches_per_ball():
    # D0 = 0.5 < safe-arc diameter 1.5: each arc needs >= 3 patches
    p = bouquet_problem(2, 10.0, 1.0, 0.25)
    cov, info = min_ball_cover(p, 0.5)
    assert info.method == "exact-dp"
    assert info.size >= 2 * math.ceil(1.5 / 0.5)
    assert verify_covering(p, cov).passed


def test_hierarchy_infeasibility_below_width():
    # inside the admissible window no covering of size w-1 exists; the exact
    # solver proves it over the ball family for w = 2, 3
    for w in (2, 3):
        p = bouquet_problem(w, 10.0, 1.0, 0.5)
        _, info = min_ball_cover(p, 4.0)
        assert info.size == w


def test_width_bracket_bouquet_window():
    for w in (1, 2, 3, 4):
        p = bouquet_problem(w, 10.0, 1.0, 0.5)
        br = width_bracket(p, 4.0)
        assert (br.lb, br.ub) == (w, w)
        assert br.exact
        assert br.report.passed


def test_width_bracket_wedge():
    p = wedge_problem(2, 2, 2.0, 1.0, n=64, seed=5)
    br = width_bracket(p, 3.0)
    assert (br.lb, br.ub) == (2, 2)


def test_width_bracket_additivity_on_separated_union():
    a = bouquet_problem(2, 10.0, 1.0, 0.5)
    b = bouquet_problem(3, 10.0, 1.0, 0.5)
    br_a = width_bracket(a, 4.0)
    br_b = width_bracket(b, 4.0)
    u = union_problem(a, b, 100.0)
    br_u = width_bracket(u, 4.0)
    assert (br_u.lb, br_u.ub) == (br_a.lb + br_b.lb, br_a.ub + br_b.ub) == (5, 5)


def test_width_bracket_interval_problem_is_one():
    p = interval_union_problem([(0.1, 0.3)], 0.1, 51)
    br = width_bracket(p, 1.0)
    assert (br.lb, br.ub) == (1, 1)
    assert br.exact


def test_margin_monotonicity_of_bracket_endpoints():
    rnd = random.Random(31)
    for _ in range(10):
        w = rnd.randint(1, 3)
        L = rnd.uniform(8.0, 16.0)
        gamma = rnd.uniform(0.2, L / 10 * 0.9)
        h = L / rnd.randint(20, 30)
        lo, hi = 1.5 * gamma, L / 2 - 0.75 * gamma
        d0 = rnd.uniform(lo, hi * 0.999)
        big = bouquet_problem(w, L, gamma, h)
        small = bouquet_problem(w, L, gamma / 2, h)
        br_big = width_bracket(big, d0)
        br_small = width_bracket(small, d0)
        assert br_small.ub <= br_big.ub
        assert br_small.lb <= br_big.lb


def test_verify_covering_connectivity_failure():
    p = bouquet_problem(2, 10.0, 1.0, 0.25)
    cov = canonical_covering(p, 4.0)
    cov.h = 0.1  # below the sample spacing: supports fall apart
    rep = verify_covering(p, cov)
    assert not rep.connectivity_ok
    assert not rep.passed


def test_min_ball_cover_infeasible_reports_uncovered():
    p = bouquet_problem(2, 10.0, 1.0, 0.25)
    with pytest.raises(ValueError, match="uncovered"):
        min_ball_cover(p, 4.0, centers=[p.space.wedge_point], radii=[0.5])


def test_min_ball_cover_greedy_above_exact_limit():
    p = interval_union_problem([(0.1, 0.3)], 0.1, 101)
    cov, info = min_ball_cover(p, 1.0)
    assert info.universe > 24
    assert info.method == "greedy"
    assert info.size == 1
    assert verify_covering(p, cov).passed


def test_wedge_problem_rejects_oversized_margin():
    with pytest.raises(ValueError):
        wedge_problem(2, 2, 0.1, 1.0, n=16, seed=0)


def test_refinement_monotonicity():
    # coarsening labels (merging two classes) never raises either endpoint
    from urwidth.problems import ClassRegion, FamilyTag, MarginProblem

    fine = bouquet_problem(3, 10.0, 1.0, 0.5)
    merged = ClassRegion(
        1,
        fine.regions[0].pieces + fine.regions[1].pieces,
        fine.regions[0].points + fine.regions[1].points,
    )
    coarse = MarginProblem(
        fine.space,
        fine.gamma,
        [merged, ClassRegion(2, fine.regions[2].pieces, list(fine.regions[2].points))],
        FamilyTag("custom", {}),
    )
    br_fine = width_bracket(fine, 4.0)
    br_coarse = width_bracket(coarse, 4.0)
    assert br_coarse.lb <= br_fine.lb
    assert br_coarse.ub <= br_fine.ub
    # the merged class still needs one patch per ball, so ub stays 3
    assert br_coarse.ub == 3


def test_parameter_windows():
    wb = parameter_window("bouquet", L=10.0, gamma=1.0)
    assert (wb.lo, wb.hi) == (1.5, 4.25)
    assert not wb.empty
    empty = parameter_window("bouquet", L=4.5, gamma=1.0)
    assert empty.empty
    assert "9*gamma/2" in empty.note
    ws = parameter_window("scaled", L=60.0, gamma=1.0, m=3)
    assert (ws.lo, ws.hi) == (1.5, 8.5)
    ww = parameter_window("wedge", R=2.0, gamma=1.0)
    assert ww.lo == 1.5
    assert ww.hi == pytest.approx(2 * math.pi - 0.75)
    assert ww.contains(3.0)


def test_bracket_soundness_recheck():
    # whenever the bracket is exact, both certificates re-verify independently
    p = scaled_problem(2, 2, 40.0, 1.0, 0.5)
    br = width_bracket(p, 4.0)
    assert br.exact
    again = separation_certificate(p, br.d0)
    assert again.lb == br.lb
    assert again.delta_star > br.d0
    assert verify_covering(p, br.covering).passed
