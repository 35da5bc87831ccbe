"""Margin classification problems on the model spaces.

A ``MarginProblem`` is an ordered list of K closed class sets with a
margin gamma: every pair of classes sits at distance strictly greater
than gamma, which makes the closed gamma/2 safe neighbourhoods pairwise
disjoint.  Classes are described analytically (balls around centers, or
unions of closed segments on the unit interval) plus a finite sample
list; membership and pairwise-distance queries always use the analytic
description, so sampling resolution never degrades a certificate.

Families:

* ``bouquet_problem``    -- one safe ball of radius gamma/4 around each
  loop's antipode; pairwise class distance L - gamma/2.
* ``scaled_problem``     -- m balls per loop, spaced L/(2m) along the
  semicircle opposite the wedge point (every center >= L/4 from it).
* ``wedge_problem``      -- one ball per sphere at the antipode of the pole.
* ``interval_union_problem`` -- binary problem on [0, 1]: the positive
  class is a union of closed intervals, the negative class is the grid
  beyond their gamma-neighbourhood (with one grid step of clearance so
  the margin stays strict).
* ``permuted_problem``   -- same geometry, labels pushed through a
  permutation.
* ``union_problem``      -- two problems living on a separated disjoint
  union, classes relabelled consecutively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .spaces import (
    BouquetSpace,
    DisjointUnionSpace,
    IntervalSpace,
    MetricSpace,
    WedgeSphereSpace,
    bouquet_space,
    disjoint_union,
    interval_space,
    wedge_sphere_space,
)

__all__ = [
    "TOL",
    "BallPiece",
    "SegmentPiece",
    "LiftedPiece",
    "ClassRegion",
    "FamilyTag",
    "MarginProblem",
    "MarginReport",
    "SafeRegion",
    "bouquet_problem",
    "scaled_problem",
    "wedge_problem",
    "interval_union_problem",
    "validate_margin",
    "safe_region",
    "permuted_problem",
    "union_problem",
]

# absolute slack for closed-set membership tests under float arithmetic
TOL = 1e-9


@dataclass(frozen=True)
class BallPiece:
    """Closed geodesic ball {x : d(x, center) <= radius}."""

    center: object
    radius: float


@dataclass(frozen=True)
class SegmentPiece:
    """Closed subinterval [lo, hi] of the unit interval."""

    lo: float
    hi: float


@dataclass(frozen=True)
class LiftedPiece:
    """A piece living on one side of a disjoint union."""

    side: int
    piece: object


def piece_point_dist(space: MetricSpace, piece, x) -> float:
    """Analytic distance from point ``x`` to a class piece."""
    if isinstance(piece, LiftedPiece):
        side, inner = x
        comp = (space.left, space.right)[piece.side]
        if side == piece.side:
            return piece_point_dist(comp, piece.piece, inner)
        own = (space.left, space.right)[side]
        bridge = space.s + own.dist(inner, space.anchors[side])
        return bridge + piece_point_dist(comp, piece.piece, space.anchors[piece.side])
    if isinstance(piece, BallPiece):
        return max(0.0, space.dist(piece.center, x) - piece.radius)
    if isinstance(piece, SegmentPiece):
        return max(piece.lo - x, x - piece.hi, 0.0)
    raise TypeError(f"unknown piece type {type(piece).__name__}")


def piece_pair_dist(space: MetricSpace, a, b) -> float:
    """Analytic distance between two class pieces.

    Exact in the geodesic spaces used here: both balls and segments are
    geodesically convex, so set distance reduces to center/endpoint
    arithmetic.
    """
    if isinstance(a, LiftedPiece) and isinstance(b, LiftedPiece):
        if a.side == b.side:
            comp = (space.left, space.right)[a.side]
            return piece_pair_dist(comp, a.piece, b.piece)
        ca = (space.left, space.right)[a.side]
        cb = (space.left, space.right)[b.side]
        return (
            space.s
            + piece_point_dist(ca, a.piece, space.anchors[a.side])
            + piece_point_dist(cb, b.piece, space.anchors[b.side])
        )
    if isinstance(a, BallPiece) and isinstance(b, BallPiece):
        return max(0.0, space.dist(a.center, b.center) - a.radius - b.radius)
    if isinstance(a, SegmentPiece) and isinstance(b, SegmentPiece):
        return max(0.0, b.lo - a.hi, a.lo - b.hi)
    raise TypeError(
        f"cannot mix piece types {type(a).__name__} and {type(b).__name__}"
    )


@dataclass
class ClassRegion:
    """One labelled class: analytic pieces plus sampled member points."""

    label: int
    pieces: tuple
    points: list


@dataclass
class FamilyTag:
    name: str
    params: dict
    sigma: tuple | None = None


@dataclass
class MarginProblem:
    space: MetricSpace
    gamma: float
    regions: list[ClassRegion]
    family: FamilyTag
    _safe_cache: dict = field(default_factory=dict, repr=False)

    @property
    def k(self) -> int:
        return len(self.regions)

    @property
    def labels(self) -> list[int]:
        return [r.label for r in self.regions]

    def class_dist(self, j: int, x) -> float:
        """Distance from ``x`` to class slot ``j`` (0-based geometric index)."""
        return min(piece_point_dist(self.space, pc, x) for pc in self.regions[j].pieces)

    def pair_dist(self, i: int, j: int) -> float:
        """Analytic distance between class slots ``i`` and ``j``."""
        return min(
            piece_pair_dist(self.space, pa, pb)
            for pa in self.regions[i].pieces
            for pb in self.regions[j].pieces
        )

    def is_safe(self, j: int, x) -> bool:
        return self.class_dist(j, x) <= self.gamma / 2 + TOL

    def safe_label(self, x) -> int | None:
        """Label of the unique safe region containing ``x``, if any."""
        for j in range(self.k):
            if self.is_safe(j, x):
                return self.regions[j].label
        return None

    def safe_points(self, j: int) -> list:
        """Sampled safe set of class slot ``j``; class samples always included."""
        if j not in self._safe_cache:
            pts = [x for x in self.space.sample_set if self.is_safe(j, x)]
            have = set(pts)
            for extra in self.regions[j].points:
                if extra not in have:
                    pts.append(extra)
                    have.add(extra)
            self._safe_cache[j] = pts
        return self._safe_cache[j]

    def all_safe_points(self) -> list[tuple]:
        """All sampled safe points as (slot index, point) pairs."""
        return [(j, x) for j in range(self.k) for x in self.safe_points(j)]


@dataclass
class MarginReport:
    gamma: float
    pair_table: dict
    min_pair: float
    strict_pass: bool
    worst_pair: tuple | None
    safe_gaps: dict
    safe_disjoint: bool
    notes: list[str]


@dataclass
class SafeRegion:
    """Closed gamma/2 neighbourhoods of the classes, pieces plus samples."""

    gamma: float
    pieces: list[tuple]
    points: list[list]
    labels: list[int]
    resolution: float


def _sampled_members(space: MetricSpace, pieces, reps) -> list:
    """Grid points inside the pieces; a piece with no grid member gets its
    analytic representative appended so every class stays nonempty."""
    pts = [
        x
        for x in space.sample_set
        if min(piece_point_dist(space, pc, x) for pc in pieces) <= TOL
    ]
    have = set(pts)
    for pc, rep in zip(pieces, reps):
        if all(piece_point_dist(space, pc, x) > TOL for x in pts) and rep not in have:
            pts.append(rep)
            have.add(rep)
    return pts


def _ball_region(space: MetricSpace, label: int, center, radius: float) -> ClassRegion:
    piece = BallPiece(center, radius)
    return ClassRegion(label, (piece,), _sampled_members(space, (piece,), (center,)))


def bouquet_problem(w: int, L: float, gamma: float, h: float) -> MarginProblem:
    """K = w classes, one ball of radius gamma/4 around each loop's antipode."""
    # margins above L/10 make loops comparable to the margin scale; the
    # reference instances sit exactly at gamma = L/10, so equality is allowed
    if not 0 < gamma <= L / 10:
        raise ValueError(f"need 0 < gamma <= L/10 = {L / 10}, got gamma={gamma}")
    space = bouquet_space(w, L, h)
    regions = [
        _ball_region(space, j, space.antipode(j), gamma / 4) for j in range(1, w + 1)
    ]
    return MarginProblem(
        space, gamma, regions, FamilyTag("bouquet", {"w": w, "L": L, "gamma": gamma, "h": h})
    )


def scaled_center_positions(m: int, L: float) -> list[float]:
    """Arc positions of the m per-loop centers, measured from the wedge point.

    For m >= 2 the centers sit on the semicircle opposite the wedge point
    at spacing L/(2m) starting at L/4; the degenerate m = 1 case is the
    plain antipode, so the family collapses to the one-ball-per-loop
    construction.
    """
    if m == 1:
        return [L / 2]
    return [L / 4 + (r - 1) * L / (2 * m) for r in range(1, m + 1)]


def scaled_problem(w: int, m: int, L: float, gamma: float, h: float) -> MarginProblem:
    """K = w*m classes: m balls per loop on the far semicircle."""
    if m < 1 or w < 1:
        raise ValueError(f"need w, m >= 1, got w={w}, m={m}")
    if gamma <= 0 or L / m <= 3 * gamma:
        raise ValueError(
            f"spacing constraint violated: need L/m > 3*gamma, "
            f"got L/m = {L / m} vs 3*gamma = {3 * gamma}"
        )
    space = bouquet_space(w, L, h)
    positions = scaled_center_positions(m, L)
    regions = []
    label = 1
    for loop in range(1, w + 1):
        for s in positions:
            regions.append(_ball_region(space, label, space.point(loop, s), gamma / 4))
            label += 1
    return MarginProblem(
        space,
        gamma,
        regions,
        FamilyTag("scaled", {"w": w, "m": m, "L": L, "gamma": gamma, "h": h}),
    )


def wedge_problem(
    w: int, k: int, R: float, gamma: float, n: int = 64, seed: int = 0
) -> MarginProblem:
    """K = w classes on a wedge of k-spheres, one ball per antipode."""
    if gamma <= 0 or 3 * gamma / 2 >= math.pi * R - 3 * gamma / 4:
        raise ValueError(
            f"gamma={gamma} too large for sphere radius R={R}: "
            "the admissible locality window is empty"
        )
    space = wedge_sphere_space(w, k, R, n=n, seed=seed)
    regions = [
        _ball_region(space, j, space.antipode(j), gamma / 4) for j in range(1, w + 1)
    ]
    return MarginProblem(
        space,
        gamma,
        regions,
        FamilyTag(
            "wedge", {"w": w, "k": k, "R": R, "gamma": gamma, "n": n, "seed": seed}
        ),
    )


def interval_union_problem(
    intervals: Sequence[tuple[float, float]], gamma: float, n_pts: int
) -> MarginProblem:
    """Binary problem on the unit interval induced by a union of intervals.

    Positive class: the intervals themselves.  Negative class: everything
    at distance > gamma from them, pulled back by one grid step so the
    pairwise margin is strictly greater than gamma even on aligned grids.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    if not ivs:
        raise ValueError("need at least one interval")
    for a, b in ivs:
        if not (0.0 <= a <= b <= 1.0):
            raise ValueError(f"interval [{a}, {b}] not inside [0, 1]")
    for (_, b1), (a2, _) in zip(ivs, ivs[1:]):
        if a2 - b1 <= gamma:
            raise ValueError(
                f"intervals under-separated: gap {a2 - b1} <= gamma = {gamma}"
            )
    space = interval_space(n_pts)
    h = space.resolution
    clearance = gamma + h  # one grid step beyond the gamma-neighbourhood
    neg_pieces = []
    cursor = 0.0
    for a, b in ivs + [(1.0 + 2 * clearance, 1.0 + 2 * clearance)]:
        lo, hi = cursor, min(a - clearance, 1.0)
        if hi >= lo:
            neg_pieces.append(SegmentPiece(lo, hi))
        cursor = b + clearance
        if cursor > 1.0:
            break
    if not neg_pieces:
        raise ValueError(
            "negative class is empty: the intervals plus clearance cover [0, 1]"
        )
    pos_pieces = tuple(SegmentPiece(a, b) for a, b in ivs)
    pos_reps = [(a + b) / 2 for a, b in ivs]
    neg_reps = [(pc.lo + pc.hi) / 2 for pc in neg_pieces]
    regions = [
        ClassRegion(1, pos_pieces, _sampled_members(space, pos_pieces, pos_reps)),
        ClassRegion(
            2, tuple(neg_pieces), _sampled_members(space, tuple(neg_pieces), neg_reps)
        ),
    ]
    return MarginProblem(
        space,
        gamma,
        regions,
        FamilyTag(
            "interval_union",
            {"intervals": [list(ab) for ab in ivs], "gamma": gamma, "n_pts": n_pts},
        ),
    )


def validate_margin(problem: MarginProblem) -> MarginReport:
    """Check the strict margin condition; reports, never raises.

    The report carries the full analytic pairwise-distance table, the
    strict-pass flag (min pairwise distance > gamma), and the induced
    gaps between gamma/2 safe neighbourhoods (positive gap = disjoint).
    """
    gamma = problem.gamma
    table: dict = {}
    gaps: dict = {}
    worst = None
    min_pair = math.inf
    for i in range(problem.k):
        for j in range(i + 1, problem.k):
            d = problem.pair_dist(i, j)
            table[(i, j)] = d
            gaps[(i, j)] = d - gamma
            if d < min_pair:
                min_pair = d
                worst = (i, j)
    notes = []
    if not any(r.points for r in problem.regions):
        notes.append("warning: no sampled class points")
    if problem.family.name == "scaled":
        m = problem.family.params["m"]
        L = problem.family.params["L"]
        notes.append(
            f"same-loop center spacing in use: L/(2m) = {L / (2 * m)}"
            f" (full-loop equal spacing would be L/m = {L / m})"
        )
    return MarginReport(
        gamma=gamma,
        pair_table=table,
        min_pair=min_pair,
        strict_pass=min_pair > gamma,
        worst_pair=worst,
        safe_gaps=gaps,
        safe_disjoint=all(g > 0 for g in gaps.values()),
        notes=notes,
    )


def _inflate(piece, delta: float):
    if isinstance(piece, BallPiece):
        return BallPiece(piece.center, piece.radius + delta)
    if isinstance(piece, SegmentPiece):
        return SegmentPiece(max(0.0, piece.lo - delta), min(1.0, piece.hi + delta))
    if isinstance(piece, LiftedPiece):
        return LiftedPiece(piece.side, _inflate(piece.piece, delta))
    raise TypeError(f"unknown piece type {type(piece).__name__}")


def safe_region(problem: MarginProblem) -> SafeRegion:
    """Materialize the closed gamma/2 neighbourhoods of all classes."""
    report = validate_margin(problem)
    if not report.strict_pass:
        raise ValueError(
            f"margin-invalid problem: min pairwise class distance "
            f"{report.min_pair} <= gamma = {problem.gamma} at pair {report.worst_pair}"
        )
    half = problem.gamma / 2
    pieces = [
        tuple(_inflate(pc, half) for pc in region.pieces) for region in problem.regions
    ]
    return SafeRegion(
        gamma=problem.gamma,
        pieces=pieces,
        points=[problem.safe_points(j) for j in range(problem.k)],
        labels=problem.labels,
        resolution=problem.space.resolution,
    )


def permuted_problem(problem: MarginProblem, sigma: Sequence[int]) -> MarginProblem:
    """Relabel classes by a permutation of [K]; geometry is untouched.

    ``sigma[j]`` is the new label of the class currently labelled j+1
    (1-based), i.e. geometric slot j receives label sigma[j].
    """
    k = problem.k
    sig = tuple(int(x) for x in sigma)
    if sorted(sig) != list(range(1, k + 1)):
        raise ValueError(f"sigma {sig} is not a bijection on 1..{k}")
    regions = [
        ClassRegion(sig[j], r.pieces, list(r.points))
        for j, r in enumerate(problem.regions)
    ]
    tag = FamilyTag(problem.family.name, dict(problem.family.params), sigma=sig)
    return MarginProblem(problem.space, problem.gamma, regions, tag)


def union_problem(
    left: MarginProblem, right: MarginProblem, s: float
) -> MarginProblem:
    """Combine two problems on a separated disjoint union of their spaces.

    Left classes keep labels 1..K_left; right classes are shifted up.
    Requires equal margins.
    """
    if left.gamma != right.gamma:
        raise ValueError(
            f"margins differ: {left.gamma} vs {right.gamma}; cannot combine"
        )
    space = disjoint_union(left.space, right.space, s)
    regions = []
    for side, src, offset in ((0, left, 0), (1, right, left.k)):
        for r in src.regions:
            regions.append(
                ClassRegion(
                    r.label + offset,
                    tuple(LiftedPiece(side, pc) for pc in r.pieces),
                    [(side, p) for p in r.points],
                )
            )
    tag = FamilyTag(
        "union",
        {"s": s, "left": left.family.__dict__, "right": right.family.__dict__},
    )
    return MarginProblem(space, left.gamma, regions, tag)
