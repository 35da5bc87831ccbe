"""Urysohn coverings and two-sided width certificates.

A covering is a list of triples (support point set, label set, point
assignment); it is valid for a margin problem when every support is
chain-connected and of diameter <= D0, the supports jointly cover every
sampled safe point, and the assignment agrees with the safe label
wherever a support meets a safe set.  The width of the problem is the
minimum number of such triples.

Certificates come in two independent halves:

* lower bound -- if the analytic distance between every pair of safe
  sets exceeds D0, no triple can serve two classes, so any covering
  needs at least K triples.  When some pairs fall within reach of one
  another the bound degrades to the number of connected components of
  the reach graph (a conservative extension, flagged on the
  certificate).
* upper bound -- an explicit covering, either the canonical one (one
  constant-label triple per safe set) or the result of an exact
  minimum-cover search over geodesic-ball candidates (bitmask dynamic
  programming up to 24 safe points, greedy with the classical ln-factor
  beyond).

The bracket is exact when the two halves meet; both halves re-verify
from scratch, never trusting stored intermediates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .problems import TOL, MarginProblem, validate_margin
from .spaces import MetricSpace, is_chain_connected, subset_diameter

__all__ = [
    "UrysohnTriple",
    "UrysohnCovering",
    "TripleCheck",
    "CoveringReport",
    "SeparationCertificate",
    "CoverSearch",
    "WidthBracket",
    "Window",
    "verify_covering",
    "canonical_covering",
    "separation_certificate",
    "min_ball_cover",
    "width_bracket",
    "parameter_window",
]


@dataclass
class UrysohnTriple:
    """One metric-library entry: support points, label set, assignment.

    ``assignment`` maps every support point to a label; constant triples
    simply map all points to one label.
    """

    support: list
    labels: tuple
    assignment: dict

    def label_at(self, x):
        return self.assignment.get(x)


@dataclass
class UrysohnCovering:
    triples: list[UrysohnTriple]
    d0: float
    h: float

    @property
    def size(self) -> int:
        return len(self.triples)


@dataclass
class TripleCheck:
    connected: bool
    diameter: float
    diameter_ok: bool
    witness: tuple | None = None


@dataclass
class CoveringReport:
    d0: float
    h: float
    triple_checks: list[TripleCheck]
    uncovered: list
    violations: list

    @property
    def connectivity_ok(self) -> bool:
        return all(t.connected for t in self.triple_checks)

    @property
    def diameters_ok(self) -> bool:
        return all(t.diameter_ok for t in self.triple_checks)

    @property
    def coverage_ok(self) -> bool:
        return not self.uncovered

    @property
    def correctness_ok(self) -> bool:
        return not self.violations

    @property
    def passed(self) -> bool:
        return (
            self.connectivity_ok
            and self.diameters_ok
            and self.coverage_ok
            and self.correctness_ok
        )


def default_step(space: MetricSpace) -> float:
    """Chain-connectivity step: twice the sampling resolution."""
    return 2.0 * space.resolution


def verify_covering(problem: MarginProblem, cov: UrysohnCovering) -> CoveringReport:
    """Re-check all four covering conditions; reports, never raises."""
    space = problem.space
    checks = []
    for tri in cov.triples:
        connected = bool(tri.support) and is_chain_connected(space, tri.support, cov.h)
        diam = subset_diameter(space, tri.support) if tri.support else 0.0
        witness = None
        if diam > cov.d0 + TOL:
            witness = max(
                ((p, q) for i, p in enumerate(tri.support) for q in tri.support[i + 1 :]),
                key=lambda pq: space.dist(*pq),
            )
        checks.append(TripleCheck(connected, diam, diam <= cov.d0 + TOL, witness))

    supports = [set(t.support) for t in cov.triples]
    uncovered = [
        (problem.regions[j].label, x)
        for j, x in problem.all_safe_points()
        if not any(x in s for s in supports)
    ]

    violations = []
    for i, tri in enumerate(cov.triples):
        for x in tri.support:
            want = problem.safe_label(x)
            if want is None:
                continue
            got = tri.label_at(x)
            if got != want:
                violations.append((i, x, want, got))
    return CoveringReport(cov.d0, cov.h, checks, uncovered, violations)


def canonical_covering(
    problem: MarginProblem, d0: float, h: float | None = None
) -> UrysohnCovering:
    """One constant-label triple per class, supported on its safe samples."""
    if d0 < 1.5 * problem.gamma - TOL:
        raise ValueError(
            f"D0 = {d0} below 3*gamma/2 = {1.5 * problem.gamma}: "
            "a safe set's connected arc would exceed the locality scale"
        )
    if h is None:
        h = default_step(problem.space)
    triples = []
    labels = tuple(problem.labels)
    for j in range(problem.k):
        pts = list(problem.safe_points(j))
        lab = problem.regions[j].label
        triples.append(UrysohnTriple(pts, labels, {p: lab for p in pts}))
    return UrysohnCovering(triples, d0, h)


@dataclass
class SeparationCertificate:
    lb: int
    d0: float
    delta_star: float
    delta_table: dict
    method: str  # "pairwise-separation" or "reach-components" (conservative)
    components: list[list[int]] = field(default_factory=list)


def separation_certificate(problem: MarginProblem, d0: float) -> SeparationCertificate:
    """Lower bound from pairwise safe-set separation.

    delta[i, j] is the analytic distance between the gamma/2 safe sets of
    classes i and j.  If the minimum exceeds D0, every triple meets at
    most one safe set and lb = K; otherwise lb counts the connected
    components of the reach graph (edge iff delta <= D0), since a triple
    can only serve classes inside one reach component.
    """
    k = problem.k
    gamma = problem.gamma
    table = {
        (i, j): max(0.0, problem.pair_dist(i, j) - gamma)
        for i in range(k)
        for j in range(i + 1, k)
    }
    delta_star = min(table.values()) if table else math.inf
    if delta_star > d0:
        return SeparationCertificate(
            k, d0, delta_star, table, "pairwise-separation", [[j] for j in range(k)]
        )
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (i, j), d in table.items():
        if d <= d0:
            parent[find(i)] = find(j)
    comps: dict[int, list[int]] = {}
    for j in range(k):
        comps.setdefault(find(j), []).append(j)
    components = sorted(comps.values())
    return SeparationCertificate(
        len(components), d0, delta_star, table, "reach-components", components
    )


@dataclass
class CoverSearch:
    method: str  # "exact-dp" or "greedy"
    size: int
    universe: int
    n_candidates: int
    chosen: list


def _candidate_balls(problem, d0, h, radii, centers):
    """Geodesic-ball candidates: (support, safe coverage mask), deduplicated."""
    space = problem.space
    universe = problem.all_safe_points()
    pool = list(space.sample_set)
    known = set(pool)
    for _, x in universe:
        if x not in known:
            pool.append(x)
            known.add(x)
    bit = {x: i for i, (_, x) in enumerate(universe)}
    if centers is None:
        centers = space.sample_set
    if radii is None:
        step = space.resolution / 2
        radii = [step * i for i in range(1, int(math.floor(d0 / 2 / step + TOL)) + 1)]
        if not radii or radii[-1] < d0 / 2 - TOL:
            radii.append(d0 / 2)
    candidates = []
    seen_masks = {}
    for c in centers:
        dists = [(space.dist(c, x), x) for x in pool]
        for r in sorted(radii):
            support = [x for d, x in dists if d <= r + TOL]
            mask = 0
            for x in support:
                i = bit.get(x)
                if i is not None:
                    mask |= 1 << i
            if mask == 0 or mask in seen_masks:
                continue
            if subset_diameter(space, support) > d0 + TOL:
                continue
            if not is_chain_connected(space, support, h):
                continue
            seen_masks[mask] = True
            candidates.append((support, mask))
    return universe, candidates


def min_ball_cover(
    problem: MarginProblem,
    d0: float,
    h: float | None = None,
    radii=None,
    centers=None,
    exact_limit: int = 24,
) -> tuple[UrysohnCovering, CoverSearch]:
    """Minimum covering of the sampled safe points by geodesic balls.

    Exact bitmask dynamic programming when the safe sample count is at
    most ``exact_limit`` (default 24); deterministic greedy beyond, with
    the method recorded on the certificate.  Labels are assigned per
    point from safe membership, which is always consistent because safe
    sets are pairwise disjoint.
    """
    if h is None:
        h = default_step(problem.space)
    universe, candidates = _candidate_balls(problem, d0, h, radii, centers)
    n = len(universe)
    full = (1 << n) - 1
    masks = [m for _, m in candidates]
    covered = 0
    for m in masks:
        covered |= m
    if covered != full:
        missing = [universe[i] for i in range(n) if not (covered >> i) & 1]
        raise ValueError(
            f"candidate family cannot cover the safe region; uncovered: {missing}"
        )

    if n <= exact_limit:
        chosen = _exact_cover(full, masks)
        method = "exact-dp"
    else:
        chosen = _greedy_cover(full, masks)
        method = "greedy"

    labels = tuple(problem.labels)
    triples = []
    for ci in chosen:
        support = candidates[ci][0]
        assignment = {}
        for x in support:
            lab = problem.safe_label(x)
            if lab is None:
                # unsafe filler points: nearest class, ties to the lowest slot
                j = min(range(problem.k), key=lambda j: (problem.class_dist(j, x), j))
                lab = problem.regions[j].label
            assignment[x] = lab
        triples.append(UrysohnTriple(list(support), labels, assignment))
    cov = UrysohnCovering(triples, d0, h)
    info = CoverSearch(method, len(chosen), n, len(candidates), list(chosen))
    return cov, info


def _exact_cover(full: int, masks: list[int]) -> list[int]:
    """Exact minimum set cover: memoized recursion over the uncovered mask,
    branching on the least-covered element."""
    cover_of: dict[int, list[int]] = {}
    for e in range(full.bit_length()):
        cover_of[e] = [i for i, m in enumerate(masks) if (m >> e) & 1]

    @lru_cache(maxsize=None)
    def rec(rem: int) -> tuple | None:
        if rem == 0:
            return ()
        e, n_opts = -1, None
        r = rem
        while r:
            b = r & -r
            i = b.bit_length() - 1
            k = len(cover_of[i])
            if n_opts is None or k < n_opts:
                e, n_opts = i, k
            r &= r - 1
        best = None
        for ci in cover_of[e]:
            sub = rec(rem & ~masks[ci])
            if sub is not None and (best is None or len(sub) + 1 < len(best)):
                best = (ci,) + sub
        return best

    result = rec(full)
    rec.cache_clear()
    assert result is not None  # feasibility pre-checked by the caller
    return sorted(result)


def _greedy_cover(full: int, masks: list[int]) -> list[int]:
    chosen = []
    rem = full
    while rem:
        best_i, best_gain = -1, 0
        for i, m in enumerate(masks):
            gain = (m & rem).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        chosen.append(best_i)
        rem &= ~masks[best_i]
    return chosen


@dataclass
class WidthBracket:
    lb: int
    ub: int
    d0: float
    h: float
    separation: SeparationCertificate
    covering: UrysohnCovering
    report: CoveringReport
    ub_method: str

    @property
    def exact(self) -> bool:
        return self.lb == self.ub


def width_bracket(
    problem: MarginProblem, d0: float, h: float | None = None, exact_limit: int = 24
) -> WidthBracket:
    """Certified two-sided width bracket [lb, ub].

    lb comes from the separation certificate; ub from the best verified
    covering among the canonical one and the ball-cover search.  When the
    canonical covering already meets lb the search is skipped: any
    covering is bounded below by lb, so the minimum cannot improve.
    """
    report = validate_margin(problem)
    if not report.strict_pass:
        raise ValueError(
            f"margin invalid: min class distance {report.min_pair} "
            f"<= gamma = {problem.gamma}"
        )
    if h is None:
        h = default_step(problem.space)
    sep = separation_certificate(problem, d0)
    best: tuple[int, str, UrysohnCovering, CoveringReport] | None = None
    try:
        canon = canonical_covering(problem, d0, h)
        canon_rep = verify_covering(problem, canon)
        if canon_rep.passed:
            best = (canon.size, "canonical", canon, canon_rep)
    except ValueError:
        pass
    if best is None or best[0] > sep.lb:
        cov, info = min_ball_cover(problem, d0, h, exact_limit=exact_limit)
        cov_rep = verify_covering(problem, cov)
        if not cov_rep.passed:
            raise AssertionError("searched covering failed verification")
        if best is None or cov.size < best[0]:
            best = (cov.size, info.method, cov, cov_rep)
    ub, method, covering, cov_report = best
    return WidthBracket(sep.lb, ub, d0, h, sep, covering, cov_report, method)


@dataclass
class Window:
    lo: float
    hi: float
    note: str = ""

    @property
    def empty(self) -> bool:
        return not self.lo < self.hi

    def contains(self, d0: float) -> bool:
        return self.lo <= d0 < self.hi


def parameter_window(family: str, **params) -> Window:
    """Admissible D0 interval [lo, hi) for a problem family.

    bouquet: [3g/2, L/2 - 3g/4); scaled: [3g/2, min(L/(2m) - 3g/2,
    L/4 - 3g/4)); wedge: [3g/2, pi*R - 3g/4).  An empty interval is
    signalled explicitly via ``empty`` with a note on the requirement.
    """
    g = params["gamma"]
    lo = 1.5 * g
    if family == "bouquet":
        L = params["L"]
        hi = L / 2 - 0.75 * g
        note = "" if lo < hi else f"empty window: requires L > 9*gamma/2 (L={L}, gamma={g})"
    elif family == "scaled":
        L, m = params["L"], params["m"]
        hi = min(L / (2 * m) - 1.5 * g, L / 4 - 0.75 * g)
        note = "" if lo < hi else f"empty window: loop spacing too tight (L={L}, m={m}, gamma={g})"
    elif family == "wedge":
        R = params["R"]
        hi = math.pi * R - 0.75 * g
        note = "" if lo < hi else f"empty window: requires pi*R > 9*gamma/4 (R={R}, gamma={g})"
    else:
        raise ValueError(f"unknown family {family!r}; expected bouquet, scaled or wedge")
    return Window(lo, hi, note)
