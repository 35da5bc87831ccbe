"""Geodesic model spaces with closed-form metrics.

Every space here answers distance queries analytically; the finite
``sample_set`` only discretizes the space for search and certification,
it never changes a distance.  Supported constructions:

* ``bouquet_space`` -- wedge of ``w`` circles of circumference ``L``, glued
  at a single point ``v``; shortest-path metric along arcs.
* ``wedge_sphere_space`` -- wedge of ``w`` round k-spheres of radius ``R``
  glued at a common pole; great-circle metric within a sphere, paths
  between spheres route through the pole.
* ``interval_space`` -- the unit interval with a uniform grid.
* ``graph_space`` -- a finite connected weighted graph with the
  shortest-path metric on vertices.
* ``disjoint_union`` -- two spaces bridged through designated anchor
  points at separation ``s``, so the components stay >= s apart.

Points are plain hashable values whose shape depends on the space kind
(see the point types below); always build them through the space's
``point`` factory so shared glue points are canonicalized.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple, Sequence

import networkx as nx
import numpy as np

__all__ = [
    "BouquetPoint",
    "SpherePoint",
    "MetricSpace",
    "BouquetSpace",
    "WedgeSphereSpace",
    "IntervalSpace",
    "GraphSpace",
    "DisjointUnionSpace",
    "bouquet_space",
    "wedge_sphere_space",
    "interval_space",
    "graph_space",
    "disjoint_union",
    "subset_diameter",
    "is_chain_connected",
]


class BouquetPoint(NamedTuple):
    """A point on a bouquet of circles: loop index and arc position in [0, L).

    The wedge point is canonically ``BouquetPoint(0, 0.0)``; loop indices
    run 1..w for interior arc points.
    """

    loop: int
    s: float


class SpherePoint(NamedTuple):
    """A point on a wedge of spheres: sphere index and unit direction.

    The glue pole is canonically ``SpherePoint(0, e0)`` with
    ``e0 = (1, 0, ..., 0)``; sphere indices run 1..w otherwise.
    """

    sphere: int
    u: tuple


def _unit_angle(u: Sequence[float], v: Sequence[float]) -> float:
    # Kahan's formula: stable at both the parallel and antipodal ends,
    # unlike arccos of the dot product.
    d_minus = math.dist(u, v)
    d_plus = math.dist(u, [-x for x in v])
    return 2.0 * math.atan2(d_minus, d_plus)


class MetricSpace:
    """Base class: an immutable space with a total distance function.

    Subclasses set ``kind``, ``sample_set`` and ``resolution`` at
    construction time and implement ``dist``.  All operations are pure,
    so instances are safe to share across threads.
    """

    kind: str = "abstract"

    def __init__(self) -> None:
        self.sample_set: list = []
        self.resolution: float = 0.0

    def dist(self, p, q) -> float:
        raise NotImplementedError

    def diameter(self) -> float:
        """Max pairwise distance over the sample set."""
        return subset_diameter(self, self.sample_set)

    def describe(self) -> dict:
        """Construction parameters, for the structured-text export."""
        raise NotImplementedError


class BouquetSpace(MetricSpace):
    kind = "bouquet"

    def __init__(self, w: int, L: float, h: float):
        super().__init__()
        if w < 1:
            raise ValueError(f"need at least one loop, got w={w}")
        if L <= 0 or h <= 0:
            raise ValueError(f"L and h must be positive, got L={L}, h={h}")
        if h > L / 8:
            raise ValueError(
                f"resolution h={h} too coarse: require h <= L/8 = {L / 8} "
                "so safe balls stay resolvable"
            )
        self.w = w
        self.L = float(L)
        self.h = float(h)
        self.n_per_loop = math.ceil(L / h)
        self.resolution = self.L / self.n_per_loop
        self.wedge_point = BouquetPoint(0, 0.0)
        pts: list[BouquetPoint] = [self.wedge_point]
        for loop in range(1, w + 1):
            pts.extend(
                BouquetPoint(loop, i * self.resolution)
                for i in range(1, self.n_per_loop)
            )
        self.sample_set = pts

    def point(self, loop: int, s: float) -> BouquetPoint:
        if not 0 <= s < self.L:
            raise ValueError(f"arc position {s} outside [0, {self.L})")
        if s == 0.0:
            return self.wedge_point
        if not 1 <= loop <= self.w:
            raise ValueError(f"loop index {loop} outside 1..{self.w}")
        return BouquetPoint(loop, float(s))

    def antipode(self, loop: int) -> BouquetPoint:
        """The point at arc distance L/2 from the wedge point on ``loop``."""
        return self.point(loop, self.L / 2)

    def dist(self, p: BouquetPoint, q: BouquetPoint) -> float:
        if p.loop == q.loop:
            a = abs(p.s - q.s)
            return min(a, self.L - a)
        # cross-loop paths run through the wedge point
        return min(p.s, self.L - p.s) + min(q.s, self.L - q.s)

    def describe(self) -> dict:
        return {"kind": self.kind, "w": self.w, "L": self.L, "h": self.h}


class WedgeSphereSpace(MetricSpace):
    kind = "wedge_spheres"

    def __init__(self, w: int, k: int, R: float, n: int, seed: int):
        super().__init__()
        if w < 1 or k < 1:
            raise ValueError(f"need w >= 1 and k >= 1, got w={w}, k={k}")
        if R <= 0:
            raise ValueError(f"radius must be positive, got R={R}")
        if n < 16:
            raise ValueError(f"need n >= 16 samples per sphere, got n={n}")
        self.w = w
        self.k = k
        self.R = float(R)
        self.n = n
        self.seed = seed
        self.pole_dir = (1.0,) + (0.0,) * k
        self.pole = SpherePoint(0, self.pole_dir)
        rng = np.random.default_rng(seed)
        pts: list[SpherePoint] = [self.pole]
        for sphere in range(1, w + 1):
            pts.append(self.antipode(sphere))
            raw = rng.normal(size=(n, k + 1))
            for row in raw:
                nrm = float(np.linalg.norm(row))
                if nrm < 1e-9:  # astronomically unlikely; redraw-free skip
                    continue
                u = tuple(float(x) for x in row / nrm)
                pts.append(self.point(sphere, u))
        self.sample_set = pts
        self.resolution = self._fill_resolution()

    def _fill_resolution(self) -> float:
        # max nearest-neighbour spacing within any one sphere's samples;
        # chain connectivity at 2x this step links every sampled patch
        worst = 0.0
        for sphere in range(1, self.w + 1):
            group = [p for p in self.sample_set if p.sphere in (0, sphere)]
            for p in group:
                nn = min(self.dist(p, q) for q in group if q != p)
                worst = max(worst, nn)
        return worst

    def point(self, sphere: int, u: Sequence[float]) -> SpherePoint:
        vec = tuple(float(x) for x in u)
        if len(vec) != self.k + 1:
            raise ValueError(f"direction must have {self.k + 1} components")
        nrm = math.hypot(*vec)
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"direction must be unit length, |u| = {nrm}")
        if math.dist(vec, self.pole_dir) == 0.0:
            return self.pole
        if not 1 <= sphere <= self.w:
            raise ValueError(f"sphere index {sphere} outside 1..{self.w}")
        return SpherePoint(sphere, vec)

    def antipode(self, sphere: int) -> SpherePoint:
        return SpherePoint(sphere, (-1.0,) + (0.0,) * self.k)

    def dist(self, p: SpherePoint, q: SpherePoint) -> float:
        if p.sphere == q.sphere:
            return self.R * _unit_angle(p.u, q.u)
        # through the glue pole; a pole-tagged point has zero pole distance
        return self.R * (_unit_angle(p.u, self.pole_dir) + _unit_angle(q.u, self.pole_dir))

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "w": self.w,
            "k": self.k,
            "R": self.R,
            "n": self.n,
            "seed": self.seed,
        }


class IntervalSpace(MetricSpace):
    kind = "interval"

    def __init__(self, n: int):
        super().__init__()
        if n < 2:
            raise ValueError(f"need at least 2 grid points, got n={n}")
        self.n = n
        self.resolution = 1.0 / (n - 1)
        self.sample_set = [i / (n - 1) for i in range(n)]

    def point(self, x: float) -> float:
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"point {x} outside [0, 1]")
        return float(x)

    def dist(self, p: float, q: float) -> float:
        return abs(p - q)

    def describe(self) -> dict:
        return {"kind": self.kind, "n": self.n}


class GraphSpace(MetricSpace):
    kind = "graph"

    def __init__(self, edges: Iterable[tuple]):
        super().__init__()
        g = nx.Graph()
        for edge in edges:
            if len(edge) == 2:
                u, v = edge
                weight = 1.0
            else:
                u, v, weight = edge
            if weight <= 0:
                raise ValueError(f"edge ({u}, {v}) has nonpositive weight {weight}")
            g.add_edge(u, v, weight=float(weight))
        if g.number_of_nodes() == 0:
            raise ValueError("empty edge list")
        if not nx.is_connected(g):
            comps = [sorted(map(str, c)) for c in nx.connected_components(g)]
            raise ValueError(f"graph is disconnected; components: {comps}")
        self.graph = g
        self.sample_set = sorted(g.nodes, key=str)
        self.resolution = max(d["weight"] for _, _, d in g.edges(data=True))
        self._d = dict(nx.all_pairs_dijkstra_path_length(g, weight="weight"))

    def point(self, vertex) -> object:
        if vertex not in self.graph:
            raise ValueError(f"vertex {vertex!r} not in graph")
        return vertex

    def dist(self, p, q) -> float:
        return self._d[p][q]

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "edges": sorted(
                (str(u), str(v), d["weight"]) for u, v, d in self.graph.edges(data=True)
            ),
        }


class DisjointUnionSpace(MetricSpace):
    """Two spaces bridged through fixed anchors at separation ``s``.

    Cross-component distance is s + d(x, anchor_left) + d(anchor_right, y):
    the path metric of gluing an edge of length s between the anchors,
    which never shortcuts within-component distances and keeps the two
    components at distance >= s.
    """

    kind = "disjoint_union"

    def __init__(self, left: MetricSpace, right: MetricSpace, s: float):
        super().__init__()
        if s <= 0:
            raise ValueError(f"separation must be positive, got s={s}")
        self.left = left
        self.right = right
        self.s = float(s)
        self.anchors = (left.sample_set[0], right.sample_set[0])
        self.sample_set = [(0, p) for p in left.sample_set] + [
            (1, p) for p in right.sample_set
        ]
        self.resolution = max(left.resolution, right.resolution)

    def point(self, side: int, inner) -> tuple:
        if side not in (0, 1):
            raise ValueError(f"side must be 0 or 1, got {side}")
        return (side, inner)

    def lift(self, side: int, inner) -> tuple:
        return self.point(side, inner)

    def dist(self, p: tuple, q: tuple) -> float:
        (ps, pi), (qs, qi) = p, q
        if ps == qs:
            comp = self.left if ps == 0 else self.right
            return comp.dist(pi, qi)
        if ps > qs:
            (ps, pi), (qs, qi) = (qs, qi), (ps, pi)
        return self.s + self.left.dist(pi, self.anchors[0]) + self.right.dist(
            self.anchors[1], qi
        )

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "s": self.s,
            "left": self.left.describe(),
            "right": self.right.describe(),
        }


def bouquet_space(w: int, L: float, h: float) -> BouquetSpace:
    """Wedge of ``w`` circles of circumference ``L``, sampled at step <= h.

    Same-loop distance is arc length min(|s - t|, L - |s - t|); cross-loop
    paths run through the wedge point, so antipodes of distinct loops sit
    at distance exactly L.
    """
    return BouquetSpace(w, L, h)


def wedge_sphere_space(
    w: int, k: int, R: float, n: int = 64, seed: int = 0
) -> WedgeSphereSpace:
    """Wedge of ``w`` round k-spheres of radius ``R`` glued at a pole.

    Sampling is uniform-random on each sphere (``n`` points, seeded) with
    the glue pole and every sphere's antipode always included.
    """
    return WedgeSphereSpace(w, k, R, n, seed)


def interval_space(n: int) -> IntervalSpace:
    """The unit interval with an ``n``-point uniform grid."""
    return IntervalSpace(n)


def graph_space(edges: Iterable[tuple]) -> GraphSpace:
    """Finite connected weighted graph; shortest-path metric on vertices.

    ``edges`` holds (u, v) or (u, v, weight) tuples; weights default to 1.
    """
    return GraphSpace(edges)


def disjoint_union(
    left: MetricSpace, right: MetricSpace, s: float
) -> DisjointUnionSpace:
    """Disjoint union of two spaces at separation ``s`` (anchored bridge)."""
    return DisjointUnionSpace(left, right, s)


def subset_diameter(space: MetricSpace, pts: Sequence) -> float:
    """Max pairwise distance over a nonempty point list."""
    if not pts:
        raise ValueError("subset_diameter of an empty point list")
    best = 0.0
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            d = space.dist(p, q)
            if d > best:
                best = d
    return best


def is_chain_connected(space: MetricSpace, pts: Sequence, h: float) -> bool:
    """True iff the graph on ``pts`` with edges {d <= h} is connected.

    Finite surrogate for topological connectedness of a sampled patch;
    single BFS pass, O(n^2) distance queries.
    """
    if h <= 0:
        raise ValueError(f"step bound must be positive, got h={h}")
    if not pts:
        raise ValueError("is_chain_connected of an empty point list")
    n = len(pts)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        i = stack.pop()
        for j in range(n):
            if not seen[j] and space.dist(pts[i], pts[j]) <= h:
                seen[j] = True
                count += 1
                stack.append(j)
    return count == n
