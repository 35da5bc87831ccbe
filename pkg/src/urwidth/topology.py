"""Nerve complexes, Betti numbers over the two-element field, systole.

The nerve of a covering has one vertex per triple, an edge for every
pair of supports that intersect, and a triangle for every mutually
intersecting trio; dimension 2 suffices because the first Betti number
only involves the boundary maps out of edges and triangles.  Homology is
computed over F2 (rank by elimination on bit rows), which avoids
orientation bookkeeping and gives the same Betti ranks for the spaces
handled here.

Also provided: weighted graph girth as the systole of a graph space, the
analytic systole of a bouquet, the cycle-rank formula beta1 = |E| - |V|
+ c, and the bounded-adjacency lower-bound check N >= 2*beta1 / Delta0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from .coverings import UrysohnCovering, UrysohnTriple
from .spaces import BouquetSpace, GraphSpace, MetricSpace

__all__ = [
    "SimplicialComplex",
    "BettiBoundCheck",
    "ConvexityCheck",
    "nerve",
    "betti",
    "max_adjacency",
    "betti_bound_check",
    "graph_beta1",
    "systole",
    "convexity_window",
    "cyclic_arc_cover",
    "vertex_star_cover",
]


@dataclass
class SimplicialComplex:
    """A 2-complex: nerve vertices, edges and triangles with witnesses.

    Under the shared-point overlap rule each witness is a point lying in
    all supports of the face; under the proximity rule it is the closest
    pair/triple of points found, one per support.
    """

    vertices: list[int]
    edges: list[tuple[int, int]]
    triangles: list[tuple[int, int, int]]
    witnesses: dict

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


def nerve(cov: UrysohnCovering, rule: str = "shared", proximity: float | None = None,
          space: MetricSpace | None = None) -> SimplicialComplex:
    """Nerve of a covering up to dimension 2.

    ``rule`` is ``"shared"`` (supports intersect iff they share a sample
    point; the default) or ``"proximity"`` (supports within ``proximity``
    of each other count as overlapping; needs ``space`` for distances).
    The rule in force is the certificate's declared overlap semantics.
    """
    n = len(cov.triples)
    supports = [t.support for t in cov.triples]
    sets = [set(s) for s in supports]
    witnesses: dict = {}
    edges = []

    if rule == "shared":
        def meet(i, j):
            common = sets[i] & sets[j]
            if not common:
                return None
            return min(common, key=repr)
    elif rule == "proximity":
        if proximity is None or space is None:
            raise ValueError("proximity rule needs a threshold and a space")

        def meet(i, j):
            best = None
            for p in supports[i]:
                for q in supports[j]:
                    d = space.dist(p, q)
                    if best is None or d < best[0]:
                        best = (d, (p, q))
            if best is not None and best[0] <= proximity:
                return best[1]
            return None
    else:
        raise ValueError(f"unknown overlap rule {rule!r}")

    for i, j in combinations(range(n), 2):
        w = meet(i, j)
        if w is not None:
            edges.append((i, j))
            witnesses[(i, j)] = w

    edge_set = set(edges)
    triangles = []
    for i, j, k in combinations(range(n), 3):
        if (i, j) not in edge_set or (i, k) not in edge_set or (j, k) not in edge_set:
            continue
        if rule == "shared":
            common = sets[i] & sets[j] & sets[k]
            if common:
                triangles.append((i, j, k))
                witnesses[(i, j, k)] = min(common, key=repr)
        else:
            found = None
            for p in supports[i]:
                dj = min(space.dist(p, q) for q in supports[j])
                dk = min(space.dist(p, q) for q in supports[k])
                if dj <= proximity and dk <= proximity:
                    found = p
                    break
            if found is not None:
                triangles.append((i, j, k))
                witnesses[(i, j, k)] = found
    return SimplicialComplex(list(range(n)), edges, triangles, witnesses)


def _f2_rank(rows: list[int]) -> int:
    """Rank of a set of F2 vectors packed as integers."""
    pivots: dict[int, int] = {}
    rank = 0
    for v in rows:
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                rank += 1
                break
    return rank


def betti(cx: SimplicialComplex) -> tuple[int, int]:
    """(beta0, beta1) of a 2-complex over F2.

    beta0 = |V| - rank d1, beta1 = dim ker d1 - rank d2; boundary ranks
    by elimination on bit-packed columns.
    """
    vindex = {v: i for i, v in enumerate(cx.vertices)}
    d1 = [(1 << vindex[a]) | (1 << vindex[b]) for a, b in cx.edges]
    eindex = {tuple(sorted(e)): i for i, e in enumerate(cx.edges)}
    d2 = []
    for a, b, c in cx.triangles:
        col = 0
        for face in ((a, b), (a, c), (b, c)):
            col |= 1 << eindex[tuple(sorted(face))]
        d2.append(col)
    r1 = _f2_rank(d1)
    r2 = _f2_rank(d2)
    beta0 = len(cx.vertices) - r1
    beta1 = (len(cx.edges) - r1) - r2
    return beta0, beta1


def betti2(cx: SimplicialComplex) -> int:
    """dim ker d2 (top homology of the truncated complex); used for the
    Euler-characteristic consistency check."""
    eindex = {tuple(sorted(e)): i for i, e in enumerate(cx.edges)}
    d2 = []
    for a, b, c in cx.triangles:
        col = 0
        for face in ((a, b), (a, c), (b, c)):
            col |= 1 << eindex[tuple(sorted(face))]
        d2.append(col)
    return len(cx.triangles) - _f2_rank(d2)


def max_adjacency(cx: SimplicialComplex) -> int:
    """Delta0: maximum vertex degree of the nerve's 1-skeleton."""
    if not cx.vertices:
        return 0
    return max(cx.degree(v) for v in cx.vertices)


@dataclass
class BettiBoundCheck:
    passed: bool
    bound: float
    slack: float
    note: str = ""


def betti_bound_check(n_patches: int, beta1_space: int, delta0: int) -> BettiBoundCheck:
    """Check the bounded-adjacency lower bound N >= 2*beta1 / Delta0.

    ``beta1_space`` is declared by the caller; verifying that the safe
    region actually carries that many independent cycles is the caller's
    responsibility for non-standard inputs.
    """
    if delta0 == 0:
        if beta1_space == 0:
            return BettiBoundCheck(True, 0.0, float(n_patches), "vacuous: no adjacency, no cycles")
        return BettiBoundCheck(
            False, math.inf, -math.inf,
            "degenerate: isolated patches cannot carry cycles",
        )
    bound = 2.0 * beta1_space / delta0
    return BettiBoundCheck(n_patches >= bound, bound, n_patches - bound)


def graph_beta1(g) -> int:
    """Cycle rank |E| - |V| + c of a graph (GraphSpace or networkx graph)."""
    graph = g.graph if isinstance(g, GraphSpace) else g
    return (
        graph.number_of_edges()
        - graph.number_of_nodes()
        + nx.number_connected_components(graph)
    )


def systole(space: MetricSpace) -> float:
    """Length of the shortest non-contractible loop.

    Bouquets have systole L analytically.  For graph spaces this is the
    weighted girth: min over edges (u, v) of weight + d(u, v) in the
    graph with that edge removed.  Returns math.inf for trees (no
    non-contractible loop).
    """
    if isinstance(space, BouquetSpace):
        return space.L
    if not isinstance(space, GraphSpace):
        raise ValueError(f"systole defined for graph or bouquet spaces, not {space.kind}")
    g = space.graph
    best = math.inf
    for u, v, data in list(g.edges(data=True)):
        g.remove_edge(u, v)
        try:
            alt = nx.dijkstra_path_length(g, u, v, weight="weight")
            best = min(best, data["weight"] + alt)
        except nx.NetworkXNoPath:
            pass
        finally:
            g.add_edge(u, v, **data)
    return best


@dataclass
class ConvexityCheck:
    passed: bool
    systole: float
    d0: float
    margin: float


def convexity_window(space: MetricSpace, d0: float) -> ConvexityCheck:
    """Pass iff D0 < sys/2, i.e. every diameter-D0 patch fits in a ball of
    radius below sys/4 (balls that small are geodesically convex in these
    spaces, so patches carry no topology)."""
    sys_len = systole(space)
    return ConvexityCheck(d0 < sys_len / 2, sys_len, d0, sys_len / 2 - d0)


def cyclic_arc_cover(space: BouquetSpace, arcs_per_loop: int, overlap: float | None = None) -> UrysohnCovering:
    """Cover each loop by ``arcs_per_loop`` overlapping sampled arcs.

    Consecutive arcs (cyclically) share sample points; the wedge point
    itself is assigned to no arc, so arcs on different loops never meet
    and the nerve splits into one cycle per loop.  Not a margin covering,
    a topological probe.
    """
    if arcs_per_loop < 3:
        raise ValueError("need at least 3 arcs per loop for a cyclic cover")
    L = space.L
    step = L / arcs_per_loop
    if overlap is None:
        overlap = space.resolution
    if not space.resolution <= overlap < step / 2:
        raise ValueError(
            f"overlap {overlap} must lie in [resolution, step/2) = "
            f"[{space.resolution}, {step / 2})"
        )
    triples = []
    for loop in range(1, space.w + 1):
        loop_pts = [p for p in space.sample_set if p.loop == loop]
        for i in range(arcs_per_loop):
            lo = i * step - overlap
            hi = (i + 1) * step + overlap
            members = [
                p for p in loop_pts
                if lo <= p.s <= hi or lo <= p.s - L <= hi
            ]
            triples.append(UrysohnTriple(members, (loop,), {p: loop for p in members}))
    return UrysohnCovering(triples, d0=step + 2 * overlap, h=2 * space.resolution)


def vertex_star_cover(space: GraphSpace) -> UrysohnCovering:
    """Open-star cover of a graph: one support per vertex, holding the
    vertex token plus a token per incident edge.

    Two stars share a token iff their vertices are adjacent and no three
    stars share one, so the nerve reproduces the graph as a 1-complex;
    used to cross-validate the cycle-rank formula against F2 homology.
    """
    g = space.graph
    triples = []
    for u in space.sample_set:
        tokens = [("v", u)] + [("e", frozenset((u, w))) for w in g.neighbors(u)]
        triples.append(UrysohnTriple(tokens, (1,), {t: 1 for t in tokens}))
    return UrysohnCovering(triples, d0=2.0 * space.resolution, h=space.resolution)
