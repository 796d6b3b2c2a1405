"""Brute-force ground truth at desk scale.

Labelled simple graphs are swept over all edge subsets (vectorised with
numpy, chunked by subset index so the reduction is deterministic), weighted
multigraphs over all small loop/multiplicity profiles, and rooted planar maps
over rotation systems.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from . import series as S
from .series import EGF, OGF, ExactSeries, SeriesRing

MAX_VERTICES = 10
MAX_SWEEP_VERTICES = 8
MAX_MAP_EDGES = 4
CHUNK = 1 << 18


class CapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# simple graphs


def edge_pairs(n: int) -> list:
    return [(i, j) for j in range(n) for i in range(j)]


@dataclass(frozen=True)
class SmallGraph:
    """Labelled simple graph; ``adj[v]`` is the neighbour bitmask of v (vertices 0..n-1)."""

    n: int
    adj: tuple

    def __post_init__(self):
        if self.n > MAX_VERTICES:
            raise CapError(f"at most {MAX_VERTICES} vertices")
        for v, a in enumerate(self.adj):
            if a >> v & 1:
                raise ValueError("loops are not allowed")
            for w in range(self.n):
                if (a >> w & 1) != (self.adj[w] >> v & 1):
                    raise ValueError("adjacency is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges) -> "SmallGraph":
        adj = [0] * n
        for i, j in edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(n, tuple(adj))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "SmallGraph":
        return cls.from_edges(n, [p for e, p in enumerate(edge_pairs(n)) if mask >> e & 1])

    def edges(self) -> list:
        return [(i, j) for j in range(self.n) for i in range(j) if self.adj[i] >> j & 1]

    def edge_count(self) -> int:
        return sum(bin(a).count("1") for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def degrees(self) -> list:
        return [self.degree(v) for v in range(self.n)]

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        return _reach(self.adj, 1) == (1 << self.n) - 1

    def induced(self, keep: int) -> "SmallGraph":
        """Subgraph on the vertex bitmask ``keep``; other vertices stay as isolated labels."""
        return SmallGraph(self.n, tuple(a & keep if keep >> v & 1 else 0 for v, a in enumerate(self.adj)))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g


def _reach(adj, start: int) -> int:
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        f = frontier
        while f:
            v = (f & -f).bit_length() - 1
            f &= f - 1
            nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def is_planar(g: SmallGraph) -> bool:
    e = g.edge_count()
    if g.n >= 3 and e > 3 * g.n - 6:
        return False
    planar, _ = nx.check_planarity(g.to_networkx())
    return bool(planar)


# ---------------------------------------------------------------------------
# sweeps


def _sweep_chunk(args) -> np.ndarray:
    n, start, stop, connected, min_degree = args
    masks = np.arange(start, stop, dtype=np.int64)
    adj = np.zeros((n, masks.size), dtype=np.int64)
    for e, (i, j) in enumerate(edge_pairs(n)):
        bit = (masks >> e) & 1
        adj[i] |= bit << j
        adj[j] |= bit << i
    keep = np.ones(masks.size, dtype=bool)
    if min_degree > 0:
        for v in range(n):
            keep &= np.bitwise_count(adj[v]) >= min_degree
    if connected and n > 1:
        reach = np.ones(masks.size, dtype=np.int64)
        for _ in range(n - 1):
            nxt = reach.copy()
            for v in range(n):
                nxt |= np.where((reach >> v) & 1 == 1, adj[v], 0)
            reach = nxt
        keep &= reach == (1 << n) - 1
    return masks[keep]


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("COREGF_THREADS", "1")))
    except ValueError:
        return 1


def graph_masks(n: int, connected: bool = True, min_degree: int = 0, workers: int | None = None) -> np.ndarray:
    """Sorted edge-subset indices of the labelled graphs on n vertices passing the filters."""
    if n < 1:
        raise ValueError("n >= 1")
    if n > MAX_SWEEP_VERTICES:
        raise CapError(f"full sweeps are limited to n <= {MAX_SWEEP_VERTICES}")
    total = 1 << len(edge_pairs(n))
    jobs = [(n, s, min(s + CHUNK, total), connected, min_degree) for s in range(0, total, CHUNK)]
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sweep_chunk, jobs))
    else:
        parts = [_sweep_chunk(j) for j in jobs]
    # chunks are reduced in index order, so the result is independent of workers
    return np.concatenate(parts)


def enumerate_graphs(n: int, connected: bool = True, min_degree: int = 0, planar: bool | None = None,
                     workers: int | None = None):
    """Yield SmallGraphs in increasing edge-subset order."""
    for m in graph_masks(n, connected, min_degree, workers):
        g = SmallGraph.from_mask(n, int(m))
        if planar is None or is_planar(g) == planar:
            yield g


def count_graphs(n: int, connected: bool = True, min_degree: int = 0, planar: bool | None = None,
                 workers: int | None = None) -> int:
    if planar is None:
        return int(graph_masks(n, connected, min_degree, workers).size)
    return sum(1 for _ in enumerate_graphs(n, connected, min_degree, planar, workers))


def count_by_edges(n: int, connected: bool = True, min_degree: int = 0, planar: bool | None = None,
                   workers: int | None = None) -> dict:
    """{edge count: number of labelled graphs}."""
    if planar is None:
        masks = graph_masks(n, connected, min_degree, workers)
        c = Counter(np.bitwise_count(masks).tolist())
    else:
        c = Counter(g.edge_count() for g in enumerate_graphs(n, connected, min_degree, planar, workers))
    return dict(sorted(c.items()))


# ---------------------------------------------------------------------------
# cores and kernels


def k_core(g: SmallGraph, k: int, order=None) -> int:
    """Vertex bitmask of the k-core, peeling vertices of degree < k.

    ``order`` (a permutation of the vertices) fixes the scan order; the result
    does not depend on it.
    """
    order = list(range(g.n)) if order is None else list(order)
    alive = (1 << g.n) - 1
    changed = True
    while changed:
        changed = False
        for v in order:
            if alive >> v & 1 and bin(g.adj[v] & alive).count("1") < k:
                alive &= ~(1 << v)
                changed = True
    return alive


def core_of(g: SmallGraph, order=None) -> SmallGraph:
    """The 2-core as an induced subgraph (non-core vertices become isolated)."""
    return g.induced(k_core(g, 2, order))


def core_size(g: SmallGraph) -> int:
    return bin(k_core(g, 2)).count("1")


@dataclass(frozen=True)
class WeightedMultigraph:
    n: int
    loops: tuple
    multiplicity: tuple  # ((i, j, m), ...) with i < j, m >= 1
    weight: Fraction

    @staticmethod
    def weight_of(loops, multiplicity) -> Fraction:
        w = Fraction(1)
        for a in loops:
            w /= 2 ** a * math.factorial(a)
        for _, _, m in multiplicity:
            w /= math.factorial(m)
        return w

    @classmethod
    def build(cls, n, loops, multiplicity) -> "WeightedMultigraph":
        loops = tuple(loops)
        mult = tuple(sorted((min(i, j), max(i, j), m) for i, j, m in multiplicity if m))
        return cls(n, loops, mult, cls.weight_of(loops, mult))

    def check_weight(self) -> bool:
        return self.weight == self.weight_of(self.loops, self.multiplicity)

    def is_simple(self) -> bool:
        return not any(self.loops) and all(m == 1 for *_, m in self.multiplicity)

    def degrees(self) -> list:
        d = [2 * a for a in self.loops]
        for i, j, m in self.multiplicity:
            d[i] += m
            d[j] += m
        return d

    def edge_count(self) -> int:
        return sum(self.loops) + sum(m for *_, m in self.multiplicity)

    def profile(self) -> tuple:
        """(total loops, (#pairs of multiplicity 1, 2, ...))."""
        top = max((m for *_, m in self.multiplicity), default=0)
        prof = [0] * top
        for *_, m in self.multiplicity:
            prof[m - 1] += 1
        return sum(self.loops), tuple(prof)


def kernel_of(g: SmallGraph):
    """Contract maximal degree-2 paths of the core.

    Returns a WeightedMultigraph on the core vertices of degree >= 3
    (relabelled in increasing order), or None if the core has no such vertex
    (empty core or a cycle).
    """
    core = core_of(g)
    big = [v for v in range(g.n) if core.degree(v) >= 3]
    if not big:
        return None
    index = {v: i for i, v in enumerate(big)}
    loops = [0] * len(big)
    mult: Counter = Counter()
    used = set()
    for v in big:
        nb = core.adj[v]
        while nb:
            w = (nb & -nb).bit_length() - 1
            nb &= nb - 1
            if (v, w) in used:
                continue
            prev, cur = v, w
            used.add((v, w))
            while cur not in index:
                nxt_mask = core.adj[cur] & ~(1 << prev)
                nxt = (nxt_mask & -nxt_mask).bit_length() - 1
                prev, cur = cur, nxt
            used.add((cur, prev))
            a, b = index[v], index[cur]
            if a == b:
                loops[a] += 1
            else:
                mult[(min(a, b), max(a, b))] += 1
    return WeightedMultigraph.build(len(big), loops, [(i, j, m) for (i, j), m in mult.items()])


def attached_tree_sizes(g: SmallGraph, include_root: bool = True) -> dict:
    """{core vertex: size of the tree hanging from it}, sizes in vertices."""
    core = k_core(g, 2)
    if not core:
        raise ValueError("graph has an empty core (it is a tree)")
    out = {}
    for v in range(g.n):
        if not core >> v & 1:
            continue
        # vertices reachable from v without passing through other core vertices
        adj = tuple(a & ~core if u != v else a & ~core for u, a in enumerate(g.adj))
        seen = _reach(adj, 1 << v)
        out[v] = bin(seen).count("1") - (0 if include_root else 1)
    return out


def largest_attached_tree(g: SmallGraph, include_root: bool = True) -> int:
    return max(attached_tree_sizes(g, include_root).values())


def core_histogram(n: int, workers: int | None = None) -> dict:
    c = Counter(core_size(g) for g in enumerate_graphs(n, workers=workers))
    return dict(sorted(c.items()))


def count_rooted_by_degree(n: int, cls: str = "connected", by_edges: bool = False,
                           planar: bool | None = None, workers: int | None = None) -> dict:
    """Labelled graphs rooted at a vertex, tabulated by root degree.

    cls: "connected", "2-graph" or "3-graph". With ``by_edges`` keys are (edges, degree).
    """
    md = {"connected": 0, "2-graph": 2, "3-graph": 3}[cls]
    out: Counter = Counter()
    for g in enumerate_graphs(n, True, md, planar, workers):
        e = g.edge_count()
        for d in g.degrees():
            out[(e, d) if by_edges else d] += 1
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# weighted multigraphs


def enumerate_multigraphs(n: int, loop_cap: int, mult_cap: int, connected: bool = True, min_degree: int = 0):
    """Yield every multigraph on n labelled vertices within the caps."""
    if n < 1 or n > 4 or 2 * (n * loop_cap + len(edge_pairs(n)) * mult_cap) > 4 * 12:
        raise CapError("multigraph sweep limited to n <= 4 and small caps")
    pairs = edge_pairs(n)
    for loops in itertools.product(range(loop_cap + 1), repeat=n):
        for ms in itertools.product(range(mult_cap + 1), repeat=len(pairs)):
            support = SmallGraph.from_edges(n, [p for p, m in zip(pairs, ms) if m])
            if connected and not support.is_connected():
                continue
            mg = WeightedMultigraph.build(n, loops, [(i, j, m) for (i, j), m in zip(pairs, ms)])
            if min(mg.degrees()) < min_degree:
                continue
            yield mg


def multigraph_weights(n: int, loop_cap: int, mult_cap: int, connected: bool = True, min_degree: int = 0) -> dict:
    """{(total loops, multiplicity profile): aggregate weight}."""
    out: dict = {}
    for mg in enumerate_multigraphs(n, loop_cap, mult_cap, connected, min_degree):
        key = mg.profile()
        out[key] = out.get(key, Fraction(0)) + mg.weight
    return out


# ---------------------------------------------------------------------------
# rotation systems


def _cycles(perm) -> list:
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if not seen[s]:
            cyc = []
            d = s
            while not seen[d]:
                seen[d] = True
                cyc.append(d)
                d = perm[d]
            out.append(cyc)
    return out


@dataclass(frozen=True)
class RotationMap:
    """Darts 0..2n-1; ``sigma`` rotates darts around vertices, ``alpha`` pairs darts into edges.

    Dart 0 is the root.
    """

    sigma: tuple
    alpha: tuple

    @property
    def edges(self) -> int:
        return len(self.alpha) // 2

    def vertices(self) -> list:
        return _cycles(self.sigma)

    def faces(self) -> list:
        phi = tuple(self.sigma[self.alpha[d]] for d in range(len(self.alpha)))
        return _cycles(phi)

    def is_transitive(self) -> bool:
        n = len(self.alpha)
        seen = {0}
        stack = [0]
        while stack:
            d = stack.pop()
            for e in (self.sigma[d], self.alpha[d]):
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        return len(seen) == n

    def is_planar(self) -> bool:
        return len(self.vertices()) - self.edges + len(self.faces()) == 2

    def root_vertex_degree(self) -> int:
        return next(len(c) for c in self.vertices() if 0 in c)

    def root_face_degree(self) -> int:
        return next(len(c) for c in self.faces() if 0 in c)

    def multigraph(self):
        """(number of vertices, vertex-of-dart list, edge list as vertex pairs)."""
        vert = [0] * len(self.alpha)
        vs = self.vertices()
        for i, c in enumerate(vs):
            for d in c:
                vert[d] = i
        edges = [(vert[d], vert[self.alpha[d]]) for d in range(len(self.alpha)) if d < self.alpha[d]]
        return len(vs), vert, edges

    def core_edges(self) -> int:
        """Edges in the 2-core (peel degree-1 vertices; a loop adds 2 to the degree)."""
        nv, _, edges = self.multigraph()
        alive = [True] * len(edges)
        changed = True
        while changed:
            changed = False
            deg = [0] * nv
            for k, (a, b) in enumerate(edges):
                if alive[k]:
                    deg[a] += 1
                    deg[b] += 1
            for k, (a, b) in enumerate(edges):
                if alive[k] and (deg[a] == 1 or deg[b] == 1):
                    alive[k] = False
                    changed = True
                    break
        return sum(alive)

    def kernel_edges(self) -> int:
        """Edges of the kernel (0 if the core is empty or a cycle)."""
        nv, _, edges = self.multigraph()
        alive = [True] * len(edges)
        changed = True
        deg = [0] * nv
        while changed:
            changed = False
            deg = [0] * nv
            for k, (a, b) in enumerate(edges):
                if alive[k]:
                    deg[a] += 1
                    deg[b] += 1
            for k, (a, b) in enumerate(edges):
                if alive[k] and (deg[a] == 1 or deg[b] == 1):
                    alive[k] = False
                    changed = True
                    break
        m = sum(alive)
        if m == 0:
            return 0
        twos = sum(1 for d in deg if d == 2)
        if all(d in (0, 2) for d in deg):
            return 0
        return m - twos

    def min_degree(self) -> int:
        return min(len(c) for c in self.vertices())


def _canonical_alpha(n: int) -> tuple:
    a = [0] * (2 * n)
    for k in range(n):
        a[2 * k], a[2 * k + 1] = 2 * k + 1, 2 * k
    return tuple(a)


def _involutions(darts: list):
    if not darts:
        yield []
        return
    a, rest = darts[0], darts[1:]
    for i, b in enumerate(rest):
        for tail in _involutions(rest[:i] + rest[i + 1:]):
            yield [(a, b)] + tail


@dataclass
class MapSweep:
    n: int
    rooted: int
    root_vertex_degree: dict
    root_face_degree: dict
    core_size: dict
    kernel_size: dict
    min_degree_counts: dict  # {d: rooted maps with min degree >= d}
    root_degree_by_min: dict  # {d: {k: count}} restricted to min degree >= d


def enumerate_rooted_maps(n: int) -> MapSweep:
    """Sweep vertex rotations for the canonical edge involution.

    Every rooted map with n edges appears exactly 2^{n-1}(n-1)! times (the
    relabellings that commute with alpha and fix the root dart), which is the
    divisor applied to all tallies.
    """
    if n < 1 or n > MAX_MAP_EDGES:
        raise CapError(f"map sweep limited to 1 <= n <= {MAX_MAP_EDGES}")
    alpha = _canonical_alpha(n)
    tallies = {k: Counter() for k in ("rv", "rf", "core", "ker", "min")}
    by_min = {2: Counter(), 3: Counter()}
    count = 0
    for sigma in itertools.permutations(range(2 * n)):
        m = RotationMap(sigma, alpha)
        if not m.is_transitive() or not m.is_planar():
            continue
        count += 1
        rv = m.root_vertex_degree()
        tallies["rv"][rv] += 1
        tallies["rf"][m.root_face_degree()] += 1
        tallies["core"][m.core_edges()] += 1
        tallies["ker"][m.kernel_edges()] += 1
        md = m.min_degree()
        for d in (2, 3):
            if md >= d:
                tallies["min"][d] += 1
                by_min[d][rv] += 1
    div = 2 ** (n - 1) * math.factorial(n - 1)

    def norm(c):
        out = {}
        for k, v in sorted(c.items()):
            q, r = divmod(v, div)
            if r:
                raise AssertionError("rooted-map tally not divisible by the relabelling group")
            out[k] = q
        return out

    return MapSweep(
        n,
        norm(Counter({0: count}))[0],
        norm(tallies["rv"]),
        norm(tallies["rf"]),
        norm(tallies["core"]),
        norm(tallies["ker"]),
        {d: norm(Counter({0: tallies["min"][d]})).get(0, 0) for d in (2, 3)},
        {d: norm(by_min[d]) for d in (2, 3)},
    )


def count_map_pairs(n: int) -> int:
    """Transitive genus-0 pairs (sigma, alpha) over all fixed-point-free involutions alpha."""
    if n > 3:
        raise CapError("full pair sweep limited to n <= 3")
    total = 0
    darts = list(range(2 * n))
    perms = list(itertools.permutations(darts))
    for inv in _involutions(darts):
        alpha = [0] * (2 * n)
        for a, b in inv:
            alpha[a], alpha[b] = b, a
        alpha = tuple(alpha)
        for sigma in perms:
            m = RotationMap(sigma, alpha)
            if m.is_transitive() and m.is_planar():
                total += 1
    return total


# ---------------------------------------------------------------------------
# export as series


def connected_series(n_max: int, planar: bool | None = None, min_degree: int = 0,
                     workers: int | None = None) -> ExactSeries:
    """C(x,y) = sum c_{n,k} y^k x^n/n! from the sweep, x capped at n_max, y polynomial."""
    ring = SeriesRing.make(("x", "y"), caps={"x": n_max}, semantics={"x": EGF, "y": OGF})
    c = {}
    for n in range(1, n_max + 1):
        for k, cnt in count_by_edges(n, True, min_degree, planar, workers).items():
            c[(n, k)] = Fraction(cnt, math.factorial(n))
    return ExactSeries(ring, c)


def rooted_connected_series(n_max: int, planar: bool | None = None, min_degree: int = 0,
                            workers: int | None = None) -> ExactSeries:
    """C•(x,y,w): vertex-rooted, w marking the root degree."""
    ring = SeriesRing.make(("x", "y", "w"), caps={"x": n_max}, semantics={"x": EGF, "y": OGF, "w": OGF})
    c = {}
    cls = {0: "connected", 2: "2-graph", 3: "3-graph"}[min_degree]
    for n in range(1, n_max + 1):
        for (e, d), cnt in count_rooted_by_degree(n, cls, True, planar, workers).items():
            c[(n, e, d)] = Fraction(cnt, math.factorial(n))
    return ExactSeries(ring, c)


def export_document(s: ExactSeries) -> str:
    return S.dumps(s)
