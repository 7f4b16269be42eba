"""
Schreier graphs of F_n as n permutations of a vertex set.

A vertex ``v`` is joined to ``perms[i][v]`` by an edge labeled a_{i+1}.
Walking a letter code (see :mod:`schreierlab.words`) follows the edge
forwards for a generator and backwards for an inverse. Any object that
can ``move(v, code)`` away from its ``root`` serves as a ball source,
so infinite graphs are handled through the same interface as finite ones.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import ResourceLimitError, ValidationError
from .words import Letter, ReducedWord, concat

DEFAULT_VERTEX_BUDGET = 10**7


def default_vertex_budget() -> int:
    env = os.environ.get("SG_BUDGET_VERTICES")
    return int(env) if env else DEFAULT_VERTEX_BUDGET


class Violation(NamedTuple):
    vertex: int
    generator: Optional[int]  # 1-based, None for connectivity problems
    direction: Optional[str]  # "out", "in" or None
    reason: str

    def __str__(self):
        if self.generator is None:
            return f"vertex {self.vertex}: {self.reason}"
        letter = Letter(self.generator, False)
        return f"vertex {self.vertex}, {letter} ({self.direction}): {self.reason}"


class PartialLabeledGraph:
    """Labeled graph whose generator maps may be partial (``-1`` = absent).

    Nothing is assumed about the maps; :func:`validate` reports what is
    wrong with them.
    """

    def __init__(self, rank: int, vertex_count: int, maps: Sequence[Sequence[int]],
                 root: Optional[int] = None):
        if len(maps) != rank:
            raise ValidationError(f"expected {rank} maps, got {len(maps)}")
        self.rank = rank
        self.vertex_count = vertex_count
        self.maps = tuple(tuple(int(x) for x in m) for m in maps)
        for m in self.maps:
            if len(m) != vertex_count:
                raise ValidationError("map length differs from vertex count")
            for x in m:
                if not -1 <= x < vertex_count:
                    raise ValidationError(f"image {x} out of range")
        self.root = root

    @classmethod
    def from_graph(cls, graph: "SchreierGraph") -> "PartialLabeledGraph":
        return cls(graph.rank, graph.vertex_count, graph.perms, graph.root)

    @cached_property
    def inverse_maps(self) -> tuple:
        """Preimage maps; ``-1`` when absent, ``-2`` when not injective."""
        out = []
        for m in self.maps:
            inv = [-1] * self.vertex_count
            for u, v in enumerate(m):
                if v >= 0:
                    inv[v] = u if inv[v] == -1 else -2
            out.append(tuple(inv))
        return tuple(out)

    def is_label_consistent(self) -> bool:
        return all(-2 not in inv for inv in self.inverse_maps)

    def move(self, v: int, code: int) -> Optional[int]:
        i = code >> 1
        w = self.inverse_maps[i][v] if code & 1 else self.maps[i][v]
        return w if w >= 0 else None

    def is_complete(self) -> bool:
        return not validate(self)

    def to_schreier(self) -> "SchreierGraph":
        return SchreierGraph(self.maps, root=0 if self.root is None else self.root)

    def __repr__(self):
        return (f"PartialLabeledGraph(rank={self.rank}, V={self.vertex_count}, "
                f"root={self.root})")


def _components_from(maps, inverse_maps, vertex_count, start):
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for m in (*maps, *inverse_maps):
            w = m[u]
            if w >= 0 and w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def validate(candidate) -> list:
    """Return the list of violations; an empty list means a valid Schreier graph."""
    if isinstance(candidate, SchreierGraph):
        candidate = PartialLabeledGraph.from_graph(candidate)
    V = candidate.vertex_count
    problems = []
    if V < 1:
        return [Violation(-1, None, None, "empty vertex set")]
    for i, (m, inv) in enumerate(zip(candidate.maps, candidate.inverse_maps)):
        for v in range(V):
            if m[v] == -1:
                problems.append(Violation(v, i + 1, "out", "missing image"))
            if inv[v] == -1:
                problems.append(Violation(v, i + 1, "in", "missing preimage"))
            elif inv[v] == -2:
                problems.append(Violation(v, i + 1, "in", "several preimages"))
    root = candidate.root
    if root is not None and not 0 <= root < V:
        problems.append(Violation(root, None, None, "root out of range"))
        return problems
    reach = _components_from(candidate.maps, candidate.inverse_maps, V,
                             0 if root is None else root)
    for v in range(V):
        if v not in reach:
            problems.append(Violation(v, None, None, "not connected to root"))
    return problems


class SchreierGraph:
    """Finite connected rooted Schreier graph stored as n permutations."""

    def __init__(self, perms: Sequence[Sequence[int]], root: int = 0, check: bool = True):
        perms = tuple(tuple(int(x) for x in p) for p in perms)
        if not perms:
            raise ValidationError("need at least one generator")
        self.rank = len(perms)
        self.vertex_count = len(perms[0])
        self.perms = perms
        self.root = int(root)
        if check:
            partial = PartialLabeledGraph(self.rank, self.vertex_count, perms, self.root)
            problems = validate(partial)
            if problems:
                shown = "; ".join(str(p) for p in problems[:5])
                raise ValidationError(f"not a Schreier graph: {shown}")

    @cached_property
    def inverse_perms(self) -> tuple:
        out = []
        for p in self.perms:
            inv = [0] * self.vertex_count
            for u, v in enumerate(p):
                inv[v] = u
            out.append(tuple(inv))
        return tuple(out)

    @cached_property
    def table(self) -> list:
        """``table[code][v]``: neighbor of v along the letter ``code``."""
        t = []
        for p, q in zip(self.perms, self.inverse_perms):
            t.append(p)
            t.append(q)
        return t

    def move(self, v: int, code: int) -> int:
        return self.table[code][v]

    def act(self, v: int, w: ReducedWord) -> int:
        return act(self, v, w)

    def rerooted(self, v: int) -> "SchreierGraph":
        g = SchreierGraph.__new__(SchreierGraph)
        g.__dict__.update(self.__dict__)
        g.root = int(v)
        return g

    def relabeled(self, sigma: Sequence[int]) -> "SchreierGraph":
        """Isomorphic copy in which old vertex v becomes sigma[v]."""
        V = self.vertex_count
        perms = []
        for p in self.perms:
            q = [0] * V
            for v in range(V):
                q[sigma[v]] = sigma[p[v]]
            perms.append(q)
        return SchreierGraph(perms, root=sigma[self.root], check=False)

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs graph distances (int matrix)."""
        V = self.vertex_count
        rows, cols = [], []
        for p in self.perms:
            rows.extend(range(V))
            cols.extend(p)
        adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(V, V))
        d = shortest_path(adj, method="D", directed=False, unweighted=True)
        return d.astype(np.int64)

    def ball_matrix(self, r: int) -> np.ndarray:
        """Boolean matrix M with M[x, y] iff d(x, y) <= r."""
        return self.distances <= r

    def ball_sizes(self, r: int) -> np.ndarray:
        return self.ball_matrix(r).sum(axis=1)

    def is_finite(self) -> bool:
        return True

    def __eq__(self, other):
        if not isinstance(other, SchreierGraph):
            return NotImplemented
        return self.perms == other.perms and self.root == other.root

    def __hash__(self):
        return hash((self.perms, self.root))

    def __repr__(self):
        return f"SchreierGraph(rank={self.rank}, V={self.vertex_count}, root={self.root})"


def act(graph, v, w: ReducedWord):
    """Endpoint of the path reading w from v."""
    if w.rank != graph.rank:
        raise ValidationError(f"rank mismatch: word {w.rank}, graph {graph.rank}")
    for c in w.codes:
        v = graph.move(v, c)
        if v is None:
            raise ValidationError("path leaves the partial graph")
    return v


# ---------------------------------------------------------------------------
# balls and canonical keys
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NeighborhoodKey:
    """Canonical text of a rooted labeled ball; equal iff isomorphic."""
    text: str
    radius: int

    @property
    def hex(self) -> str:
        return self.text.encode("ascii").hex()

    @classmethod
    def from_hex(cls, h: str) -> "NeighborhoodKey":
        text = bytes.fromhex(h).decode("ascii")
        return cls(text, int(text.split("|", 1)[0][1:]))

    def __lt__(self, other):
        return (self.radius, self.text) < (other.radius, other.text)

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class BallView:
    """Induced labeled subgraph on the vertices within ``radius`` of the center.

    Local vertex 0 is the center. ``maps[i][u]`` is the local index of the
    a_{i+1}-neighbor of u, or -1 when that edge leaves the ball (or is
    absent). ``labels[u]`` is the vertex id in the source.
    """
    rank: int
    radius: int
    maps: tuple
    dist: tuple
    labels: tuple = field(default=(), compare=False)

    @property
    def size(self) -> int:
        return len(self.dist)

    @cached_property
    def inverse_maps(self) -> tuple:
        out = []
        for m in self.maps:
            inv = [-1] * self.size
            for u, v in enumerate(m):
                if v >= 0:
                    inv[v] = u
            out.append(tuple(inv))
        return tuple(out)

    def move(self, u: int, code: int) -> Optional[int]:
        i = code >> 1
        w = self.inverse_maps[i][u] if code & 1 else self.maps[i][u]
        return w if w >= 0 else None

    @property
    def root(self) -> int:
        return 0

    def sphere_sizes(self) -> list:
        counts = [0] * (self.radius + 1)
        for d in self.dist:
            counts[d] += 1
        return counts

    def restrict(self, r: int) -> "BallView":
        if r > self.radius:
            raise ValueError("cannot restrict to a larger radius")
        keep = [u for u in range(self.size) if self.dist[u] <= r]
        return _ball_from_tables(self, r, keep)

    def edge_count(self) -> int:
        return sum(1 for m in self.maps for v in m if v >= 0)


def _bfs_order(src, center, r, budget):
    """Letter-ordered BFS from center; returns (order, dist dict)."""
    dist = {center: 0}
    order = [center]
    queue = deque([center])
    n2 = 2 * src.rank
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du == r:
            continue
        for c in range(n2):
            w = src.move(u, c)
            if w is None or w in dist:
                continue
            dist[w] = du + 1
            order.append(w)
            queue.append(w)
            if len(order) > budget:
                raise ResourceLimitError(
                    f"ball of radius {r} exceeds vertex budget {budget}")
    return order, dist


def _build_view(src, r, order, dist):
    index = {v: k for k, v in enumerate(order)}
    maps = []
    for i in range(src.rank):
        row = []
        for v in order:
            w = src.move(v, 2 * i)
            row.append(index.get(w, -1) if w is not None else -1)
        maps.append(tuple(row))
    if isinstance(src, BallView) and src.labels:
        labels = tuple(src.labels[v] for v in order)
    else:
        labels = tuple(order)
    return BallView(src.rank, r, tuple(maps), tuple(dist[v] for v in order), labels)


class _Induced:
    """Restriction of a source to a vertex set."""

    def __init__(self, src, vertices):
        self.rank = src.rank
        self._src = src
        self._keep = set(vertices)

    def move(self, u, c):
        w = self._src.move(u, c)
        return w if w in self._keep else None


def _ball_from_tables(src, r, vertices, center=None):
    """BallView of the induced subgraph on ``vertices`` (all within r of center)."""
    center = vertices[0] if center is None else center
    order, dist = _bfs_order(_Induced(src, vertices), center, r, len(vertices) + 1)
    return _build_view(src, r, order, dist)


def ball(source, r: int, center=None, budget: Optional[int] = None) -> BallView:
    """Radius-r induced ball around ``center`` (the source's root by default)."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    if budget is None:
        budget = getattr(source, "vertex_budget", None) or default_vertex_budget()
    center = source.root if center is None else center
    order, dist = _bfs_order(source, center, r, budget)
    return _build_view(source, r, order, dist)


def sphere_sizes(source, r_max: int, budget: Optional[int] = None) -> list:
    """|dU_r| for r = 0..r_max."""
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    fast = getattr(source, "fast_sphere_sizes", None)
    if fast is not None:
        return fast(r_max)
    if budget is None:
        budget = getattr(source, "vertex_budget", None) or default_vertex_budget()
    _, dist = _bfs_order(source, source.root, r_max, budget)
    counts = [0] * (r_max + 1)
    for d in dist.values():
        counts[d] += 1
    return counts


def canonical_key(b: BallView) -> NeighborhoodKey:
    """Serialize the ball's tables in the letter-ordered BFS numbering from its center."""
    order, dist = _bfs_order(b, 0, b.radius, b.size + 1)
    index = {v: k for k, v in enumerate(order)}
    parts = []
    for i in range(b.rank):
        row = []
        for v in order:
            w = b.maps[i][v]
            row.append(str(index[w]) if w >= 0 else "-")
        parts.append(",".join(row))
    return NeighborhoodKey(f"r{b.radius}|{len(order)}|" + ";".join(parts), b.radius)


def ball_from_key(key: NeighborhoodKey) -> BallView:
    """Rebuild the canonical BallView a key was computed from."""
    head, size, body = key.text.split("|")
    r = int(head[1:])
    size = int(size)
    maps = []
    for part in body.split(";"):
        entries = part.split(",") if part else []
        maps.append(tuple(-1 if e == "-" else int(e) for e in entries))
    rank = len(maps)
    inv = []
    for m in maps:
        q = [-1] * size
        for u, v in enumerate(m):
            if v >= 0:
                q[v] = u
        inv.append(q)
    dist = [-1] * size
    dist[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for i in range(rank):
            for w in (maps[i][u], inv[i][u]):
                if w >= 0 and dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
    return BallView(rank, r, tuple(maps), tuple(dist), tuple(range(size)))


def neighborhood_key(source, r: int, center=None) -> NeighborhoodKey:
    return canonical_key(ball(source, r, center))


# ---------------------------------------------------------------------------
# spanning trees and cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeodesicTree:
    """Parent edge (parent vertex, letter code read from parent) per non-root vertex."""
    root: object
    parent: dict
    dist: dict

    def path_from_root(self, v) -> list:
        codes = []
        while v != self.root:
            u, c = self.parent[v]
            codes.append(c)
            v = u
        return codes[::-1]

    def tree_edges(self) -> set:
        """Tree edges as directed records (tail, generator index 0-based)."""
        out = set()
        for v, (u, c) in self.parent.items():
            out.add((u, c >> 1) if c % 2 == 0 else (v, c >> 1))
        return out


def geodesic_spanning_tree(graph) -> GeodesicTree:
    """BFS tree with the fixed letter-order tie-break."""
    root = graph.root
    parent = {}
    dist = {root: 0}
    queue = deque([root])
    n2 = 2 * graph.rank
    while queue:
        u = queue.popleft()
        for c in range(n2):
            w = graph.move(u, c)
            if w is None or w in dist:
                continue
            dist[w] = dist[u] + 1
            parent[w] = (u, c)
            queue.append(w)
    return GeodesicTree(root, parent, dist)


def fundamental_group_generators(graph: SchreierGraph,
                                 tree: Optional[GeodesicTree] = None) -> list:
    """One free generator of pi_1(graph, root) per non-tree edge."""
    if not isinstance(graph, SchreierGraph):
        raise ValidationError("graph must be finite")
    if tree is None:
        tree = geodesic_spanning_tree(graph)
    if len(tree.dist) != graph.vertex_count:
        raise ValidationError("tree does not span the graph")
    used = tree.tree_edges()
    n = graph.rank
    gens = []
    for i in range(n):
        for u in range(graph.vertex_count):
            if (u, i) in used:
                continue
            v = graph.perms[i][u]
            to_u = ReducedWord._trusted(tuple(tree.path_from_root(u)), n)
            from_v = ReducedWord._trusted(tuple(tree.path_from_root(v)), n).inverse()
            step = ReducedWord._trusted((2 * i,), n)
            gens.append(concat(concat(to_u, step), from_v))
    return gens


def detect_k_cycle(source, k: int, center=None) -> bool:
    """True iff the center lies on a simple closed path of exactly k edges.

    A loop is a 1-cycle and two distinct parallel edges form a 2-cycle.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    b = source if isinstance(source, BallView) and center is None else ball(source, k // 2, center)
    return _has_k_cycle(b, k)


def _has_k_cycle(b: BallView, k: int) -> bool:
    # Edges are identified by their directed record (tail, generator).
    n2 = 2 * b.rank
    on_path = {0}
    used = set()

    def step(u, depth):
        for c in range(n2):
            w = b.move(u, c)
            if w is None:
                continue
            edge = (u, c >> 1) if c % 2 == 0 else (w, c >> 1)
            if edge in used:
                continue
            if depth + 1 == k:
                if w == 0:
                    return True
                continue
            if w in on_path or b.dist[w] > k - depth - 1:
                continue
            on_path.add(w)
            used.add(edge)
            if step(w, depth + 1):
                return True
            on_path.discard(w)
            used.discard(edge)
        return False

    return step(0, 0)
