"""
Neighborhood densities and relative thinness on finite Schreier graphs.

For a vertex set A and radius r,

    rho_{A,r}(x) = |A ∩ U_r(x)| / |U_r(x)|
    tau_r(x)     = sum over y in U_r(x) of 1 / |U_r(y)|

Everything is exact (``fractions.Fraction``) so that the averaging
identities can be checked with equality.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ValidationError
from .graph import (BallView, NeighborhoodKey, SchreierGraph, ball, ball_from_key,
                    canonical_key, detect_k_cycle)


class CylinderPredicate:
    """Membership rule for a cylinder set, decided from a radius-r0 key only.

    ``rule`` receives the canonical :class:`BallView` rebuilt from the key,
    so it cannot see anything the key does not encode.
    """

    def __init__(self, radius: int, rule: Callable[[BallView], bool], name: str = ""):
        self.radius = radius
        self.rule = rule
        self.name = name or getattr(rule, "__name__", "predicate")
        self._cache = {}

    def __call__(self, key: NeighborhoodKey) -> bool:
        if key.radius != self.radius:
            raise ValidationError(f"predicate radius {self.radius}, key radius {key.radius}")
        hit = self._cache.get(key.text)
        if hit is None:
            hit = bool(self.rule(ball_from_key(key)))
            self._cache[key.text] = hit
        return hit

    def __repr__(self):
        return f"CylinderPredicate({self.name!r}, radius={self.radius})"


def a_loop_predicate() -> CylinderPredicate:
    return CylinderPredicate(1, lambda b: b.maps[0][0] == 0, "a-loop")


def k_cycle_predicate(k: int) -> CylinderPredicate:
    return CylinderPredicate(k // 2, lambda b: detect_k_cycle(b, k), f"k-cycle:{k}")


def key_predicate(key: NeighborhoodKey) -> CylinderPredicate:
    text = key.text
    return CylinderPredicate(key.radius, lambda b: canonical_key(b).text == text,
                             f"key:{key.hex}")


def constant_predicate(value: bool = True, radius: int = 0) -> CylinderPredicate:
    return CylinderPredicate(radius, lambda b: value, "true" if value else "false")


def predicate_from_name(name: str) -> CylinderPredicate:
    """Registry lookup: ``a-loop``, ``k-cycle:<k>``, ``key:<hex>``, ``true``."""
    if name == "a-loop":
        return a_loop_predicate()
    if name in ("true", "false"):
        return constant_predicate(name == "true")
    if name.startswith("k-cycle:"):
        return k_cycle_predicate(int(name.split(":", 1)[1]))
    if name.startswith("key:"):
        return key_predicate(NeighborhoodKey.from_hex(name.split(":", 1)[1]))
    raise ValidationError(f"unknown predicate {name!r}")


@dataclass(frozen=True)
class BinaryField:
    graph: SchreierGraph
    bits: tuple

    def __post_init__(self):
        if len(self.bits) != self.graph.vertex_count:
            raise ValidationError("one bit per vertex required")

    @classmethod
    def from_subset(cls, graph: SchreierGraph, subset: Iterable[int]) -> "BinaryField":
        bits = [0] * graph.vertex_count
        for v in subset:
            bits[v] = 1
        return cls(graph, tuple(bits))

    @property
    def support(self) -> list:
        return [v for v, b in enumerate(self.bits) if b]

    def ones_fraction(self) -> Fraction:
        return Fraction(sum(self.bits), len(self.bits))

    def to_line(self) -> str:
        return "field " + "".join(str(b) for b in self.bits)


def field_from_predicate(graph: SchreierGraph, pred: CylinderPredicate) -> BinaryField:
    bits = []
    for x in range(graph.vertex_count):
        key = canonical_key(ball(graph, pred.radius, center=x))
        bits.append(1 if pred(key) else 0)
    return BinaryField(graph, tuple(bits))


def rho(field: BinaryField, x: int, r: int) -> Fraction:
    inside = field.graph.ball_matrix(r)[x]
    return Fraction(int(np.asarray(field.bits)[inside].sum()), int(inside.sum()))


def _sum_by_denominator(numerators, denominators) -> Fraction:
    # Group by denominator first; far cheaper than adding many Fractions.
    acc = defaultdict(int)
    for a, s in zip(numerators, denominators):
        acc[int(s)] += int(a)
    return sum((Fraction(a, s) for s, a in sorted(acc.items())), Fraction(0))


def mean_rho(field: BinaryField, r: int) -> Fraction:
    M = field.graph.ball_matrix(r)
    ones = M.astype(np.int64) @ np.asarray(field.bits, dtype=np.int64)
    return _sum_by_denominator(ones, M.sum(axis=1)) / field.graph.vertex_count


def density_profile(field: BinaryField, r_max: int) -> list:
    """Mean densities E(rho_{A,r}) for r = 0..r_max."""
    return [mean_rho(field, r) for r in range(r_max + 1)]


def tau_values(graph: SchreierGraph, r: int) -> list:
    """tau_r at every vertex of a finite graph."""
    M = graph.ball_matrix(r)
    sizes = M.sum(axis=1)
    out = []
    for x in range(graph.vertex_count):
        members = sizes[M[x]]
        out.append(_sum_by_denominator(np.ones_like(members), members))
    return out


def tau(graph, x, r: int) -> Fraction:
    """tau_r(x); for an arbitrary ball source this reads the radius-2r ball."""
    if isinstance(graph, SchreierGraph):
        M = graph.ball_matrix(r)
        members = M.sum(axis=1)[M[x]]
        return _sum_by_denominator(np.ones_like(members), members)
    big = ball(graph, 2 * r, center=x)
    total = Fraction(0)
    for y in range(big.size):
        if big.dist[y] <= r:
            total += Fraction(1, _local_ball_size(big, y, r))
    return total


def _local_ball_size(b: BallView, y: int, r: int) -> int:
    seen = {y}
    frontier = [y]
    for _ in range(r):
        nxt = []
        for u in frontier:
            for c in range(2 * b.rank):
                w = b.move(u, c)
                if w is not None and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen)


def mean_tau_on(graph: SchreierGraph, subset: Iterable[int], r: int) -> Fraction:
    subset = sorted(set(subset))
    if not subset:
        raise ValidationError("subset must be nonempty")
    values = tau_values(graph, r)
    return sum((values[x] for x in subset), Fraction(0)) / len(subset)


def lipschitz_ratio(graph: SchreierGraph, r: int) -> Fraction:
    """max tau_r(x) / tau_r(y) over pairs joined by a non-loop edge."""
    values = tau_values(graph, r)
    best = None
    for p in graph.perms:
        for x, y in enumerate(p):
            if x == y:
                continue
            q = max(values[x] / values[y], values[y] / values[x])
            if best is None or q > best:
                best = q
    if best is None:
        raise ValidationError("graph has no non-loop edges")
    return best


def lipschitz_constant(n: int) -> int:
    return (2 * n - 1) ** 2 + 1


def translate_closure(graph: SchreierGraph, subset: Iterable[int], k: int) -> frozenset:
    """Vertices that some reduced word of length <= k carries into ``subset``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    subset = sorted(set(subset))
    if not subset:
        return frozenset()
    near = (graph.distances[subset] <= k).any(axis=0)
    return frozenset(int(v) for v in np.flatnonzero(near))


# ---------------------------------------------------------------------------
# unlabeled graphs: contractions and the lopsidedness statistic
# ---------------------------------------------------------------------------

class PlainGraph:
    """Simple undirected graph: symmetric adjacency, no self-loops."""

    def __init__(self, vertex_count: int, edges: Iterable = ()):
        adj = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        self.vertex_count = vertex_count
        self.adjacency = tuple(frozenset(a) for a in adj)

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    def edges(self):
        for u, nb in enumerate(self.adjacency):
            for v in sorted(nb):
                if u < v:
                    yield u, v

    def __repr__(self):
        return f"PlainGraph(V={self.vertex_count}, E={sum(1 for _ in self.edges())})"


def complete_bipartite(x_size: int, y_size: int) -> PlainGraph:
    """K(X, Y) with X = 0..x_size-1 and Y the rest."""
    return PlainGraph(x_size + y_size,
                      ((x, x_size + y) for x in range(x_size) for y in range(y_size)))


def contract(graph: SchreierGraph, r: int) -> PlainGraph:
    """Join x and y whenever 0 < d(x, y) <= r."""
    if r < 1:
        raise ValueError("r must be >= 1")
    D = graph.distances
    xs, ys = np.nonzero((D > 0) & (D <= r))
    return PlainGraph(graph.vertex_count, ((int(a), int(b)) for a, b in zip(xs, ys) if a < b))


def plain_tau1(g: PlainGraph, x: int) -> Fraction:
    """tau_1 on an unlabeled graph: closed neighborhoods stand in for balls."""
    return sum((Fraction(1, g.degree(y) + 1) for y in (x, *sorted(g.adjacency[x]))),
               Fraction(0))


def lopsidedness(g: PlainGraph, subset: Iterable[int]):
    """Mean over x in A of deg_A(x) / deg_{not A}(x); ``math.inf`` if some ratio is n/0."""
    subset = sorted(set(subset))
    if not subset:
        raise ValidationError("subset must be nonempty")
    inside = set(subset)
    total = Fraction(0)
    for x in subset:
        a = sum(1 for y in g.adjacency[x] if y in inside)
        b = g.degree(x) - a
        if b == 0:
            if a > 0:
                return math.inf
            continue
        total += Fraction(a, b)
    return total / len(subset)
