"""
Local statistics of finite Schreier graphs and the stitching repair.

A census is the empirical law of the canonical radius-r neighborhood of a
uniformly chosen vertex. :func:`stitch` turns a graph that is a Schreier
graph at most of its points into a genuine one:

1. delete every vertex that has exactly one edge of some label;
2. collect the survivors that are now missing edges;
3. give each of them a loop for every label it has no edge of;
4. close each remaining label path by joining its two free ends.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import ValidationError
from .graph import (NeighborhoodKey, PartialLabeledGraph, SchreierGraph, ball,
                    ball_from_key, canonical_key)


@dataclass(frozen=True)
class LocalStatistics:
    radius: int
    census: dict  # NeighborhoodKey -> Fraction
    sample_size: int

    def __post_init__(self):
        if sum(self.census.values(), Fraction(0)) != 1:
            raise ValidationError("census frequencies must sum to 1")
        if any(f <= 0 for f in self.census.values()):
            raise ValidationError("census frequencies must be positive")

    def mass(self, pred) -> Fraction:
        """Total frequency of the keys accepted by a cylinder predicate."""
        return sum((f for k, f in self.census.items() if pred(k)), Fraction(0))

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "sample_size": self.sample_size,
            "census": {k.hex: f"{f.numerator}/{f.denominator}"
                       for k, f in sorted(self.census.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "LocalStatistics":
        census = {NeighborhoodKey.from_hex(h): Fraction(v) for h, v in data["census"].items()}
        return cls(int(data["radius"]), census, int(data.get("sample_size", 0)))


def local_statistics(graph: SchreierGraph, r: int) -> LocalStatistics:
    counts = Counter(canonical_key(ball(graph, r, center=x)) for x in range(graph.vertex_count))
    V = graph.vertex_count
    census = {k: Fraction(c, V) for k, c in sorted(counts.items())}
    return LocalStatistics(r, census, V)


def dirac_statistics(source, r: int) -> LocalStatistics:
    """Census putting all mass on the root's ball, e.g. for a vertex-transitive lattice."""
    return LocalStatistics(r, {canonical_key(ball(source, r)): Fraction(1)}, 1)


def restrict_statistics(stats: LocalStatistics, r: int) -> LocalStatistics:
    """Push a census forward along the restriction map to a smaller radius."""
    out = Counter()
    for key, f in stats.census.items():
        out[canonical_key(ball_from_key(key).restrict(r))] += f
    return LocalStatistics(r, dict(sorted(out.items())), stats.sample_size)


def tv_distance(s1: LocalStatistics, s2: LocalStatistics) -> Fraction:
    if s1.radius != s2.radius:
        raise ValidationError(f"radius mismatch: {s1.radius} != {s2.radius}")
    keys = set(s1.census) | set(s2.census)
    zero = Fraction(0)
    return sum((abs(s1.census.get(k, zero) - s2.census.get(k, zero)) for k in keys), zero) / 2


class ApproximationCheck(NamedTuple):
    passed: bool
    worst_key: Optional[NeighborhoodKey]
    worst_discrepancy: Fraction


def check_approximation(graph, reference: LocalStatistics, epsilon) -> ApproximationCheck:
    """Pass iff every key's frequency differs from the reference by less than epsilon."""
    stats = graph if isinstance(graph, LocalStatistics) else local_statistics(graph, reference.radius)
    if stats.radius != reference.radius:
        raise ValidationError("radius mismatch")
    zero = Fraction(0)
    worst_key, worst = None, zero
    for k in sorted(set(stats.census) | set(reference.census)):
        gap = abs(stats.census.get(k, zero) - reference.census.get(k, zero))
        if gap > worst:
            worst_key, worst = k, gap
    return ApproximationCheck(worst < Fraction(epsilon), worst_key, worst)


# ---------------------------------------------------------------------------
# damage and stitch
# ---------------------------------------------------------------------------

def damage(graph: SchreierGraph, fraction: float, seed=None) -> PartialLabeledGraph:
    """Drop ceil(fraction * nV) directed edge entries chosen by ``default_rng(seed)``."""
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must be in [0, 1]")
    n, V = graph.rank, graph.vertex_count
    k = math.ceil(Fraction(fraction).limit_denominator(10**9) * n * V)
    maps = [list(p) for p in graph.perms]
    if k:
        rng = np.random.default_rng(seed)
        for s in rng.choice(n * V, size=k, replace=False):
            maps[s // V][s % V] = -1
    return PartialLabeledGraph(n, V, maps, graph.root)


@dataclass(frozen=True)
class StitchReport:
    removed: int
    repaired: int
    loops_added: int
    chords_added: int
    original_count: int
    discarded: int = 0
    kept: tuple = field(default=(), repr=False)  # new vertex j was original kept[j]
    removed_vertices: tuple = field(default=(), repr=False)
    repaired_vertices: tuple = field(default=(), repr=False)

    @property
    def surviving(self) -> int:
        return self.original_count - self.removed

    def to_json(self) -> dict:
        return {
            "original_count": self.original_count,
            "removed": self.removed,
            "repaired": self.repaired,
            "loops_added": self.loops_added,
            "chords_added": self.chords_added,
            "discarded": self.discarded,
            "kept": list(self.kept),
        }


def _label_degree(out, inn, v, i):
    return (out[i][v] >= 0) + (inn[i][v] >= 0)


def stitch(candidate: PartialLabeledGraph):
    """Repair a label-consistent partial graph into a Schreier graph.

    Returns ``(graph, report)``. When deletion disconnects the graph, the
    component of the root (or of the lowest surviving vertex) is kept and
    the rest is counted in ``report.discarded``.
    """
    if not candidate.is_label_consistent():
        raise ValidationError("candidate has a label with two edges into one vertex")
    n, V = candidate.rank, candidate.vertex_count
    out = [list(m) for m in candidate.maps]
    inn = [list(m) for m in candidate.inverse_maps]

    removed = [v for v in range(V)
               if any(_label_degree(out, inn, v, i) == 1 for i in range(n))]
    gone = set(removed)
    for v in removed:
        for i in range(n):
            w = out[i][v]
            if w >= 0:
                inn[i][w] = -1
                out[i][v] = -1
            u = inn[i][v]
            if u >= 0:
                out[i][u] = -1
                inn[i][v] = -1
    survivors = [v for v in range(V) if v not in gone]
    if not survivors:
        raise ValidationError("no vertices left after deleting defective points")

    repaired = [v for v in survivors
                if any(_label_degree(out, inn, v, i) < 2 for i in range(n))]
    loops = chords = 0
    for x in repaired:
        for i in range(n):
            if out[i][x] < 0 and inn[i][x] < 0:
                out[i][x] = inn[i][x] = x
                loops += 1
    for x in repaired:
        for i in range(n):
            if out[i][x] >= 0 and inn[i][x] >= 0:
                continue
            if out[i][x] >= 0:
                # x starts a maximal a_i path; walk to its end y and add y -> x
                y = x
                while out[i][y] >= 0:
                    y = out[i][y]
                out[i][y] = x
                inn[i][x] = y
            else:
                y = x
                while inn[i][y] >= 0:
                    y = inn[i][y]
                out[i][x] = y
                inn[i][y] = x
            chords += 1

    start = candidate.root if candidate.root is not None and candidate.root not in gone \
        else survivors[0]
    reach = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for i in range(n):
            for w in (out[i][u], inn[i][u]):
                if w not in reach:
                    reach.add(w)
                    stack.append(w)
    kept = [v for v in survivors if v in reach]
    index = {v: k for k, v in enumerate(kept)}
    perms = [[index[out[i][v]] for v in kept] for i in range(n)]
    graph = SchreierGraph(perms, root=index[start])
    report = StitchReport(
        removed=len(removed), repaired=len(repaired), loops_added=loops,
        chords_added=chords, original_count=V, discarded=len(survivors) - len(kept),
        kept=tuple(kept), removed_vertices=tuple(removed), repaired_vertices=tuple(repaired))
    return graph, report
