"""
Boundary-action quantities of a subgroup read off its Schreier graph.

The measure of the Schreier fundamental domain is the limit of the
nonincreasing sphere ratios |dU_r(Gamma)| / (2n (2n-1)^(r-1)); cogrowth
is the exponential growth of reduced words fixing the root, counted here
as closed non-backtracking walks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import MonotonicityError, ValidationError
from .graph import BallView, SchreierGraph, ball, sphere_sizes
from .subgroups import LatticeSource
from .words import sphere_size

CONSERVATIVE = "conservative-consistent"
DISSIPATIVE = "dissipative-part-positive"
INCONCLUSIVE = "inconclusive"

RECURRENT = "recurrent-like"
TRANSIENT = "transient-like"


@dataclass(frozen=True)
class RatioSequence:
    kind: str  # "sphere" or "ball"
    values: tuple  # Fractions, index r
    rank: int
    sizes: tuple = ()

    @property
    def r_max(self) -> int:
        return len(self.values) - 1

    def is_nonincreasing(self) -> bool:
        return all(b <= a for a, b in zip(self.values, self.values[1:]))


def boundary_ratios(source, r_max: int) -> RatioSequence:
    """|dU_r(Gamma)| / |dU_r(F_n)| for r = 0..r_max; raises if not monotone."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    n = source.rank
    spheres = sphere_sizes(source, r_max)
    values = tuple(Fraction(s, sphere_size(n, r)) for r, s in enumerate(spheres))
    seq = RatioSequence("sphere", values, n, tuple(spheres))
    if not seq.is_nonincreasing():
        bad = next(r for r in range(1, len(values)) if values[r] > values[r - 1])
        raise MonotonicityError(f"sphere ratio increases at r={bad}: defective source?")
    return seq


def ball_ratios(source, r_max: int) -> RatioSequence:
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    n = source.rank
    spheres = sphere_sizes(source, r_max)
    values, acc, free = [], 0, 0
    for r, s in enumerate(spheres):
        acc += s
        free += sphere_size(n, r)
        values.append(Fraction(acc, free))
    return RatioSequence("ball", tuple(values), n, tuple(spheres))


class DeltaEstimate(NamedTuple):
    last: Fraction
    certificate: bool  # the sequence was checked nonincreasing
    bracket: tuple  # (last - slack, last)
    slack: Fraction


def delta_measure_estimate(seq: RatioSequence) -> DeltaEstimate:
    """Upper bound for m(Delta_H) from a sphere-ratio sequence, with slack."""
    if seq.kind != "sphere":
        raise ValidationError("need a sphere-ratio sequence")
    if len(seq.values) < 2:
        raise ValidationError("need at least two ratios")
    last = seq.values[-1]
    slack = abs(seq.values[-2] - last)
    lo = max(last - slack, Fraction(0))
    return DeltaEstimate(last, seq.is_nonincreasing(), (lo, last), slack)


class Classification(NamedTuple):
    delta_estimate: DeltaEstimate
    label: str


def classify_conservativity(source, r_max: int, threshold=Fraction(1, 1000)) -> Classification:
    """Label the boundary action from the sphere-ratio sequence.

    ``dissipative-part-positive`` needs the last three ratios equal and
    positive; ``conservative-consistent`` needs the ratios to hit 0 or drop
    below ``threshold``. The labels never claim more than consistency.
    """
    if r_max < 2:
        raise ValueError("r_max must be >= 2")
    seq = boundary_ratios(source, r_max)
    est = delta_measure_estimate(seq)
    tail = seq.values[-3:]
    if est.bracket[0] > 0 and tail[0] == tail[1] == tail[2]:
        label = DISSIPATIVE
    elif est.last == 0 or est.last < Fraction(threshold):
        label = CONSERVATIVE
    else:
        label = INCONCLUSIVE
    return Classification(est, label)


# ---------------------------------------------------------------------------
# cogrowth
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CogrowthSeries:
    counts: tuple  # c_r: reduced words of length exactly r fixing the root
    cumulative: tuple  # |H ∩ U_r(F_n)|

    @property
    def root_estimates(self) -> tuple:
        """|H ∩ U_r|^(1/r) for r >= 1 (index 0 holds r = 1)."""
        return tuple(c ** (1.0 / r) for r, c in enumerate(self.cumulative) if r >= 1)

    def estimate(self, r: Optional[int] = None) -> float:
        r = len(self.counts) - 1 if r is None else r
        return self.cumulative[r] ** (1.0 / r)


def _neighbor_arrays(src, vertices):
    """Per-letter successor index arrays (-1 where the edge leaves the set)."""
    index = {v: k for k, v in enumerate(vertices)}
    n2 = 2 * src.rank
    nbr = np.full((n2, len(vertices)), -1, dtype=np.int64)
    for k, v in enumerate(vertices):
        for c in range(n2):
            w = src.move(v, c)
            if w is not None and w in index:
                nbr[c, k] = index[w]
    return nbr


def closed_reduced_counts(src, vertices, root_index: int, r_max: int) -> list:
    """Counts of closed non-backtracking walks at the root, computed by a transfer DP.

    State (vertex, last letter); a step may use any letter except the
    inverse of the last one. Counts are exact Python integers.
    """
    nbr = _neighbor_arrays(src, vertices)
    n2, V = nbr.shape
    state = np.zeros((V, n2), dtype=object)
    counts = [1]
    for c in range(n2):
        w = nbr[c, root_index]
        if w >= 0:
            state[w, c] += 1
    counts.append(int(sum(state[root_index])))
    for _ in range(2, r_max + 1):
        total = state.sum(axis=1)
        new = np.zeros_like(state)
        for c in range(n2):
            live = np.flatnonzero(nbr[c] >= 0)
            # successor maps are injective, so plain assignment does not collide
            new[nbr[c, live], c] = total[live] - state[live, c ^ 1]
        state = new
        counts.append(int(sum(state[root_index])))
    return counts[:r_max + 1]


def cogrowth_series(source, r_max: int) -> CogrowthSeries:
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if isinstance(source, SchreierGraph):
        vertices, root = list(range(source.vertex_count)), source.root
        counts = closed_reduced_counts(source, vertices, root, r_max)
    else:
        # a closed walk of length r never leaves the radius r//2 ball
        b = ball(source, r_max // 2)
        counts = closed_reduced_counts(b, list(range(b.size)), 0, r_max)
    cumulative, acc = [], 0
    for c in counts:
        acc += c
        cumulative.append(acc)
    return CogrowthSeries(tuple(counts), tuple(cumulative))


# ---------------------------------------------------------------------------
# growth bound from a density of k-cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthBoundParams:
    n: int
    k: int
    epsilon: float
    r: int = 1
    m_max: int = 20

    @property
    def ell(self) -> int:
        return self.k // 2

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("rank must be >= 2")
        if self.k < 2:
            raise ValidationError("k must be >= 2 (k = 1 gives a degenerate recurrence)")
        if not 0 < self.epsilon <= 1:
            raise ValidationError("epsilon must be in (0, 1]")
        if self.r < 1 or self.m_max < 0:
            raise ValidationError("need r >= 1 and m_max >= 0")


class GrowthBound(NamedTuple):
    roots: tuple  # roots of t^2 - (q - eps) t - eps^2, larger first
    dominant_decay: float  # larger root / q
    coefficients: tuple  # (C0, C1) in bound_m = C0 * root0^m + C1 * root1^m
    bounds: tuple  # bound on E(X_{r + m*ell}) for m = 0..m_max


def growth_bound(params: GrowthBoundParams) -> GrowthBound:
    """Solve X_{m+1} <= (q - eps) X_m + eps^2 X_{m-1}, q = (2n-1)^ell.

    Initial conditions are X_0 <= f(r) and X_1 <= f(r + ell) - eps f(r).
    """
    n, ell, eps = params.n, params.ell, float(params.epsilon)
    q = (2 * n - 1) ** ell
    if eps >= q:
        raise ValidationError(f"epsilon must be below (2n-1)^ell = {q}")
    b = q - eps
    disc = math.sqrt(b * b + 4 * eps * eps)
    lam_plus, lam_minus = (b + disc) / 2, (b - disc) / 2
    f0 = sphere_size(n, params.r)
    f1 = sphere_size(n, params.r + ell) - eps * f0
    c0 = (f1 - lam_minus * f0) / (lam_plus - lam_minus)
    c1 = f0 - c0
    bounds = tuple(c0 * lam_plus ** m + c1 * lam_minus ** m for m in range(params.m_max + 1))
    return GrowthBound((lam_plus, lam_minus), lam_plus / q, (c0, c1), bounds)


def recurrence_bounds(params: GrowthBoundParams) -> list:
    """The same bounds by iterating the recurrence directly."""
    n, ell, eps = params.n, params.ell, float(params.epsilon)
    q = (2 * n - 1) ** ell
    xs = [float(sphere_size(n, params.r))]
    xs.append(sphere_size(n, params.r + ell) - eps * xs[0])
    while len(xs) <= params.m_max:
        xs.append((q - eps) * xs[-1] + eps * eps * xs[-2])
    return xs[:params.m_max + 1]


# ---------------------------------------------------------------------------
# simple random walk
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WalkStats:
    steps: int
    trials: int
    seed: int
    returns: int
    frequency: float
    label: str


def _walk_finite(graph: SchreierGraph, choices: np.ndarray) -> np.ndarray:
    table = np.asarray(graph.table, dtype=np.int64)
    pos = np.full(choices.shape[0], graph.root, dtype=np.int64)
    hit = np.zeros(choices.shape[0], dtype=bool)
    for s in range(choices.shape[1]):
        pos = table[choices[:, s], pos]
        hit |= pos == graph.root
    return hit


def _walk_lattice(src: LatticeSource, codes: np.ndarray) -> bool:
    d = src.d
    axis = codes >> 1
    sign = np.where(codes & 1, -1, 1)
    delta = np.zeros((len(codes), d), dtype=np.int64)
    delta[np.arange(len(codes)), axis] = sign
    if src.flip_seed is not None and d > 1:
        others = np.cumsum(delta[:, 1:], axis=0)
        before = np.vstack([np.zeros((1, d - 1), dtype=np.int64), others[:-1]])
        a_steps = np.flatnonzero(axis == 0)
        if len(a_steps):
            rows, inverse = np.unique(before[a_steps], axis=0, return_inverse=True)
            flipped = np.array([src.row_flipped(tuple(int(x) for x in row)) for row in rows])
            delta[a_steps, 0] *= np.where(flipped[inverse.ravel()], -1, 1)
    pos = np.cumsum(delta, axis=0)
    return bool(np.any(np.all(pos == 0, axis=1)))


def _walk_generic(src, codes) -> bool:
    v = src.root
    for c in codes:
        v = src.move(v, int(c))
        if v == src.root:
            return True
    return False


def srw_return_stats(source, steps: int, trials: int, seed: int,
                     recurrent_at: float = 0.9, transient_at: float = 0.5) -> WalkStats:
    """Fraction of simple random walks that revisit the root within ``steps``.

    Trial t draws its letters from ``default_rng(seed + t)``. The labels are
    heuristics: no finite run decides recurrence.
    """
    if steps < 1 or trials < 1:
        raise ValueError("steps and trials must be >= 1")
    n2 = 2 * source.rank
    draws = [np.random.default_rng(seed + t).integers(0, n2, size=steps) for t in range(trials)]
    if isinstance(source, SchreierGraph):
        hits = _walk_finite(source, np.vstack(draws))
    elif isinstance(source, LatticeSource):
        hits = [_walk_lattice(source, codes) for codes in draws]
    else:
        hits = [_walk_generic(source, codes) for codes in draws]
    returns = int(np.sum(hits))
    freq = returns / trials
    if freq >= recurrent_at:
        label = RECURRENT
    elif freq <= transient_at:
        label = TRANSIENT
    else:
        label = INCONCLUSIVE
    return WalkStats(steps, trials, seed, returns, freq, label)
