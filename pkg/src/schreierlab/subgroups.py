"""
Schreier graphs and ball sources built from subgroup data.

* :func:`stallings_core` folds the bouquet of generator petals.
* :class:`CoreSource` grows the (2n-1)-branching trees hanging off every
  empty slot of a core, giving the full (usually infinite) Schreier graph.
* :func:`coset_enumerate` is Todd-Coxeter for relator-free presentations.
* :func:`torus_graph` / :class:`LatticeSource` are the Z^d examples, with
  optional random reversal of a-chains.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .graph import (PartialLabeledGraph, SchreierGraph, default_vertex_budget,
                    geodesic_spanning_tree)
from .words import ReducedWord, sphere_size


# ---------------------------------------------------------------------------
# Stallings folding
# ---------------------------------------------------------------------------

class StallingsCore(PartialLabeledGraph):
    """Folded core graph; vertex 0 is the base point."""

    def missing_slots(self) -> list:
        """(vertex, letter code) pairs with no edge."""
        return [(v, c) for v in range(self.vertex_count) for c in range(2 * self.rank)
                if self.move(v, c) is None]

    def is_complete(self) -> bool:
        return not self.missing_slots()


def _fold(rank, vertex_count, edges):
    parent = list(range(vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = [dict() for _ in range(rank)]
    inn = [dict() for _ in range(rank)]
    work = deque(edges)

    def merge(a, b):
        a, b = find(a), find(b)
        if a == b:
            return
        keep, gone = min(a, b), max(a, b)
        parent[gone] = keep
        for i in range(rank):
            t = out[i].pop(gone, None)
            if t is not None:
                del inn[i][t]
                work.append((gone, i, t))
            s = inn[i].pop(gone, None)
            if s is not None:
                del out[i][s]
                work.append((s, i, gone))

    while work:
        u, i, v = work.popleft()
        u, v = find(u), find(v)
        w = out[i].get(u)
        if w is not None:
            if w != v:
                merge(w, v)
                work.append((u, i, v))
            continue
        x = inn[i].get(v)
        if x is not None:
            merge(x, u)
            work.append((u, i, v))
            continue
        out[i][u] = v
        inn[i][v] = u

    live = sorted({find(x) for x in range(vertex_count)})
    return live, out, inn


def _trim_hairs(live, out, inn, rank, root):
    live = set(live)
    changed = True
    while changed:
        changed = False
        for v in sorted(live):
            if v == root:
                continue
            deg = sum((v in out[i]) + (v in inn[i]) for i in range(rank))
            if deg <= 1:
                for i in range(rank):
                    t = out[i].pop(v, None)
                    if t is not None:
                        del inn[i][t]
                    s = inn[i].pop(v, None)
                    if s is not None:
                        del out[i][s]
                live.discard(v)
                changed = True
    return live


def _canonical_partial(rank, live, out, root, cls=PartialLabeledGraph):
    """Renumber vertices in letter-ordered BFS order from root."""
    inn = [{v: u for u, v in o.items()} for o in out]

    def move(u, c):
        return (inn if c & 1 else out)[c >> 1].get(u)

    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for c in range(2 * rank):
            w = move(u, c)
            if w is not None and w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    index = {v: k for k, v in enumerate(order)}
    maps = [[index[out[i][v]] if v in out[i] else -1 for v in order] for i in range(rank)]
    return cls(rank, len(order), maps, root=0)


def stallings_core(n: int, gens: Sequence[ReducedWord]) -> StallingsCore:
    """Folded Stallings graph of the subgroup generated by ``gens``."""
    edges = []
    count = 1
    for w in gens:
        if w.rank != n:
            raise ValidationError(f"generator {w} has rank {w.rank}, expected {n}")
        if not w.codes:
            continue
        path = [0] + list(range(count, count + len(w) - 1)) + [0]
        count += len(w) - 1
        for k, c in enumerate(w.codes):
            u, v = path[k], path[k + 1]
            edges.append((u, c >> 1, v) if c % 2 == 0 else (v, c >> 1, u))
    live, out, inn = _fold(n, count, edges)
    live = _trim_hairs(live, out, inn, n, 0)
    return _canonical_partial(n, live, out, 0, StallingsCore)


class CoreSource:
    """Ball oracle for the Schreier graph obtained by completing a core with trees.

    Core vertices are ints; a vertex of a hanging tree is a tuple
    ``(v, c1, ..., ck)``: the reduced path leaving core vertex v through
    the empty slot c1.
    """

    def __init__(self, core: PartialLabeledGraph, vertex_budget: Optional[int] = None):
        self.core = core
        self.rank = core.rank
        self.root = 0 if core.root is None else core.root
        self.vertex_budget = vertex_budget or default_vertex_budget()

    def move(self, v, c):
        if isinstance(v, tuple):
            if c == v[-1] ^ 1:
                return v[:-1] if len(v) > 2 else v[0]
            return v + (c,)
        w = self.core.move(v, c)
        return (v, c) if w is None else w

    def is_finite(self) -> bool:
        return not any(self.core.move(v, c) is None
                       for v in range(self.core.vertex_count) for c in range(2 * self.rank))

    def fast_sphere_sizes(self, r_max: int) -> list:
        # A hanging-tree vertex at depth t below core vertex v is at distance d(v) + t.
        tree = geodesic_spanning_tree(self.core)
        counts = [0] * (r_max + 1)
        q = 2 * self.rank - 1
        for v, d in tree.dist.items():
            if d <= r_max:
                counts[d] += 1
            for c in range(2 * self.rank):
                if self.core.move(v, c) is None:
                    for t in range(1, r_max - d + 1):
                        counts[d + t] += q ** (t - 1)
        return counts

    def __repr__(self):
        return f"CoreSource(rank={self.rank}, core_vertices={self.core.vertex_count})"


def ball_source_from_core(core: PartialLabeledGraph,
                          vertex_budget: Optional[int] = None) -> CoreSource:
    return CoreSource(core, vertex_budget)


# ---------------------------------------------------------------------------
# Todd-Coxeter
# ---------------------------------------------------------------------------

def coset_enumerate(n: int, gens: Sequence[ReducedWord], max_cosets: int = 10000) -> SchreierGraph:
    """Finite Schreier graph of <gens> by HLT coset enumeration.

    There are no relators, so the only deductions come from scanning the
    subgroup generators at the base coset. Exhausting ``max_cosets``
    raises :class:`ResourceLimitError`; it does not prove infinite index.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    n2 = 2 * n
    table = [[None] * n2]
    alive = [True]
    fwd = [0]  # coincidence forwarding
    live_count = 1

    def rep(a):
        while fwd[a] != a:
            fwd[a] = fwd[fwd[a]]
            a = fwd[a]
        return a

    def define(a, c):
        nonlocal live_count
        if live_count >= max_cosets:
            raise ResourceLimitError(
                f"coset enumeration did not close within {max_cosets} cosets")
        b = len(table)
        table.append([None] * n2)
        alive.append(True)
        fwd.append(b)
        live_count += 1
        table[a][c] = b
        table[b][c ^ 1] = a
        return b

    def coincidence(a, b):
        nonlocal live_count
        queue = deque()

        def merge(x, y):
            nonlocal live_count
            x, y = rep(x), rep(y)
            if x == y:
                return
            if y < x:
                x, y = y, x
            fwd[y] = x
            alive[y] = False
            live_count -= 1
            queue.append(y)

        merge(a, b)
        while queue:
            g = queue.popleft()
            for c in range(n2):
                d = table[g][c]
                if d is None:
                    continue
                table[d][c ^ 1] = None
                table[g][c] = None
                m1, m2 = rep(g), rep(d)
                if table[m1][c] is not None:
                    merge(m2, table[m1][c])
                elif table[m2][c ^ 1] is not None:
                    merge(m1, table[m2][c ^ 1])
                else:
                    table[m1][c] = m2
                    table[m2][c ^ 1] = m1

    def scan_and_fill(a, codes):
        # Scan codes from both ends of coset a, defining cosets to close the gap.
        L = len(codes)
        while True:
            f, i = a, 0
            b, j = a, L - 1
            while i <= j and table[f][codes[i]] is not None:
                f = table[f][codes[i]]
                i += 1
            if i > j:
                if f != a:
                    coincidence(f, a)
                return
            while j >= i and table[b][codes[j] ^ 1] is not None:
                b = table[b][codes[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][codes[i]] = b
                table[b][codes[i] ^ 1] = f
                return
            define(f, codes[i])

    for w in gens:
        if w.rank != n:
            raise ValidationError(f"generator {w} has rank {w.rank}, expected {n}")
        if w.codes and alive[0]:
            scan_and_fill(rep(0), list(w.codes))

    a = 0
    while a < len(table):
        if alive[a]:
            for c in range(n2):
                if alive[a] and table[a][c] is None:
                    define(a, c)
        a += 1

    live = [x for x in range(len(table)) if alive[x]]
    out = [{x: table[x][2 * i] for x in live} for i in range(n)]
    partial = _canonical_partial(n, live, out, rep(0))
    return SchreierGraph(partial.maps, root=0)


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

class TorusGraph(SchreierGraph):
    """(Z/N)^d with standard generators; a-chains optionally reversed."""

    def __init__(self, d: int, N: int, flips: Optional[Sequence[bool]] = None):
        if d < 1 or N < 1:
            raise ValueError("need d >= 1 and N >= 1")
        V = N ** d
        idx = np.arange(V)
        coords = [(idx // N ** k) % N for k in range(d)]
        perms = []
        for k in range(d):
            shifted = idx + (((coords[k] + 1) % N) - coords[k]) * N ** k
            perms.append(shifted)
        if flips is not None:
            flips = tuple(bool(x) for x in flips)
            if len(flips) != V // N:
                raise ValueError("need one flip flag per a-chain")
            row = idx // N
            back = idx + (((coords[0] - 1) % N) - coords[0])
            perms[0] = np.where(np.asarray(flips)[row], back, perms[0])
        super().__init__([p.tolist() for p in perms], root=0, check=False)
        self.d = d
        self.N = N
        self.flips = flips

    def coords(self, v: int) -> tuple:
        return tuple((v // self.N ** k) % self.N for k in range(self.d))

    def index(self, coords: Sequence[int]) -> int:
        return sum((x % self.N) * self.N ** k for k, x in enumerate(coords))


def torus_graph(d: int, N: int, flips: Optional[int] = None) -> TorusGraph:
    """Torus (Z/N)^d; with a seed, each a-chain is reversed with probability 1/2.

    Flip draws use ``numpy.random.default_rng(seed)`` (PCG64), one uniform
    per row in row-index order.
    """
    if d not in (2, 3):
        raise ValueError("built-in lattices have dimension 2 or 3")
    if flips is None:
        return TorusGraph(d, N)
    rng = np.random.default_rng(flips)
    return TorusGraph(d, N, rng.random(N ** (d - 1)) < 0.5)


def _zigzag(x: int) -> int:
    return 2 * x if x >= 0 else -2 * x - 1


class LatticeSource:
    """The infinite Z^d Schreier graph of F_d, vertices are coordinate tuples.

    With ``flip_seed`` the a-chain through row (x_2, ..., x_d) is reversed
    iff the first draw of ``default_rng([seed, zigzag(x_2), ...])`` is < 1/2.
    """

    def __init__(self, d: int, flip_seed: Optional[int] = None,
                 vertex_budget: Optional[int] = None):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.d = d
        self.rank = d
        self.root = (0,) * d
        self.flip_seed = flip_seed
        self.vertex_budget = vertex_budget or default_vertex_budget()
        self._flip = lru_cache(maxsize=None)(self._draw_flip)

    def _draw_flip(self, row: tuple) -> bool:
        if self.flip_seed is None:
            return False
        entropy = [int(self.flip_seed)] + [_zigzag(x) for x in row]
        return bool(np.random.default_rng(entropy).random() < 0.5)

    def row_flipped(self, row: tuple) -> bool:
        return self._flip(tuple(row))

    def move(self, v, c):
        k = c >> 1
        step = -1 if c & 1 else 1
        if k == 0 and self._flip(v[1:]):
            step = -step
        return v[:k] + (v[k] + step,) + v[k + 1:]

    def is_finite(self) -> bool:
        return False

    def __repr__(self):
        return f"LatticeSource(d={self.d}, flip_seed={self.flip_seed})"


# ---------------------------------------------------------------------------
# random graphs and the bipartite gadget
# ---------------------------------------------------------------------------

def _connected(perms, V):
    seen = np.zeros(V, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for p, q in perms:
            for w in (p[u], q[u]):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return bool(seen.all())


def random_schreier(n: int, V: int, seed=None, max_tries: int = 1000) -> SchreierGraph:
    """n independent uniform permutations of V points, retried until connected.

    Uses ``numpy.random.default_rng(seed)``; root is vertex 0.
    """
    if V < 1:
        raise ValueError("V must be >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        perms = [rng.permutation(V) for _ in range(n)]
        pairs = [(p, np.argsort(p)) for p in perms]
        if _connected(pairs, V):
            return SchreierGraph([p.tolist() for p in perms], root=0, check=False)
    raise ResourceLimitError(f"no connected sample after {max_tries} tries")


class BipartiteThinness(NamedTuple):
    tau_on_X: Fraction
    tau_on_Y: Fraction
    mu_X: Fraction


def bipartite_thinness(N: int) -> BipartiteThinness:
    """tau_1 on the two sides of K(2^N, N) and the measure of the big side."""
    if N < 1:
        raise ValueError("N must be >= 1")
    X = 2 ** N
    return BipartiteThinness(
        tau_on_X=Fraction(1, 1 + N) + Fraction(N, 1 + X),
        tau_on_Y=Fraction(1, 1 + X) + Fraction(X, 1 + N),
        mu_X=Fraction(X, X + N),
    )


# ---------------------------------------------------------------------------
# subgroup specs
# ---------------------------------------------------------------------------

@dataclass
class SubgroupSpec:
    rank: int = 2
    kind: str = "generators"  # generators | lattice | trivial | full
    words: list = field(default_factory=list)
    d: int = 2
    N: Optional[int] = None
    flip_seed: Optional[int] = None

    @classmethod
    def from_dict(cls, data: dict) -> "SubgroupSpec":
        kind = data.get("kind", "generators")
        if kind not in ("generators", "lattice", "trivial", "full"):
            raise ValidationError(f"unknown subgroup kind {kind!r}")
        if kind == "lattice":
            d = int(data.get("d", 2))
            return cls(rank=int(data.get("n", d)), kind=kind, d=d, N=data.get("N"),
                       flip_seed=data.get("flip_seed"))
        n = int(data.get("n", 2))
        words = [ReducedWord.parse(w, n) for w in data.get("words", [])]
        if kind == "generators" and not words:
            raise ValidationError("generators spec needs a nonempty 'words' list")
        return cls(rank=n, kind=kind, words=words)

    @classmethod
    def from_json(cls, text: str) -> "SubgroupSpec":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        if self.kind == "lattice":
            out = {"kind": "lattice", "d": self.d}
            if self.N is not None:
                out["N"] = self.N
            if self.flip_seed is not None:
                out["flip_seed"] = self.flip_seed
            return out
        out = {"n": self.rank, "kind": self.kind}
        if self.kind == "generators":
            out["words"] = [str(w) for w in self.words]
        return out

    def source(self, vertex_budget: Optional[int] = None):
        """Ball source realizing the Schreier graph of this subgroup."""
        if self.kind == "lattice":
            if self.d != self.rank:
                raise ValidationError("lattice dimension must equal the rank")
            if self.N is not None:
                return torus_graph(self.d, int(self.N), self.flip_seed)
            return LatticeSource(self.d, self.flip_seed, vertex_budget)
        if self.kind == "full":
            return SchreierGraph([[0]] * self.rank, root=0)
        words = [] if self.kind == "trivial" else self.words
        return CoreSource(stallings_core(self.rank, words), vertex_budget)


def free_group_tree(n: int, vertex_budget: Optional[int] = None) -> CoreSource:
    """Cayley graph of F_n (the trivial subgroup)."""
    return CoreSource(stallings_core(n, []), vertex_budget)


def free_sphere_sizes(n: int, r_max: int) -> list:
    return [sphere_size(n, r) for r in range(r_max + 1)]
