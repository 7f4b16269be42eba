import itertools
from collections import deque

import numpy as np
import pytest

from schreierlab import SchreierGraph, random_schreier, word


def W(text, n=2):
    return word(text, n)


def bfs_ball(graph, x, r):
    """Plain BFS over the permutations, independent of the library's ball code."""
    seen = {x: 0}
    q = deque([x])
    while q:
        u = q.popleft()
        if seen[u] == r:
            continue
        for p, inv in zip(graph.perms, graph.inverse_perms):
            for w in (p[u], inv[u]):
                if w not in seen:
                    seen[w] = seen[u] + 1
                    q.append(w)
    return set(seen)


def brute_reduced_words(n, r):
    """All reduced words of length r by filtering every letter string."""
    out = []
    for codes in itertools.product(range(2 * n), repeat=r):
        if all(b != a ^ 1 for a, b in zip(codes, codes[1:])):
            out.append(codes)
    return out


def walk(graph, v, codes):
    for c in codes:
        v = graph.table[c][v]
    return v


def corpus(count, seed=0, max_v=200, ranks=(2, 3)):
    rng = np.random.default_rng(seed)
    graphs = []
    for k in range(count):
        n = int(ranks[k % len(ranks)])
        V = int(rng.integers(1, max_v + 1))
        graphs.append(random_schreier(n, V, seed=int(rng.integers(2**31))))
    return graphs


@pytest.fixture
def index2():
    # cosets of <a, b^2, b a b^-1>: a fixes both, b swaps
    return SchreierGraph([[0, 1], [1, 0]])


@pytest.fixture
def single():
    return SchreierGraph([[0], [0]])


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
