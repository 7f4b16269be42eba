import numpy as np
import pytest

from schreierlab import (LatticeSource, PartialLabeledGraph, SchreierGraph, SubgroupSpec,
                         ValidationError, act, ball, canonical_key, concat, detect_k_cycle,
                         free_group_tree, fundamental_group_generators,
                         geodesic_spanning_tree, random_schreier, sphere_sizes, torus_graph,
                         validate)
from schreierlab.graph import ball_from_key

from conftest import W, bfs_ball, brute_reduced_words


def a_source():
    return SubgroupSpec.from_dict({"n": 2, "words": ["a"]}).source()


# validate / act ------------------------------------------------------------

def test_validate_examples(index2, single):
    assert validate(index2) == []
    assert validate(single) == []
    g = PartialLabeledGraph(2, 3, [[1, 2, -1], [0, 1, 2]], root=0)
    problems = validate(g)
    assert (2, 1, "out") in [(p.vertex, p.generator, p.direction) for p in problems]


def test_validate_reports_disconnection():
    g = PartialLabeledGraph(1, 2, [[0, 1]], root=0)
    assert [p.reason for p in validate(g)] == ["not connected to root"]
    with pytest.raises(ValidationError):
        SchreierGraph([[0, 1]])


def test_validate_reports_duplicate_preimage():
    g = PartialLabeledGraph(1, 2, [[1, 1]], root=0)
    assert any(p.reason == "several preimages" for p in validate(g))


def test_act_examples(index2):
    assert act(index2, 0, W("b")) == 1
    assert act(index2, 1, W("")) == 1
    assert act(index2, 0, W("bab")) == 0


def test_act_rank_mismatch(index2):
    with pytest.raises(ValidationError):
        act(index2, 0, W("a", 3))


def test_act_is_a_bijection_and_homomorphism():
    rng = np.random.default_rng(4)
    for k in range(20):
        g = random_schreier(2, 30, seed=k)
        for _ in range(5):
            w1 = W("".join(rng.choice(list("aAbB"), size=6)))
            w2 = W("".join(rng.choice(list("aAbB"), size=6)))
            images = [act(g, v, w1) for v in range(g.vertex_count)]
            assert sorted(images) == list(range(g.vertex_count))
            for v in range(g.vertex_count):
                assert act(g, act(g, v, w1), w2) == act(g, v, concat(w1, w2))


# balls ------------------------------------------------------------------------

def test_ball_examples():
    assert ball(free_group_tree(2), 2).size == 17
    assert ball(torus_graph(2, 5), 0).size == 1
    b = ball(a_source(), 1)
    assert b.size == 3
    assert b.maps[0][0] == 0  # a-loop at the root


def test_ball_budget():
    from schreierlab import ResourceLimitError
    src = free_group_tree(2, vertex_budget=100)
    with pytest.raises(ResourceLimitError):
        ball(src, 5)


def test_sphere_sizes_examples(index2):
    assert sphere_sizes(free_group_tree(2), 3) == [1, 4, 12, 36]
    assert sphere_sizes(a_source(), 3) == [1, 2, 6, 18]
    assert sphere_sizes(index2, 3) == [1, 1, 0, 0]


def _cosets_of_a(r_max):
    """Brute force for <a>: the coset H g is named by g with its leading a-power stripped."""
    reps = {}
    for r in range(r_max + 1):
        for codes in brute_reduced_words(2, r):
            k = 0
            while k < len(codes) and codes[k] >> 1 == 0:
                k += 1
            rep = codes[k:]
            reps[rep] = min(reps.get(rep, r), r)
    counts = [0] * (r_max + 1)
    for rep, r in reps.items():
        counts[len(rep)] += 1
    return counts


def test_sphere_sizes_of_a_against_coset_bfs():
    assert sphere_sizes(a_source(), 6) == _cosets_of_a(6)


def test_ball_matches_plain_bfs():
    g = random_schreier(2, 60, seed=11)
    for x in (0, 7, 33):
        for r in range(4):
            b = ball(g, r, center=x)
            assert set(b.labels) == bfs_ball(g, x, r)
            assert sum(b.sphere_sizes()) == b.size


# canonical keys -----------------------------------------------------------------

def test_key_relabel_invariance():
    rng = np.random.default_rng(0)
    for trial in range(1000):
        g = random_schreier(2, int(rng.integers(1, 25)), seed=trial)
        x = int(rng.integers(g.vertex_count))
        r = int(rng.integers(0, 4))
        s1 = rng.permutation(g.vertex_count)
        s2 = rng.permutation(g.vertex_count)
        k1 = canonical_key(ball(g.relabeled(s1), r, center=int(s1[x])))
        k2 = canonical_key(ball(g.relabeled(s2), r, center=int(s2[x])))
        assert k1 == k2


def test_key_distinguishes_profiles():
    g = random_schreier(2, 80, seed=5)
    by_key = {}
    for x in range(g.vertex_count):
        b = ball(g, 3, center=x)
        by_key.setdefault(canonical_key(b), set()).add(tuple(b.sphere_sizes()))
    assert all(len(profiles) == 1 for profiles in by_key.values())


def test_key_examples():
    t = canonical_key(ball(free_group_tree(2), 1))
    h = canonical_key(ball(a_source(), 1))
    assert t != h
    T = torus_graph(2, 5)
    assert canonical_key(ball(T, 2, center=0)) == canonical_key(ball(T, 2, center=13))


def test_key_roundtrip_and_projective_consistency():
    g = random_schreier(3, 40, seed=2)
    for x in range(0, 40, 7):
        for r in range(3):
            big = ball(g, r + 1, center=x)
            small = ball(g, r, center=x)
            assert canonical_key(big.restrict(r)) == canonical_key(small)
            key = canonical_key(big)
            assert canonical_key(ball_from_key(key)) == key


# trees and pi_1 ------------------------------------------------------------------

def test_tree_of_a_tree_is_itself():
    b = ball(free_group_tree(2), 3)
    t = geodesic_spanning_tree(b)
    assert len(t.parent) == b.size - 1
    assert len(t.tree_edges()) == b.edge_count()


def test_tree_index2(index2):
    t = geodesic_spanning_tree(index2)
    assert t.parent == {1: (0, 2)}  # root --b--> 1
    assert len(t.tree_edges()) == 1


def test_tree_distances_on_torus():
    T = torus_graph(2, 5)
    t = geodesic_spanning_tree(T)
    for v in range(T.vertex_count):
        assert t.dist[v] == T.distances[0, v]
        assert len(t.path_from_root(v)) == t.dist[v]
        assert act(T, 0, W("".join("aAbB"[c] for c in t.path_from_root(v)))) == v


def test_pi1_examples(single, index2):
    assert sorted(str(w) for w in fundamental_group_generators(single)) == ["a", "b"]
    gens = fundamental_group_generators(index2)
    assert sorted(str(w) for w in gens) == ["a", "baB", "bb"]
    assert len(fundamental_group_generators(torus_graph(2, 2))) == 5


def test_pi1_rank_and_fixing_root():
    rng = np.random.default_rng(9)
    for k in range(40):
        n = 2 + k % 2
        g = random_schreier(n, int(rng.integers(1, 51)), seed=k)
        gens = fundamental_group_generators(g)
        assert len(gens) == (n - 1) * g.vertex_count + 1
        assert all(act(g, g.root, w) == g.root for w in gens)


# cycles ----------------------------------------------------------------------------

def test_k_cycle_examples(index2):
    tree = free_group_tree(2)
    assert not any(detect_k_cycle(tree, k) for k in range(1, 7))
    assert detect_k_cycle(a_source(), 1)
    assert detect_k_cycle(LatticeSource(2), 4)
    assert not detect_k_cycle(LatticeSource(2), 3)
    assert detect_k_cycle(index2, 2)  # b swaps: two distinct b-edges


def test_parallel_edges_make_two_cycles():
    g = SchreierGraph([[1, 2, 0], [1, 2, 0]])  # a and b both go 0 -> 1
    assert detect_k_cycle(g, 2)
    assert detect_k_cycle(g, 3)
    assert not detect_k_cycle(g, 1)
    h = SchreierGraph([[1, 2, 0], [0, 1, 2]])
    assert not detect_k_cycle(h, 2)
    assert detect_k_cycle(h, 1)


def test_k_cycle_against_brute_force():
    # brute force: some cyclically reduced word of length k whose path closes at the
    # root visiting k distinct vertices with distinct edges
    for seed in range(15):
        g = random_schreier(2, 12, seed=seed)
        for k in range(1, 6):
            found = False
            for codes in brute_reduced_words(2, k):
                if k > 1 and codes[-1] == codes[0] ^ 1:
                    continue
                v, seen, edges, ok = g.root, [g.root], set(), True
                for c in codes:
                    w = g.table[c][v]
                    e = (v, c >> 1) if c % 2 == 0 else (w, c >> 1)
                    if e in edges:
                        ok = False
                        break
                    edges.add(e)
                    seen.append(w)
                    v = w
                if ok and v == g.root and len(set(seen[:-1])) == k:
                    found = True
                    break
            assert detect_k_cycle(g, k) == found, (seed, k)
