import math
from fractions import Fraction

import numpy as np
import pytest

from schreierlab import (GrowthBoundParams, LatticeSource, MonotonicityError, SchreierGraph,
                         SubgroupSpec, ValidationError, ball_ratios, boundary_ratios,
                         classify_conservativity, cogrowth_series, delta_measure_estimate,
                         free_group_tree, growth_bound, random_schreier, sphere_sizes,
                         srw_return_stats, torus_graph)
from schreierlab.boundary import (CONSERVATIVE, DISSIPATIVE, RECURRENT, TRANSIENT,
                                  recurrence_bounds)
from schreierlab.words import sphere_size

from conftest import brute_reduced_words, corpus


def spec(*words, n=2):
    return SubgroupSpec.from_dict({"n": n, "words": list(words)}).source()


def builtin_sources():
    return {
        "tree": free_group_tree(2),
        "tree3": free_group_tree(3),
        "<a>": spec("a"),
        "<a,bb>": spec("a", "bb"),
        "<abAB>": spec("abAB"),
        "<aab,bAb>": spec("aab", "bAb"),
        "full": SubgroupSpec.from_dict({"kind": "full"}).source(),
        "index2": SchreierGraph([[0, 1], [1, 0]]),
        "Z2": LatticeSource(2),
        "Z3": LatticeSource(3),
        "Z2 flipped": LatticeSource(2, flip_seed=7),
        "torus": torus_graph(2, 9, flips=4),
    }


# ratio sequences --------------------------------------------------------------------------

def test_sphere_ratio_examples():
    assert set(boundary_ratios(free_group_tree(2), 12).values) == {1}
    assert boundary_ratios(spec("a"), 12).values == (1,) + (Fraction(1, 2),) * 12
    v = boundary_ratios(spec("a", "bb"), 12).values
    assert v[:3] == (1, Fraction(1, 4), Fraction(1, 6))
    assert set(v[2:]) == {Fraction(1, 6)}
    assert boundary_ratios(SchreierGraph([[0, 1], [1, 0]]), 12).values[2:] == (0,) * 11


def test_ball_ratio_examples():
    assert set(ball_ratios(free_group_tree(2), 6).values) == {1}
    idx = ball_ratios(SchreierGraph([[0, 1], [1, 0]]), 3).values
    assert idx == (1, Fraction(2, 5), Fraction(2, 17), Fraction(2, 53))
    assert ball_ratios(spec("a"), 3).values == (1, Fraction(3, 5), Fraction(9, 17), Fraction(27, 53))


@pytest.mark.parametrize("name", list(builtin_sources()))
def test_monotone_builtin(name):
    seq = boundary_ratios(builtin_sources()[name], 12)
    assert seq.is_nonincreasing()
    assert all(0 <= x <= 1 for x in seq.values)


def test_monotone_random_graphs():
    for g in corpus(50, seed=40, max_v=200):
        assert boundary_ratios(g, 12).is_nonincreasing()


def test_monotonicity_violation_is_reported():
    class Bogus:
        # claims more vertices on a sphere than the free group has
        rank = 2
        def fast_sphere_sizes(self, r_max):
            return [1, 1, 12][:r_max + 1]
    with pytest.raises(MonotonicityError):
        boundary_ratios(Bogus(), 2)


def test_ball_and_sphere_limits_agree():
    for src, limit in ((spec("a"), Fraction(1, 2)), (spec("a", "bb"), Fraction(1, 6)),
                       (free_group_tree(2), Fraction(1))):
        assert boundary_ratios(src, 12).values[-1] == limit
        assert abs(ball_ratios(src, 12).values[-1] - limit) < Fraction(1, 1000)


def test_delta_estimates():
    e = delta_measure_estimate(boundary_ratios(spec("a"), 12))
    assert e.last == Fraction(1, 2) and e.slack == 0 and e.certificate
    assert delta_measure_estimate(boundary_ratios(SchreierGraph([[0, 1], [1, 0]]), 12)).last == 0
    assert delta_measure_estimate(boundary_ratios(free_group_tree(2), 12)).last == 1
    with pytest.raises(ValidationError):
        delta_measure_estimate(ball_ratios(spec("a"), 4))


def test_classification_examples():
    assert classify_conservativity(SchreierGraph([[0, 1], [1, 0]]), 6).label == CONSERVATIVE
    c = classify_conservativity(spec("a"), 12)
    assert c.label == DISSIPATIVE and c.delta_estimate.last == Fraction(1, 2)
    z = classify_conservativity(LatticeSource(2), 12)
    assert z.label == CONSERVATIVE
    assert z.delta_estimate.last == Fraction(48, 4 * 3 ** 11)


# cogrowth ----------------------------------------------------------------------------------

def brute_counts(src, r_max):
    out = []
    for r in range(r_max + 1):
        total = 0
        for codes in brute_reduced_words(src.rank, r):
            v = src.root
            for c in codes:
                v = src.move(v, c)
            total += v == src.root
        out.append(total)
    return out


def test_cogrowth_examples():
    t = cogrowth_series(free_group_tree(2), 8)
    assert t.counts == (1,) + (0,) * 8 and set(t.cumulative) == {1}
    a = cogrowth_series(spec("a"), 12)
    assert a.counts[1:] == (2,) * 12 and a.cumulative[12] == 25
    assert cogrowth_series(LatticeSource(2), 4).counts[4] == 8
    assert cogrowth_series(SchreierGraph([[0, 1], [1, 0]]), 2).counts[2] == 4


def test_cogrowth_matches_brute_force_on_small_graphs():
    for g in corpus(12, seed=41, max_v=30, ranks=(2,)):
        assert list(cogrowth_series(g, 8).counts) == brute_counts(g, 8)


def test_cogrowth_matches_brute_force_on_infinite_sources():
    for src in (spec("a", "bb"), spec("abAB"), LatticeSource(2, flip_seed=3)):
        assert list(cogrowth_series(src, 7).counts) == brute_counts(src, 7)


def test_cogrowth_rank_three():
    g = random_schreier(3, 10, seed=5)
    assert list(cogrowth_series(g, 5).counts) == brute_counts(g, 5)


def test_cogrowth_of_small_subgroup_is_below_sqrt3():
    est = cogrowth_series(spec("a"), 12).estimate()
    assert est < math.sqrt(3)
    assert classify_conservativity(spec("a"), 12).label != CONSERVATIVE


def test_flipped_torus_cogrowth():
    for seed in range(3):
        est = cogrowth_series(torus_graph(2, 20, flips=seed), 10).estimate(10)
        assert est >= math.sqrt(3) - 0.05


# growth bound -------------------------------------------------------------------------------

def test_growth_bound_example():
    gb = growth_bound(GrowthBoundParams(2, 2, 0.5))
    assert gb.roots[0] == pytest.approx(2.596291, abs=1e-6)
    assert gb.roots[1] == pytest.approx(-0.096291, abs=1e-6)
    assert gb.dominant_decay == pytest.approx(0.865430, abs=1e-6)


def test_growth_bound_small_epsilon():
    gb = growth_bound(GrowthBoundParams(2, 2, 1e-9))
    assert gb.roots[0] == pytest.approx(3, rel=1e-8)
    assert abs(gb.roots[1]) < 1e-8
    assert gb.dominant_decay == pytest.approx(1, rel=1e-8)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("k", [2, 4, 6])
@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_growth_bound_grid(n, k, eps):
    p = GrowthBoundParams(n, k, eps, r=1, m_max=15)
    gb = growth_bound(p)
    q = (2 * n - 1) ** p.ell
    assert gb.roots[0] < q and gb.dominant_decay < 1
    ref = sorted(np.roots([1, -(q - eps), -eps * eps]).real, reverse=True)
    assert gb.roots == pytest.approx(tuple(ref), rel=1e-9)
    assert gb.bounds == pytest.approx(recurrence_bounds(p), rel=1e-9)
    ratios = [b / sphere_size(n, p.r + m * p.ell) for m, b in enumerate(gb.bounds)]
    assert all(y < x for x, y in zip(ratios, ratios[1:]))


def test_growth_bound_params_validation():
    with pytest.raises(ValidationError):
        GrowthBoundParams(2, 1, 0.5)
    with pytest.raises(ValidationError):
        GrowthBoundParams(2, 2, 0)
    with pytest.raises(ValidationError):
        GrowthBoundParams(2, 2, 1.5)


def test_growth_bound_dominates_tori():
    # every torus vertex lies on a commutator square: k = 4, eps = 1
    p = GrowthBoundParams(2, 4, 1.0, r=1, m_max=8)
    gb = growth_bound(p)
    spheres = sphere_sizes(torus_graph(2, 41), 1 + 8 * p.ell)
    for m, b in enumerate(gb.bounds):
        R = 1 + m * p.ell
        assert Fraction(spheres[R], sphere_size(2, R)) <= b / sphere_size(2, R)


# random walks --------------------------------------------------------------------------------

def test_walk_on_single_vertex(single):
    w = srw_return_stats(single, 10, 5, seed=0)
    assert w.frequency == 1 and w.label == RECURRENT


def test_walk_is_deterministic():
    a = srw_return_stats(LatticeSource(2), 2000, 20, seed=3)
    b = srw_return_stats(LatticeSource(2), 2000, 20, seed=3)
    assert a == b


class _Opaque:
    """Hides the source type so the generic stepping loop is used."""

    def __init__(self, src):
        self.src, self.rank, self.root = src, src.rank, src.root

    def move(self, v, c):
        return self.src.move(v, c)


@pytest.mark.parametrize("src", [LatticeSource(2), LatticeSource(2, flip_seed=5),
                                 LatticeSource(3), torus_graph(2, 7, flips=2)])
def test_walk_fast_paths_match_generic(src):
    fast = srw_return_stats(src, 300, 25, seed=11)
    slow = srw_return_stats(_Opaque(src), 300, 25, seed=11)
    assert fast.returns == slow.returns


def test_walk_on_tree_rarely_returns():
    w = srw_return_stats(free_group_tree(2), 200, 100, seed=1)
    # return probability of the 4-regular tree is 1/3
    assert w.label == TRANSIENT and 0.15 < w.frequency < 0.5
