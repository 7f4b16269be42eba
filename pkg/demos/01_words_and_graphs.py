"""Reduced words acting on a Schreier graph, and what its neighborhoods look like."""

from schreierlab import (SchreierGraph, act, ball, canonical_key, concat, fundamental_group_generators,
                         geodesic_spanning_tree, shortlex_enumerate, sphere_sizes, torus_graph, word)
from schreierlab.words import cylinder_measure

# Words in F_2 are typed with a, b for the generators and A, B for their inverses.
u = word("aba", 2)
v = word("Ab", 2)
print("aba * Ab =", concat(u, v))           # the a and A cancel
print("ball of radius 2 in F_2:", [str(w) for w in shortlex_enumerate(2, 2)])
print("mass of the cylinder over 'ab':", cylinder_measure(2, word("ab", 2)))

# The index-2 subgroup <a, b^2, b a b^-1>: a fixes both cosets, b swaps them.
g = SchreierGraph([[0, 1], [1, 0]])
print("root . bab =", act(g, 0, word("bab", 2)))
print("sphere sizes:", sphere_sizes(g, 3))

# A geodesic spanning tree and the free basis of the subgroup it yields.
tree = geodesic_spanning_tree(g)
print("tree edges:", tree.tree_edges())
print("generators of pi_1:", [str(w) for w in fundamental_group_generators(g, tree)])

# Canonical keys do not see vertex names: every vertex of a torus looks the same.
T = torus_graph(2, 5)
keys = {canonical_key(ball(T, 2, center=x)) for x in range(T.vertex_count)}
print("distinct radius-2 neighborhoods on the 5x5 torus:", len(keys))
print("one of them:", next(iter(keys)).text)
