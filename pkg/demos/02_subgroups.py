"""From generating words to Schreier graphs by folding and by coset enumeration."""

from schreierlab import (ResourceLimitError, ball_source_from_core, coset_enumerate,
                         random_schreier, sphere_sizes, stallings_core, torus_graph, validate, word)

gens = [word("a", 2), word("bb", 2)]
core = stallings_core(2, gens)
print("core of <a, b^2>:", core.vertex_count, "vertices, open slots", core.missing_slots())

# Hanging a free tree on every open slot gives the full (infinite) Schreier graph.
src = ball_source_from_core(core)
print("its sphere sizes:", sphere_sizes(src, 6))

# Coset enumeration only closes up for finite index; otherwise it runs out of budget.
index2 = coset_enumerate(2, [word("a", 2), word("bb", 2), word("baB", 2)], max_cosets=10)
print("index of <a, b^2, b a b^-1>:", index2.vertex_count)
try:
    coset_enumerate(2, gens, max_cosets=100)
except ResourceLimitError as exc:
    print("<a, b^2>:", exc)

# Built-in families: tori with random a-chain orientations, and random permutations.
F = torus_graph(2, 8, flips=7)
print("flipped torus valid:", validate(F) == [], "reversed rows:", sum(F.flips))
g = random_schreier(3, 40, seed=1)
print("random rank-3 graph on 40 points, spheres:", sphere_sizes(g, 5))
