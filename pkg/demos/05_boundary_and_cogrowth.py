"""Sphere ratios and cogrowth of several subgroups, plus the k-cycle growth bound."""

import math

from schreierlab import (GrowthBoundParams, LatticeSource, SubgroupSpec, boundary_ratios,
                         classify_conservativity, cogrowth_series, growth_bound, torus_graph)


def subgroup(*words):
    return SubgroupSpec.from_dict({"n": 2, "words": list(words)}).source()


for name, src in [("<a>", subgroup("a")), ("<a, b^2>", subgroup("a", "bb")),
                  ("Z^2", LatticeSource(2))]:
    seq = boundary_ratios(src, 12)
    cls = classify_conservativity(src, 12)
    print(f"{name:9s} ratios {[str(v) for v in seq.values[:5]]} ... -> {cls.label}")

print("cogrowth of <a>:", cogrowth_series(subgroup("a"), 12).estimate(), "< sqrt 3 =", math.sqrt(3))
for seed in range(3):
    est = cogrowth_series(torus_graph(2, 20, flips=seed), 10).estimate(10)
    print(f"flipped torus seed {seed}: cogrowth estimate at r=10 is {est:.4f}")

gb = growth_bound(GrowthBoundParams(n=2, k=2, epsilon=0.5, m_max=6))
print("roots:", gb.roots, "decay per step:", gb.dominant_decay)
print("bounds:", [round(b, 2) for b in gb.bounds])
