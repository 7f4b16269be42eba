"""How often does a simple random walk come home?"""

import math

from schreierlab import LatticeSource, free_group_tree, srw_return_stats

for name, src in [("Z^2", LatticeSource(2)), ("Z^3", LatticeSource(3)),
                  ("F_2 tree", free_group_tree(2))]:
    w = srw_return_stats(src, 20000, 100, seed=7)
    print(f"{name:8s} returned in {w.returns}/{w.trials} walks -> {w.label}")

# Z^2 is recurrent, but slowly: the chance of coming back within n steps is
# roughly 1 - pi / (log n + 2.66), still only about 0.78 at n = 10^5.
for n in (10**3, 10**5, 10**8):
    print(f"n={n:>9d}: predicted return probability {1 - math.pi / (math.log(n) + 2.656):.3f}")
