"""Neighborhood censuses and the repair of damaged graphs."""

from schreierlab import (LatticeSource, check_approximation, damage, dirac_statistics,
                         local_statistics, stitch, torus_graph, tv_distance, validate)

lattice = dirac_statistics(LatticeSource(2), 2)
T = torus_graph(2, 20)
print("torus vs lattice at radius 2:", check_approximation(T, lattice, 0.01).passed)
print("TV distance between 20x20 and 40x40 tori at r=3:",
      tv_distance(local_statistics(T, 3), local_statistics(torus_graph(2, 40), 3)))

# Knock out 1% of the edges, then stitch the result back into a Schreier graph.
broken = damage(T, 0.01, seed=1)
fixed, report = stitch(broken)
print("stitched graph valid:", validate(fixed) == [])
print("report:", {k: v for k, v in report.to_json().items() if k != "kept"})

check = check_approximation(fixed, lattice, 0.01)
print("still a 1%-approximation of the lattice?", check.passed,
      "worst discrepancy", check.worst_discrepancy)
