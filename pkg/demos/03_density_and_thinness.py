"""Densities of marked sets and the thinness function tau_r."""

from fractions import Fraction

from schreierlab import (BinaryField, bipartite_thinness, contract, mean_rho, random_schreier,
                         tau_values, torus_graph)
from schreierlab.density import lipschitz_constant, lipschitz_ratio

g = random_schreier(2, 60, seed=3)
for r in range(4):
    values = tau_values(g, r)
    print(f"r={r}: tau ranges over [{float(min(values)):.3f}, {float(max(values)):.3f}],"
          f" mean {sum(values, Fraction(0)) / g.vertex_count}")

# The average density of a set equals the tau-mass of the set, exactly.
A = range(0, 60, 7)
field = BinaryField.from_subset(g, A)
for r in range(4):
    lhs = mean_rho(field, r)
    rhs = sum(tau_values(g, r)[x] for x in A) / g.vertex_count
    print(f"r={r}: mean density {lhs} == tau mass {rhs}: {lhs == rhs}")

print("Lipschitz ratio at r=2:", float(lipschitz_ratio(g, 2)), "<=", lipschitz_constant(2))

# On a vertex-transitive torus every density profile is flat.
T = torus_graph(2, 6)
f = BinaryField.from_subset(T, [0, 1, 2, 9, 20])
print("torus profile:", [str(mean_rho(f, r)) for r in range(5)])
print("degrees of the 2-contraction of the torus:", {contract(T, 2).degree(x) for x in range(36)})

# The complete bipartite graph K(2^N, N) has tau_1 drifting apart on its two sides.
for N in (2, 4, 7, 10):
    t = bipartite_thinness(N)
    print(f"N={N}: tau on X {float(t.tau_on_X):.4f}, on Y {float(t.tau_on_Y):.2f}")
