"""
Incidence geometries as extraction targets
==========================================

Projective planes have no 4-cycle, generalized quadrangles have girth 8,
and lifting either one gives 3-graphs without short tight cycles.
"""

from relturan import (
    Pattern, bipartite_c4_count, bipartite_c6_count, count_copies,
    generalized_quadrangle_incidence, girth, heawood_graph, projective_plane_incidence,
    tight_cycle_free_host,
)
from relturan.extraction import build_target

# %%
for q in (2, 3, 4, 5):
    P = projective_plane_incidence(q)
    print(f"PG(2,{q}): {P.n} vertices, {P.e} edges, girth {girth(P)}, "
          f"C4 count {bipartite_c4_count(P)}")

for q in (2, 3):
    Q = generalized_quadrangle_incidence(q)
    print(f"GQ({q}): {Q.n} vertices, {Q.e} edges, girth {girth(Q)}, "
          f"C6 count {bipartite_c6_count(Q)}")

# %%
# Lifting the Heawood graph to a 3-graph.
H = tight_cycle_free_host(heawood_graph(), 3, 7)
for k in (4, 5, 6):
    print(f"TC_{k}^3 copies in the lifted Heawood graph:",
          count_copies(H, Pattern.tight_cycle(k, 3)))

# %%
# The target used when D = 2 for C4: t = 2 r^2 D = 16 vertices.
J, info = build_target([Pattern.complete_partite(2, 2)], 2)
print(f"target: {J.n} vertices, {J.e} edges, strategy {info.strategy}, verified by {info.verified}")
