"""
Exact relative Turán numbers on small hosts
===========================================

Compute ex(H, F) exactly for a few hosts and compare the extraction
algorithms against the optimum.
"""

from relturan import (
    Pattern, complete_host, complete_partite_host, exact_relative_turan, first_moment_deletion,
    recursive_extract,
)

C4 = Pattern.complete_partite(2, 2)

# %%
# K_{3,3} and K_{4,4}: the largest C4-free subgraphs have 6 and 9 edges.
for sizes in ([3, 3], [4, 4]):
    H = complete_partite_host(sizes)
    res = exact_relative_turan(H, C4)
    print(f"ex(K_{sizes[0]},{sizes[1]}, C4) = {res.value}  "
          f"({res.copies} copies, {res.nodes} search nodes)")

# %%
# A triangle-free subgraph of K_4 keeps at most 4 of its 6 edges.
print("ex(K_4, C3) =", exact_relative_turan(complete_host(4, 2), Pattern.tight_cycle(3, 2)).value)

# %%
# Extraction on K_8 never beats the exact answer.
H = complete_host(8, 2)
ex = exact_relative_turan(H, C4).value
rec = recursive_extract(H, (2, 2), seed=0, trials=16)
dele = first_moment_deletion(H, C4, seed=0)
print(f"K_8: exact {ex}, recursive best-of-16 {rec.best}, deletion {dele.best}")
