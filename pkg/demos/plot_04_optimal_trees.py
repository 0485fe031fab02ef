"""
Searching for the best small tree
=================================

For every full depth-d labelled tree with perfect completeness, find the
one that accepts the fewest quadratic functions.
"""

from lintest import frontier, search_optimal
from lintest.engine import dumps
from lintest.search import is_blr_shaped

for row in frontier(2, 4):
    print(f"depth {row.depth}: min quadratic acceptance {row.min_quad_accept}, "
          f"floor {row.bound:.4f}, holds {row.holds}")

r = search_optimal(3, 3)
print(f"\nn=3, depth 3: {r.trees_examined} label assignments, minimum {r.min_quad_accept}")
print("witness is BLR-shaped:", is_blr_shaped(r.witness))
print(dumps(r.witness))
