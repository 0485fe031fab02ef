"""
Leaf ranks and reach probabilities
==================================

Each leaf of a test tree carries two ranks: l, the rank of the labels on
its path, and q, the rank of their moment vectors.  A random linear
function reaches a consistent leaf with probability 2^-l and a random
quadratic with probability 2^-q.
"""

from lintest import analyze_tree, complete_graph_instance, F2Vector
from lintest.analysis import report_rows
from lintest.engine import random_tree
from lintest.verifiers import check_reach

e = [F2Vector.unit(i, 3) for i in range(3)]
a = analyze_tree(complete_graph_instance(e))
for row in report_rows(a)[:5]:
    print(row)
print("...")
print(report_rows(a)[-1])

# the same numbers come out of running the tree on every function
t = random_tree(3, 4, seed=5)
print("\nrandom tree, exhaustive reach check problems:", check_reach(t))
