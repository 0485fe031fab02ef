"""
The BLR test against linear and quadratic functions
===================================================

"""

from fractions import Fraction

from lintest import F2Vector, QuadraticFn, blr_instance, run_tree
from lintest.engine import RandomizedTest, acceptance_exact, acceptance_monte_carlo, blr_test

# one instance of the test: query x, y and x + y, accept when the answers add up
e1, e2 = F2Vector.unit(0, 2), F2Vector.unit(1, 2)
tree = blr_instance(e1, e2)

f = QuadraticFn.from_monomials(2, pairs=[(1, 2)])  # f(x) = x1 x2
out = run_tree(tree, f)
print("transcript on x1*x2:", [(x.to_string(), r) for x, r in out.transcript])
print("accepted:", out.accept)

# averaged over every linear and every quadratic function
single = RandomizedTest.single(tree)
print("linear acceptance:   ", acceptance_exact(single, "linear"))
print("quadratic acceptance:", acceptance_exact(single, "quadratic"))

# the randomized test on the single function x1*x2: 10 of the 16 (x, y) pairs accept
est = acceptance_monte_carlo(blr_test(2), f, trials=20_000, seed=1)
print(f"x1*x2: Monte Carlo {est.estimate:.4f} +/- {est.stderr:.4f}, exact {Fraction(10, 16)}")

# averaged over all quadratics; degenerate pairs (x = 0, y = 0, x = y) always accept
full = acceptance_exact(blr_test(2, explicit=True), "quadratic")
print("full test, average over quadratics:", full)
