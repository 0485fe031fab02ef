"""
The soundness floor
===================

The bound 2^-psi(q) - (1 - c) as a function of the average query count.
"""

from lintest import phi, psi, theorem_bound

print(f"{'q':>4} {'phi(q)':>8} {'psi(q)':>8} {'floor, c=1':>12}")
for q in (1, 2, 3, 4, 6, 10, 15, 21):
    print(f"{q:>4} {phi(q):>8.4f} {psi(q):>8.4f} {theorem_bound(1, q):>12.6f}")

# triangular numbers are where phi is an integer: q = k + C(k, 2)
print([phi(k * (k + 1) // 2) for k in range(1, 7)])
