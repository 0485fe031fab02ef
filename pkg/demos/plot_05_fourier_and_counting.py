"""
Quadratics are far from linear
==============================

A quadratic whose form A + A^t has rank r has 2^r nonzero Fourier
coefficients, all of magnitude 2^(-r/2).  Random quadratics have large
rank, because low-rank matrices are rare.
"""

from lintest import QuadraticFn, fourier_profile
from lintest.verifiers import farness_report, low_rank_report

f = QuadraticFn.from_monomials(4, pairs=[(1, 2), (3, 4)])
print(fourier_profile(f))

for line in farness_report(10, samples=5000, seed=3).lines():
    print(line)

for line in low_rank_report(4).lines():
    print(line)
