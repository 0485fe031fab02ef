"""The scalar functions phi and psi and the soundness lower bound.

phi(x) is the positive root of y^2/2 + y/2 = x; at integer points
phi(k + C(k,2)) = k.  psi(x) = x - phi(x) for x >= 1 and 0 below, so
the bound s + 1 - c >= 2^(-q + phi(q)) reads s >= 2^(-psi(q)) - (1 - c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def phi(x: float) -> float:
    if x < 0:
        raise ValueError(f"phi is defined for x >= 0, got {x}")
    return (math.sqrt(1.0 + 8.0 * x) - 1.0) / 2.0


def psi(x: float) -> float:
    if x < 1:
        return 0.0
    return x - phi(x)


def psi_derivative(x: float) -> float:
    """d psi / dx = (y - 1/2) / (y + 1/2) with y = phi(x), for x > 1."""
    if x < 1:
        return 0.0
    y = phi(x)
    return (y - 0.5) / (y + 0.5)


def theorem_bound(c: float, q: float) -> float:
    """Floor on soundness: 2^(-psi(q)) - (1 - c).  May be negative (vacuous)."""
    if not 0 <= c <= 1:
        raise ValueError(f"completeness must lie in [0, 1], got {c}")
    if q < 1:
        raise ValueError(f"the bound needs average query complexity q >= 1, got {q}")
    return 2.0 ** (-psi(q)) - (1.0 - c)


def amortized_query_complexity(q: float, s: float) -> float:
    """q / log2(1/s)."""
    if not 0 < s < 1:
        raise ValueError("amortized query complexity needs 0 < s < 1")
    return q / math.log2(1.0 / s)


@dataclass(frozen=True)
class BoundReport:
    c: float
    q: float
    phi_q: float
    psi_q: float
    s_lower: float

    def lines(self):
        return [f"c = {self.c:g}", f"q = {self.q:g}",
                f"phi(q) = {self.phi_q:.12g}", f"psi(q) = {self.psi_q:.12g}",
                f"s_lower = {self.s_lower:.12g}"]


def bound_report(c: float, q: float) -> BoundReport:
    return BoundReport(c, q, phi(q), psi(q), theorem_bound(c, q))
