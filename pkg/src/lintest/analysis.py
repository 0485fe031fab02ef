"""Leaf-level rank analysis of test trees.

Every root-to-leaf path is walked once in linear mode (labels as
vectors) and once in quadratic mode (labels replaced by their moment
vectors).  A label already in the span of the earlier ones has a forced
response; a leaf belongs to L_T (resp. Q_T) when its path takes the
forced edge at every dependent vertex.  Reach probabilities for a
uniformly random linear (resp. quadratic) function are then
``2**-l(v)`` and ``2**-q(v)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .boolfn import moment_bits, moment_vector, n_moments
from .engine import Leaf, TestTree
from .gf2 import F2Vector, IncrementalBasis, rank, rank_of_ints


@dataclass(frozen=True)
class LeafRecord:
    branch: Tuple[int, ...]
    path_labels: Tuple[F2Vector, ...]
    depth: int
    verdict: int  # 1 accept, 0 reject
    lin_rank: int
    quad_rank: int
    in_L: bool
    in_Q: bool

    @property
    def p_lin(self) -> Fraction:
        return Fraction(1, 1 << self.lin_rank) if self.in_L else Fraction(0)

    @property
    def p_quad(self) -> Fraction:
        return Fraction(1, 1 << self.quad_rank) if self.in_Q else Fraction(0)


@dataclass(frozen=True)
class TreeAnalysis:
    n: int
    leaves: Tuple[LeafRecord, ...]

    @property
    def sum_L(self) -> Fraction:
        return sum((v.p_lin for v in self.leaves), Fraction(0))

    @property
    def sum_Q(self) -> Fraction:
        return sum((v.p_quad for v in self.leaves), Fraction(0))

    @property
    def lin_accept(self) -> Fraction:
        return sum((v.p_lin for v in self.leaves if v.verdict), Fraction(0))

    @property
    def quad_accept(self) -> Fraction:
        return sum((v.p_quad for v in self.leaves if v.verdict), Fraction(0))

    @property
    def avg_depth_lin(self) -> Fraction:
        return sum((v.depth * v.p_lin for v in self.leaves), Fraction(0))

    @property
    def quad_accept_on_L(self) -> Fraction:
        """sum over accepting L_T leaves of 2^-q(v): the floor used in the main lemma."""
        return sum((Fraction(1, 1 << v.quad_rank) for v in self.leaves
                    if v.in_L and v.verdict), Fraction(0))

    def by_branch(self):
        return {v.branch: v for v in self.leaves}


class _PathState:
    """Span of the path labels plus the responses of its independent labels."""

    __slots__ = ("basis", "responses", "consistent")

    def __init__(self, basis, responses=(), consistent=True):
        self.basis = basis
        self.responses = responses
        self.consistent = consistent

    def step(self, vec: F2Vector) -> Tuple["_PathState", "_PathState"]:
        """States for the 0-child and the 1-child after querying ``vec``."""
        basis = self.basis.copy()
        res = basis.insert(vec)
        if res.independent:
            return (_PathState(basis, self.responses + (0,), self.consistent),
                    _PathState(basis, self.responses + (1,), self.consistent))
        forced = _dot(res.coefficients, self.responses)
        return (_PathState(basis, self.responses, self.consistent and forced == 0),
                _PathState(basis, self.responses, self.consistent and forced == 1))


def _dot(coeffs: Sequence[int], responses: Sequence[int]) -> int:
    acc = 0
    for c, r in zip(coeffs, responses):
        acc ^= c & r
    return acc


def analyze_tree(t: TestTree) -> TreeAnalysis:
    n = t.n
    records: List[LeafRecord] = []

    def walk(v, branch, labels, lin: _PathState, quad: _PathState):
        if isinstance(v, Leaf):
            records.append(LeafRecord(
                branch=branch, path_labels=labels, depth=len(labels),
                verdict=int(v.accept), lin_rank=lin.basis.rank,
                quad_rank=quad.basis.rank, in_L=lin.consistent,
                in_Q=quad.consistent))
            return
        lin0, lin1 = lin.step(v.label)
        quad0, quad1 = quad.step(moment_vector(v.label, n))
        labels = labels + (v.label,)
        walk(v.child0, branch + (0,), labels, lin0, quad0)
        walk(v.child1, branch + (1,), labels, lin1, quad1)

    walk(t.root, (), (),
         _PathState(IncrementalBasis(n)),
         _PathState(IncrementalBasis(n_moments(n))))
    return TreeAnalysis(n, tuple(records))


def linear_rank(xs: Sequence[F2Vector]) -> int:
    return rank(xs) if xs else 0


def quadratic_rank(xs: Sequence[F2Vector]) -> int:
    """Rank of the moment vectors of ``xs``."""
    xs = list(xs)
    if not xs:
        return 0
    n = xs[0].length
    for x in xs:
        if x.length != n:
            raise ValueError(f"dimension mismatch: {x.length} vs {n}")
    return rank_of_ints(moment_bits(x.bits, n) for x in xs)


def forced_value(prior: Sequence[Tuple[F2Vector, int]], next_label: F2Vector,
                 mode: str = "linear") -> Optional[int]:
    """Response implied for ``next_label`` by the earlier (label, response) pairs.

    None when the label (or its moment vector in quadratic mode) is
    outside the span of the earlier ones.  Earlier labels that are
    themselves dependent are skipped: their responses are either
    implied or, for an inconsistent history, ignored.
    """
    if mode not in ("linear", "quadratic"):
        raise ValueError(f"unknown mode {mode!r}")
    n = next_label.length
    lift = (lambda x: x) if mode == "linear" else (lambda x: moment_vector(x, n))
    basis = IncrementalBasis()
    responses = []
    for label, r in prior:
        if label.length != n:
            raise ValueError(f"dimension mismatch: {label.length} vs {n}")
        if basis.insert(lift(label)).independent:
            responses.append(r)
    coeffs = basis.represent(lift(next_label))
    if coeffs is None:
        return None
    return _dot(coeffs, responses)


def format_fraction(p: Fraction) -> str:
    """Render a probability as `num/2^k` when the denominator is a power of two."""
    if p == 0:
        return "0"
    den = p.denominator
    if den == 1:
        return str(p.numerator)
    if den & (den - 1) == 0:
        return f"{p.numerator}/2^{den.bit_length() - 1}"
    return f"{p.numerator}/{den}"


def report_rows(a: TreeAnalysis) -> List[str]:
    """Text table: one row per leaf."""
    head = f"{'branch':<12} {'depth':>5} {'verdict':>7} {'l':>3} {'q':>3} {'in_L':>5} {'in_Q':>5} {'p_lin':>10} {'p_quad':>10}"
    rows = [head]
    for v in a.leaves:
        branch = "".join(map(str, v.branch)) or "-"
        rows.append(
            f"{branch:<12} {v.depth:>5} {'accept' if v.verdict else 'reject':>7} "
            f"{v.lin_rank:>3} {v.quad_rank:>3} {str(v.in_L):>5} {str(v.in_Q):>5} "
            f"{format_fraction(v.p_lin):>10} {format_fraction(v.p_quad):>10}")
    rows.append(f"sum_L = {format_fraction(a.sum_L)}  sum_Q = {format_fraction(a.sum_Q)}  "
                f"lin_accept = {format_fraction(a.lin_accept)}  quad_accept = {format_fraction(a.quad_accept)}  "
                f"avg_depth_lin = {a.avg_depth_lin}")
    return rows


def analysis_to_dict(a: TreeAnalysis) -> dict:
    return {
        "n": a.n,
        "leaves": [{
            "branch": "".join(map(str, v.branch)),
            "labels": [x.to_string() for x in v.path_labels],
            "depth": v.depth, "verdict": "accept" if v.verdict else "reject",
            "l": v.lin_rank, "q": v.quad_rank, "in_L": v.in_L, "in_Q": v.in_Q,
            "p_lin": str(v.p_lin), "p_quad": str(v.p_quad),
        } for v in a.leaves],
        "sum_L": str(a.sum_L), "sum_Q": str(a.sum_Q),
        "lin_accept": str(a.lin_accept), "quad_accept": str(a.quad_accept),
        "avg_depth_lin": str(a.avg_depth_lin),
    }
