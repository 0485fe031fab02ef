"""Exhaustive search for the perfect-completeness tree that best rejects quadratics.

For a fixed labelling of a full binary tree, perfect completeness forces
*accept* on every leaf of L_T while every other leaf may reject, so the
smallest achievable quadratic acceptance is ``sum_{v in L_T} 2^-q(v)``.
Only label assignments are searched.

Along an L_T-consistent path that value depends only on the set of
labels queried so far: an independent query splits into two children
with the same continuation problem, and a dependent query has a single
live child (the other is unreachable by linear functions and contributes
nothing).  The enumerator uses this to list the objective of every
label assignment with numpy outer sums; a memoized recursion computes
the same minimum directly, which is what makes depth 4 tractable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, List, Optional

import numpy as np

from . import bounds
from .analysis import analyze_tree, forced_value
from .boolfn import moment_bits
from .engine import ACCEPT, REJECT, Inner, TestTree
from .gf2 import F2Vector, rank_of_ints

MAX_N = 3
MAX_DEPTH = 4
ENUMERATION_LIMIT = 1 << 22
SLACK = 1e-12


@dataclass(frozen=True)
class SearchResult:
    n: int
    depth: int
    trees_examined: int
    min_quad_accept: Fraction
    witness: TestTree
    bound: float
    holds: bool
    method: str
    symmetry: bool


def _in_span(x: int, labels: frozenset) -> bool:
    return rank_of_ints(list(labels) + [x]) == rank_of_ints(labels)


def _candidates(n: int, labels: frozenset, symmetry: bool):
    if symmetry and not labels:
        # GL(n) acts transitively on nonzero first queries; a zero first
        # query only wastes a level, which never helps.
        return (1,)
    return range(1 << n)


def count_label_assignments(n: int, depth: int, symmetry: bool = False) -> int:
    inner = (1 << depth) - 1
    if symmetry and depth > 0:
        return (1 << n) ** (inner - 1)
    return (1 << n) ** inner


def _make_search(n: int, depth: int):
    scale_exp = depth

    @lru_cache(maxsize=None)
    def leaf_value(labels: frozenset) -> int:
        q = rank_of_ints(moment_bits(x, n) for x in labels)
        return 1 << (scale_exp - q)

    @lru_cache(maxsize=None)
    def all_values(labels: frozenset, d: int, symmetry: bool) -> np.ndarray:
        if d == 0:
            return np.array([leaf_value(labels)], dtype=np.int64)
        blocks = []
        for x in _candidates(n, labels, symmetry):
            sub = all_values(labels | {x}, d - 1, False)
            if _in_span(x, labels):
                blocks.append(np.repeat(sub, sub.size))
            else:
                blocks.append((sub[:, None] + sub[None, :]).ravel())
        return np.concatenate(blocks)

    @lru_cache(maxsize=None)
    def best(labels: frozenset, d: int, symmetry: bool):
        """(scaled minimum, argmin label) over subtrees of depth d."""
        if d == 0:
            return leaf_value(labels), None
        choice = None
        for x in _candidates(n, labels, symmetry):
            sub, _ = best(labels | {x}, d - 1, False)
            val = sub if _in_span(x, labels) else 2 * sub
            if choice is None or val < choice[0]:
                choice = (val, x)
        return choice

    return leaf_value, all_values, best


def _filler(x: F2Vector, d: int):
    if d == 0:
        return REJECT
    sub = _filler(x, d - 1)
    return Inner(x, sub, sub)


def _witness(n: int, depth: int, best, symmetry: bool) -> TestTree:
    def build(labels: frozenset, d: int, prior, sym):
        if d == 0:
            return ACCEPT
        _, x = best(labels, d, sym)
        vec = F2Vector(x, n)
        forced = forced_value(prior, vec, "linear")
        if forced is None:
            child0 = build(labels | {x}, d - 1, prior + [(vec, 0)], False)
            child1 = build(labels | {x}, d - 1, prior + [(vec, 1)], False)
            return Inner(vec, child0, child1)
        live = build(labels | {x}, d - 1, prior, False)
        dead = _filler(vec, d - 1)
        return Inner(vec, live, dead) if forced == 0 else Inner(vec, dead, live)

    tree = TestTree(build(frozenset(), depth, [], symmetry), n)
    # pin verdicts exactly as the reduction prescribes
    in_L = {v.branch for v in analyze_tree(tree).leaves if v.in_L}
    return tree.with_verdicts(lambda br: br in in_L)


def search_optimal(n: int, depth: int, symmetry: bool = False, method: str = "auto",
                   max_n: int = MAX_N, max_depth: int = MAX_DEPTH) -> SearchResult:
    """Minimum quadratic acceptance over all perfect-completeness trees of full depth."""
    if not 1 <= n <= max_n or not 1 <= depth <= max_depth:
        raise ValueError(f"search limited to 1 <= n <= {max_n}, 1 <= depth <= {max_depth}")
    if method not in ("auto", "enumerate", "decompose"):
        raise ValueError(f"unknown method {method!r}")
    total = count_label_assignments(n, depth, symmetry)
    if method == "auto":
        method = "enumerate" if total <= ENUMERATION_LIMIT else "decompose"
    _, all_values, best = _make_search(n, depth)
    scaled, _ = best(frozenset(), depth, symmetry)
    if method == "enumerate":
        values = all_values(frozenset(), depth, symmetry)
        if values.size != total:
            raise AssertionError(f"enumerated {values.size} trees, expected {total}")
        enumerated_min = int(values.min())
        if enumerated_min != scaled:
            raise AssertionError("enumeration and decomposition disagree")
    min_accept = Fraction(scaled, 1 << depth)
    witness = _witness(n, depth, best, symmetry)
    bound = 2.0 ** (-bounds.psi(depth))
    return SearchResult(n, depth, total, min_accept, witness, bound,
                        float(min_accept) >= bound - SLACK, method, symmetry)


@dataclass(frozen=True)
class FrontierRow:
    depth: int
    min_quad_accept: Fraction
    bound: float

    @property
    def holds(self) -> bool:
        return float(self.min_quad_accept) >= self.bound - SLACK


def frontier(n: int, max_depth: int, symmetry: bool = False) -> List[FrontierRow]:
    rows = []
    for d in range(1, max_depth + 1):
        r = search_optimal(n, d, symmetry=symmetry)
        rows.append(FrontierRow(d, r.min_quad_accept, r.bound))
    return rows


# --- brute-force helpers used to validate the reduction --------------------

def full_tree(labels: List[F2Vector], n: int) -> TestTree:
    """Full tree from heap-ordered labels (node i has children 2i+1, 2i+2)."""
    count = len(labels)

    def build(i):
        if i >= count:
            return REJECT
        return Inner(labels[i], build(2 * i + 1), build(2 * i + 2))

    return TestTree(build(0), n)


def iter_full_trees(n: int, depth: int) -> Iterator[TestTree]:
    pts = [F2Vector(b, n) for b in range(1 << n)]
    for labels in product(pts, repeat=(1 << depth) - 1):
        yield full_tree(list(labels), n)


def reduced_objective(t: TestTree) -> Fraction:
    """sum over L_T leaves of 2^-q(v)."""
    return sum((Fraction(1, 1 << v.quad_rank) for v in analyze_tree(t).leaves if v.in_L),
               Fraction(0))


def brute_force_min_acceptance(t: TestTree) -> Optional[Fraction]:
    """Minimum quadratic acceptance over every verdict assignment with perfect completeness.

    Completeness and acceptance are both measured by running the tree on
    every linear and every quadratic function.
    """
    from .verifiers import family_tables, leaf_outcomes

    lin = leaf_outcomes(t, family_tables(t.n, "linear"))
    quad = leaf_outcomes(t, family_tables(t.n, "quadratic"))
    branches = [br for br, _, _ in t.leaves()]
    reached_lin = [len(lin[br]) > 0 for br in branches]
    quad_counts = [len(quad[br]) for br in branches]
    total = sum(quad_counts)
    best = None
    for verdicts in product((0, 1), repeat=len(branches)):
        if any(r and not v for r, v in zip(reached_lin, verdicts)):
            continue
        acc = Fraction(sum(c for c, v in zip(quad_counts, verdicts) if v), total)
        if best is None or acc < best:
            best = acc
    return best


def is_blr_shaped(t: TestTree) -> bool:
    """Every L_T path queries x, y, x + y with x, y linearly independent."""
    for v in analyze_tree(t).leaves:
        if not v.in_L:
            continue
        if len(v.path_labels) != 3:
            return False
        x, y, z = v.path_labels
        if not x or not y or x == y or z != x + y:
            return False
    return True


def tree_leaves_depths(t: TestTree) -> List[int]:
    return [len(br) for br, _, _ in t.leaves()]


__all__ = ["SearchResult", "FrontierRow", "search_optimal", "frontier",
           "count_label_assignments", "brute_force_min_acceptance", "reduced_objective",
           "iter_full_trees", "full_tree", "is_blr_shaped"]
