"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see only these lines,
or as part of the full suite (the lines are printed either way).
"""

import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from lintest.analysis import analyze_tree
from lintest.boolfn import all_quadratic, fourier_profile, walsh_spectrum
from lintest.bounds import psi, psi_derivative
from lintest.engine import (
    RandomizedTest,
    acceptance_exact,
    blr_instance,
    complete_graph_instance,
    run_tree,
)
from lintest.gf2 import F2Vector
from lintest.search import is_blr_shaped, search_optimal
from lintest.verifiers import (
    brute_force_acceptance,
    count_low_rank,
    low_rank_report,
    main_lemma_report,
    quadsum_report,
    rank_inequality_report,
    reach_report,
    verify_quadsum,
    verify_rank_inequality,
)

SEED = 2008


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def check(number, title, limit_s):
        start = time.perf_counter()
        ok = False
        try:
            yield
            elapsed = time.perf_counter() - start
            ok = elapsed < limit_s
            note = f"{elapsed:.2f}s (limit {limit_s:g}s)"
        except AssertionError as e:
            elapsed = time.perf_counter() - start
            note = f"{elapsed:.2f}s: {e}"
            raise
        finally:
            with capsys.disabled():
                print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}  {note}")
        assert ok, f"criterion {number} exceeded {limit_s}s ({elapsed:.2f}s)"
    return check


def test_c01_blr_tightness(criterion):
    with criterion(1, "BLR exact acceptance 1 and 1/2 on independent labels, n=2..4", 1):
        count = 0
        for n in (2, 3, 4):
            pts = [F2Vector(b, n) for b in range(1, 1 << n)]
            for x in pts:
                for y in pts:
                    if x == y:
                        continue
                    test = RandomizedTest.single(blr_instance(x, y))
                    assert acceptance_exact(test, "linear") == 1
                    assert acceptance_exact(test, "quadratic") == Fraction(1, 2) == 2 ** -Fraction(psi(3))
                    count += 1
            t = blr_instance(pts[0], pts[1])
            assert brute_force_acceptance(t, "quadratic") == Fraction(1, 2)
        assert count == 6 + 42 + 210


def test_c02_complete_graph_tightness(criterion):
    with criterion(2, "complete graph (e1,e2,e3) quadratic acceptance 1/8", 1):
        e = [F2Vector.unit(i, 3) for i in range(3)]
        t = complete_graph_instance(e)
        assert analyze_tree(t).quad_accept == Fraction(1, 8)
        fs = list(all_quadratic(3))
        assert len(fs) == 64
        hits = sum(run_tree(t, f).accept for f in fs)
        assert Fraction(hits, 64) == Fraction(1, 8) == Fraction(1, 2 ** 3)
        assert psi(6) == pytest.approx(3)


def test_c03_reach_probabilities(criterion):
    with criterion(3, "leaf reach counts match 2^-l, 2^-q on 1000 random trees", 60):
        rep = reach_report(trials=1000, seed=SEED, max_n=4, max_depth=5)
        assert rep.instances_checked == 1000
        assert rep.passed, rep.witnesses[:3]


def test_c04_rank_inequality(criterion):
    with criterion(4, "q <= C(l,2)+l on 10^4 label sets, n <= 16; tight at n=4", 30):
        rep = rank_inequality_report(trials=10_000, seed=SEED, max_n=16)
        assert rep.instances_checked == 10_000
        assert rep.violations == 0
        e = [F2Vector.unit(i, 4) for i in range(4)]
        r = verify_rank_inequality(e + [e[i] + e[j] for i, j in combinations(range(4), 2)])
        assert (r.l, r.q) == (4, 10)


def test_c05_quadsum_identity(criterion):
    with criterion(5, "quadsum identity on 1000 random instances, exhaustive at n <= 4", 60):
        rep = quadsum_report(trials=1000, seed=SEED, max_k=6, max_n=4)
        assert rep.instances_checked == 1000
        assert rep.passed, rep.witnesses[:3]
        res = verify_quadsum([F2Vector.unit(i, 3) for i in range(3)])
        assert set(res.pair_coeffs.values()) == {1} and res.single_coeffs == (1, 1, 1)
        assert res.report.parameters["functions"] == "all"


def test_c06_main_lemma(criterion):
    with criterion(6, "main lemma over canonical, random and mixed tests", 120):
        rep = main_lemma_report(random_trees=1000, mixtures=200, seed=SEED)
        assert rep.violations == 0, rep.witnesses[:3]
        assert rep.instances_checked >= 1000


def test_c07_optimality_search(criterion):
    with criterion(7, "optimal depth-3 trees at n=2,3 accept 1/2 and are BLR-shaped", 300):
        for n in (2, 3):
            r = search_optimal(n, 3)
            assert r.min_quad_accept == Fraction(1, 2)
            assert is_blr_shaped(r.witness)
            assert r.holds and r.trees_examined == (1 << n) ** 7


def test_c08_fourier_structure(criterion):
    with criterion(8, "2^10 quadratics at n=4: support 2^rank, magnitude 2^(-rank/2)", 10):
        count = 0
        for f in all_quadratic(4):
            p = fourier_profile(f)
            nonzero = [abs(c) for c in walsh_spectrum(f).values() if c]
            assert p.support == 2 ** p.rank_B == len(nonzero)
            assert set(nonzero) == {p.magnitude}
            assert p.magnitude ** 2 == Fraction(1, 2 ** p.rank_B)
            count += 1
        assert count == 1024


def test_c09_matrix_counting(criterion):
    with criterion(9, "low-rank counts obey the corrected bound; (3,1) flagged", 60):
        rep = low_rank_report(max_n=4)
        assert rep.passed
        r = count_low_rank(3, 1)
        assert (r.exact, r.paper_bound) == (50, 24) and not r.paper_bound_holds
        assert "n=3,k=1" in rep.details["stated_bound_exceeded"]


def test_c10_psi_analytics(criterion):
    with criterion(10, "psi monotone and convex on [0,100]; derivative matches", 1):
        xs = np.linspace(0, 100, 10_000)
        ys = np.array([psi(x) for x in xs])
        assert np.all(np.diff(ys) >= -1e-9)
        assert np.all(ys[:-2] + ys[2:] - 2 * ys[1:-1] >= -1e-9)
        h = 1e-6
        grid = xs[xs > 1 + 2 * h]
        fd = np.array([(psi(x + h) - psi(x - h)) / (2 * h) for x in grid])
        exact = np.array([psi_derivative(x) for x in grid])
        assert np.max(np.abs(fd - exact)) < 1e-6
