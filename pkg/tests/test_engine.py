import json
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lintest.analysis import quadratic_rank
from lintest.boolfn import QuadraticFn, TruthTable, all_linear, sample_quadratic
from lintest.engine import (
    ACCEPT,
    REJECT,
    Inner,
    RandomizedTest,
    TestTree,
    acceptance_exact,
    acceptance_monte_carlo,
    acceptance_on_function,
    blr_instance,
    blr_test,
    complete_graph_instance,
    complete_graph_test,
    dumps,
    load_document,
    random_tree,
    run_tree,
    sample_instance,
)
from lintest.gf2 import F2Vector
from lintest.verifiers import canonical_corpus

from oracles import all_linear_direct, all_quadratic_direct

E1, E2 = F2Vector.unit(0, 2), F2Vector.unit(1, 2)
X1X2 = QuadraticFn.from_monomials(2, pairs=[(1, 2)])


def fraction_accepting(tree, tables):
    """Oracle: run the tree on explicit truth tables (tuples)."""
    hits = sum(run_tree(tree, lambda x, t=t: t[x.bits]).accept for t in tables)
    return Fraction(hits, len(tables))


class TestRunTree:
    def test_single_leaf(self):
        out = run_tree(TestTree(ACCEPT, 2), X1X2)
        assert out.accept and out.depth == 0 and out.transcript == ()

    def test_blr_on_linear(self):
        t = blr_instance(E1, E2)
        for f in all_linear(2):
            out = run_tree(t, f)
            assert out.accept and out.depth == 3

    def test_blr_rejects_product(self):
        out = run_tree(blr_instance(E1, E2), X1X2)
        assert not out.accept
        assert [r for _, r in out.transcript] == [0, 0, 1]

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            run_tree(blr_instance(E1, E2), QuadraticFn.from_monomials(3, pairs=[(1, 2)]))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 5), st.integers(0, 2**32 - 1))
    def test_transcript_matches_oracle(self, n, depth, seed):
        t = random_tree(n, depth, seed)
        f = sample_quadratic(n, seed)
        out = run_tree(t, f)
        assert out.depth <= t.depth()
        assert out.depth == len(out.transcript)
        assert all(f(x) == r for x, r in out.transcript)


class TestBLR:
    def test_four_accept_leaves(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            x, y = (F2Vector(int(b), 3) for b in rng.integers(0, 8, size=2))
            t = blr_instance(x, y)
            assert sum(leaf.accept for _, _, leaf in t.leaves()) == 4
            assert t.num_leaves() == 8

    def test_degenerate_labels(self):
        z = F2Vector.zero(2)
        t = blr_instance(z, z)
        assert sum(leaf.accept for _, _, leaf in t.leaves()) == 4
        assert all(run_tree(t, f).accept for f in all_linear(2))

    def test_quadratic_acceptance_enumerated(self):
        t = blr_instance(E1, E2)
        assert fraction_accepting(t, all_quadratic_direct(2)) == Fraction(1, 2)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_completeness_exhaustive(self, n):
        pts = [F2Vector(b, n) for b in range(1 << n)]
        tables = all_linear_direct(n)
        for x, y in product(pts, repeat=2):
            assert fraction_accepting(blr_instance(x, y), tables) == 1


class TestCompleteGraph:
    def test_k2_matches_blr(self):
        for n in (1, 2, 3):
            pts = [F2Vector(b, n) for b in range(1 << n)]
            tables = [TruthTable(vals, n) for vals in product((0, 1), repeat=1 << n)]
            for x, y in product(pts, repeat=2):
                a, b = blr_instance(x, y), complete_graph_instance([x, y])
                for f in tables:
                    assert run_tree(a, f).accept == run_tree(b, f).accept

    def test_k3_query_count(self):
        e = [F2Vector.unit(i, 3) for i in range(3)]
        t = complete_graph_instance(e)
        assert {len(br) for br, _, _ in t.leaves()} == {6}

    def test_k3_quadratic_acceptance(self):
        e = [F2Vector.unit(i, 3) for i in range(3)]
        t = complete_graph_instance(e)
        assert fraction_accepting(t, all_quadratic_direct(3)) == Fraction(1, 8)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_completeness_exhaustive(self, n):
        pts = [F2Vector(b, n) for b in range(1 << n)]
        tables = all_linear_direct(n)
        for xs in product(pts, repeat=3):
            assert fraction_accepting(complete_graph_instance(xs), tables) == 1

    def test_k_too_small(self):
        with pytest.raises(ValueError):
            complete_graph_instance([E1])


class TestSampling:
    def test_blr_reproducible(self):
        assert sample_instance("blr", 2, 42) == sample_instance("blr", 2, 42)

    def test_unknown(self):
        with pytest.raises(ValueError):
            sample_instance("hypergraph", 2, 0)

    def test_kgraph3_independent_fraction(self, capsys):
        # measured and reported only: fraction of k=3 instances at n=3 whose six
        # labels are quadratically independent
        indep = 0
        for seed in range(10_000):
            t = sample_instance("kgraph", 3, seed, k=3)
            _, labels, _ = next(t.leaves())
            indep += quadratic_rank(labels) == 6
        frac = indep / 10_000
        with capsys.disabled():
            print(f"\n  kgraph(3), n=3: quadratically independent label sets {frac:.4f}")
        assert 0 < frac < 1

    def test_kgraph2_matches_blr_on_random_functions(self):
        rng = np.random.default_rng(8)
        for _ in range(1000):
            n = int(rng.integers(1, 5))
            x, y = (F2Vector(int(b), n) for b in rng.integers(0, 1 << n, size=2))
            f = TruthTable(rng.integers(0, 2, 1 << n), n)
            assert run_tree(blr_instance(x, y), f).accept == \
                run_tree(complete_graph_instance([x, y]), f).accept


class TestRandomizedTest:
    def test_weights_must_sum_to_one(self):
        t = TestTree(ACCEPT, 2)
        with pytest.raises(ValueError):
            RandomizedTest.mixture([(Fraction(1, 3), t), (Fraction(1, 3), t)], n=2)

    def test_weights_positive(self):
        t = TestTree(ACCEPT, 2)
        with pytest.raises(ValueError):
            RandomizedTest.mixture([(Fraction(0), t), (Fraction(1), t)], n=2)

    def test_generator_exact_rejected(self):
        with pytest.raises(ValueError):
            acceptance_exact(blr_test(2), "linear")


class TestAcceptanceExact:
    def test_blr_linear(self):
        assert acceptance_exact(RandomizedTest.single(blr_instance(E1, E2)), "linear") == 1

    def test_blr_quadratic(self):
        assert acceptance_exact(RandomizedTest.single(blr_instance(E1, E2)), "quadratic") == \
            Fraction(1, 2)

    @pytest.mark.parametrize("family", ["linear", "quadratic"])
    def test_half_half(self, family):
        test = RandomizedTest.uniform([TestTree(ACCEPT, 2), TestTree(REJECT, 2)], n=2)
        assert acceptance_exact(test, family) == Fraction(1, 2)

    def test_linear_average_over_functions(self):
        for name, test in canonical_corpus():
            per_fn = [acceptance_on_function(test, f) for f in all_linear(test.n)]
            assert acceptance_exact(test, "linear") == sum(per_fn) / len(per_fn), name

    def test_full_blr_on_product(self):
        # oracle: all 16 (x, y) pairs evaluated by hand
        hits = 0
        for x, y in product(range(4), repeat=2):
            f = lambda p: (p & 1) & (p >> 1)  # noqa: E731
            hits += f(x ^ y) == f(x) ^ f(y)
        assert hits == 10
        assert acceptance_on_function(blr_test(2, explicit=True), X1X2) == Fraction(hits, 16)


class TestMonteCarlo:
    def test_blr_on_product(self):
        est = acceptance_monte_carlo(blr_test(2), X1X2, 100_000, seed=1)
        assert est.within(5 / 8, 3)

    def test_kgraph3_n6_quadratic(self):
        rng = np.random.default_rng(17)
        instances = [sample_instance("kgraph", 6, rng, k=3) for _ in range(200)]
        mix = RandomizedTest.uniform(instances, n=6)
        exact = acceptance_exact(mix, "quadratic")
        est = acceptance_monte_carlo(mix, "quadratic", 100_000, seed=18)
        assert est.within(float(exact), 3)

    def test_linear_family_is_exactly_one(self):
        for test in (blr_test(4), RandomizedTest.single(complete_graph_instance(
                [F2Vector.unit(i, 3) for i in range(3)]))):
            est = acceptance_monte_carlo(test, "linear", 2000, seed=3)
            assert est.estimate == 1.0 and est.stderr == 0.0

    def test_reproducible(self):
        a = acceptance_monte_carlo(blr_test(3), "quadratic", 500, seed=9)
        b = acceptance_monte_carlo(blr_test(3), "quadratic", 500, seed=9)
        assert a == b

    def test_converges_on_corpus(self):
        for name, test in canonical_corpus():
            for family in ("linear", "quadratic"):
                exact = float(acceptance_exact(test, family))
                for seed in range(20):
                    est = acceptance_monte_carlo(test, family, 300, seed=seed)
                    assert est.within(exact, 4), (name, family, seed)

    def test_depth_observed(self):
        est = acceptance_monte_carlo(complete_graph_test(3, 4), "linear", 50, seed=0)
        assert est.max_depth_seen == 10

    def test_trials_positive(self):
        with pytest.raises(ValueError):
            acceptance_monte_carlo(blr_test(2), "linear", 0)


class TestFileFormat:
    def test_round_trip_tree(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            t = random_tree(int(rng.integers(1, 6)), int(rng.integers(1, 5)), rng)
            if isinstance(t.root, Inner):
                assert load_document(dumps(t)) == t

    def test_round_trip_test(self):
        test = RandomizedTest.mixture([(Fraction(1, 4), blr_instance(E1, E2)),
                                       (Fraction(3, 4), TestTree(REJECT, 2))], n=2)
        back = load_document(dumps(test))
        assert back.trees == test.trees and back.n == 2

    def test_layout(self):
        doc = json.loads(dumps(blr_instance(E1, E2)))
        assert doc["q"] == "10"
        assert doc["0"]["q"] == "01"
        assert doc["0"]["0"]["q"] == "11"
        assert doc["0"]["0"]["0"] == {"v": "accept"}

    @pytest.mark.parametrize("text", ['{"q": "10", "0": {"v": "accept"}}', '{"v": "maybe"}',
                                      '{"q": "1x", "0": {"v": "accept"}, "1": {"v": "reject"}}',
                                      'not json', '[1, 2]',
                                      '{"n": 2, "trees": [{"w": "1/2", "t": {"v": "accept"}}]}'])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            load_document(text)

    def test_mixed_dimensions_rejected(self):
        text = '{"q": "10", "0": {"v": "accept"}, "1": {"q": "101", "0": {"v": "accept"}, "1": {"v": "reject"}}}'
        with pytest.raises(ValueError):
            load_document(text)
