"""Test trees, linearity-test constructors, and running tests against oracles.

A test tree queries the function at the label of each inner node and
follows the child indexed by the response bit.  A randomized test is a
distribution over trees: either an explicit weighted list or a seeded
generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, lcm, sqrt
from typing import Callable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from .boolfn import (
    _rng,
    random_bits,
    sample_linear,
    sample_point,
    sample_quadratic,
)
from .gf2 import F2Vector


@dataclass(frozen=True)
class Leaf:
    accept: bool

    @property
    def verdict(self) -> str:
        return "accept" if self.accept else "reject"


ACCEPT = Leaf(True)
REJECT = Leaf(False)


@dataclass(frozen=True)
class Inner:
    label: F2Vector
    child0: "Node"
    child1: "Node"

    def child(self, response: int) -> "Node":
        return self.child1 if response else self.child0


Node = Union[Leaf, Inner]


def _labels(node: Node) -> Iterator[F2Vector]:
    stack = [node]
    while stack:
        v = stack.pop()
        if isinstance(v, Inner):
            yield v.label
            stack.append(v.child1)
            stack.append(v.child0)


def node_depth(node: Node) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(node_depth(node.child0), node_depth(node.child1))


@dataclass(frozen=True)
class TestTree:
    """Rooted binary query tree on functions {0,1}^n -> {0,1}."""

    __test__ = False  # not a pytest class

    root: Node
    n: int

    def __post_init__(self):
        for lab in _labels(self.root):
            if lab.length != self.n:
                raise ValueError(
                    f"label of dimension {lab.length} in a tree on n={self.n}"
                )

    @classmethod
    def of(cls, root: Node, n: Optional[int] = None) -> "TestTree":
        if n is None:
            first = next(_labels(root), None)
            n = first.length if first is not None else 0
        return cls(root, n)

    def depth(self) -> int:
        return node_depth(self.root)

    def leaves(self) -> Iterator[Tuple[Tuple[int, ...], Tuple[F2Vector, ...], Leaf]]:
        """Yield (branch bits, path labels, leaf) in depth-first order, 0-branch first."""
        stack = [(self.root, (), ())]
        while stack:
            v, branch, labels = stack.pop()
            if isinstance(v, Leaf):
                yield branch, labels, v
            else:
                stack.append((v.child1, branch + (1,), labels + (v.label,)))
                stack.append((v.child0, branch + (0,), labels + (v.label,)))

    def num_leaves(self) -> int:
        return sum(1 for _ in self.leaves())

    def with_verdicts(self, verdict: Callable[[Tuple[int, ...]], bool]) -> "TestTree":
        """Copy of the tree with each leaf's verdict set by ``verdict(branch)``."""

        def rebuild(v, branch):
            if isinstance(v, Leaf):
                return ACCEPT if verdict(branch) else REJECT
            return Inner(v.label, rebuild(v.child0, branch + (0,)),
                         rebuild(v.child1, branch + (1,)))

        return TestTree(rebuild(self.root, ()), self.n)


@dataclass(frozen=True)
class RunOutcome:
    accept: bool
    depth: int
    transcript: Tuple[Tuple[F2Vector, int], ...]

    @property
    def verdict(self) -> str:
        return "accept" if self.accept else "reject"


def _oracle_dim(f) -> Optional[int]:
    return getattr(f, "n", None)


def run_tree(t: TestTree, f) -> RunOutcome:
    """Run the tree on the oracle ``f`` (any callable taking an F2Vector)."""
    dim = _oracle_dim(f)
    if dim is not None and isinstance(t.root, Inner) and dim != t.n:
        raise ValueError(f"oracle on n={dim} run on a tree with n={t.n}")
    v = t.root
    transcript = []
    while isinstance(v, Inner):
        r = int(f(v.label))
        transcript.append((v.label, r))
        v = v.child(r)
    return RunOutcome(v.accept, len(transcript), tuple(transcript))


def chain_tree(labels: Sequence[F2Vector],
               predicate: Callable[[Tuple[int, ...]], bool],
               n: Optional[int] = None) -> TestTree:
    """Non-adaptive tree: query ``labels`` in order, accept iff ``predicate(responses)``."""
    labels = list(labels)

    def build(i, responses):
        if i == len(labels):
            return ACCEPT if predicate(responses) else REJECT
        return Inner(labels[i], build(i + 1, responses + (0,)),
                     build(i + 1, responses + (1,)))

    if n is None:
        if not labels:
            raise ValueError("n required for a tree without queries")
        n = labels[0].length
    return TestTree(build(0, ()), n)


def blr_instance(x: F2Vector, y: F2Vector) -> TestTree:
    """Query x, y, x+y; accept iff f(x+y) = f(x) + f(y)."""
    return chain_tree([x, y, x + y], lambda r: r[2] == r[0] ^ r[1])


def complete_graph_instance(xs: Sequence[F2Vector]) -> TestTree:
    """Query x_1..x_k, then x_i + x_j (i < j); accept iff every triangle check holds."""
    xs = list(xs)
    k = len(xs)
    if k < 2:
        raise ValueError("the complete graph test needs k >= 2 points")
    pairs = list(combinations(range(k), 2))
    labels = xs + [xs[i] + xs[j] for i, j in pairs]

    def ok(r):
        return all(r[k + m] == r[i] ^ r[j] for m, (i, j) in enumerate(pairs))

    return chain_tree(labels, ok)


def complete_graph_queries(k: int) -> int:
    return k + comb(k, 2)


@dataclass(frozen=True)
class RandomizedTest:
    """Distribution over test trees.

    Explicit form: ``trees`` holds (weight, tree) pairs with positive
    weights summing to 1.  Generator form: ``generator(rng)`` draws a tree.
    """

    n: int
    trees: Optional[Tuple[Tuple[Fraction, TestTree], ...]] = None
    generator: Optional[Callable[[np.random.Generator], TestTree]] = field(
        default=None, compare=False)
    name: str = ""

    def __post_init__(self):
        if (self.trees is None) == (self.generator is None):
            raise ValueError("give exactly one of explicit trees or a generator")
        if self.trees is not None:
            if not self.trees:
                raise ValueError("explicit test needs at least one tree")
            total = Fraction(0)
            for w, t in self.trees:
                if not isinstance(w, Fraction) or w <= 0:
                    raise ValueError(f"weight {w!r} must be a positive Fraction")
                if isinstance(t.root, Inner) and t.n != self.n:
                    raise ValueError(f"tree on n={t.n} in a test on n={self.n}")
                total += w
            if total != 1:
                raise ValueError(f"weights sum to {total}, not 1")

    @property
    def explicit(self) -> bool:
        return self.trees is not None

    @classmethod
    def single(cls, tree: TestTree, name: str = "") -> "RandomizedTest":
        return cls(tree.n, ((Fraction(1), tree),), name=name)

    @classmethod
    def mixture(cls, weighted: Sequence[Tuple[Fraction, TestTree]], n: Optional[int] = None,
                name: str = "") -> "RandomizedTest":
        weighted = tuple((Fraction(w), t) for w, t in weighted)
        if n is None:
            n = max(t.n for _, t in weighted)
        return cls(n, weighted, name=name)

    @classmethod
    def uniform(cls, trees: Sequence[TestTree], n: Optional[int] = None,
                name: str = "") -> "RandomizedTest":
        w = Fraction(1, len(trees))
        return cls.mixture([(w, t) for t in trees], n=n, name=name)

    @classmethod
    def from_generator(cls, n: int, generator, name: str = "") -> "RandomizedTest":
        return cls(n, generator=generator, name=name)

    def draw(self, rng: np.random.Generator) -> TestTree:
        if self.generator is not None:
            return self.generator(rng)
        return self.trees[self._pick(rng)][1]

    def _pick(self, rng) -> int:
        # exact weight choice: a uniform integer against the common denominator
        den = lcm(*(w.denominator for w, _ in self.trees))
        u = random_bits(rng, den.bit_length() + 8) % den
        acc = 0
        for i, (w, _) in enumerate(self.trees):
            acc += w.numerator * (den // w.denominator)
            if u < acc:
                return i
        return len(self.trees) - 1

    def max_depth(self) -> int:
        if self.trees is None:
            raise ValueError("depth of a generator-form test is only known empirically")
        return max(t.depth() for _, t in self.trees)


def blr_test(n: int, explicit: bool = False) -> RandomizedTest:
    """The BLR test; explicit form enumerates all 4^n label pairs."""
    if explicit:
        pts = [F2Vector(b, n) for b in range(1 << n)]
        trees = [blr_instance(x, y) for x, y in product(pts, repeat=2)]
        return RandomizedTest.uniform(trees, n=n, name="blr")
    return RandomizedTest.from_generator(
        n, lambda rng: sample_instance("blr", n, rng), name="blr")


def complete_graph_test(n: int, k: int, explicit: bool = False) -> RandomizedTest:
    if explicit:
        pts = [F2Vector(b, n) for b in range(1 << n)]
        trees = [complete_graph_instance(xs) for xs in product(pts, repeat=k)]
        return RandomizedTest.uniform(trees, n=n, name=f"kgraph{k}")
    return RandomizedTest.from_generator(
        n, lambda rng: sample_instance("kgraph", n, rng, k=k), name=f"kgraph{k}")


def sample_instance(test: str, n: int, seed=None, k: int = 2) -> TestTree:
    """One instance of ``blr`` or ``kgraph`` with uniform, independent labels.

    Degenerate labels (zero vectors, collisions) are kept.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _rng(seed)
    if test == "blr":
        return blr_instance(sample_point(n, rng), sample_point(n, rng))
    if test == "kgraph":
        return complete_graph_instance([sample_point(n, rng) for _ in range(k)])
    raise ValueError(f"unknown test {test!r}; expected 'blr' or 'kgraph'")


def random_tree(n: int, max_depth: int, seed=None, leaf_prob: float = 0.2,
                accept_prob: float = 0.5) -> TestTree:
    """Random ragged tree with uniform labels and random verdicts."""
    rng = _rng(seed)

    def build(d):
        if d == max_depth or (d > 0 and rng.random() < leaf_prob):
            return ACCEPT if rng.random() < accept_prob else REJECT
        return Inner(sample_point(n, rng), build(d + 1), build(d + 1))

    return TestTree(build(0), n)


def acceptance_exact(test: RandomizedTest, family: str) -> Fraction:
    """Exact probability of accepting a uniformly random ``linear`` or ``quadratic`` function."""
    from .analysis import analyze_tree

    if not test.explicit:
        raise ValueError("exact acceptance needs an explicit test; use Monte Carlo")
    if family not in ("linear", "quadratic"):
        raise ValueError(f"unknown family {family!r}")
    total = Fraction(0)
    for w, t in test.trees:
        a = analyze_tree(t)
        total += w * (a.lin_accept if family == "linear" else a.quad_accept)
    return total


def acceptance_on_function(test: RandomizedTest, f) -> Fraction:
    """Exact acceptance probability of an explicit test on one fixed function."""
    if not test.explicit:
        raise ValueError("exact acceptance needs an explicit test; use Monte Carlo")
    return sum((w for w, t in test.trees if run_tree(t, f).accept), Fraction(0))


@dataclass(frozen=True)
class MonteCarloEstimate:
    accepts: int
    trials: int
    max_depth_seen: int = 0  # deepest tree drawn; an empirical bound only

    @property
    def estimate(self) -> float:
        return self.accepts / self.trials

    @property
    def stderr(self) -> float:
        p = self.estimate
        return sqrt(p * (1 - p) / self.trials)

    def within(self, value: float, sigmas: float) -> bool:
        return abs(self.estimate - float(value)) <= sigmas * self.stderr


def acceptance_monte_carlo(test: RandomizedTest, family, trials: int,
                           seed=None) -> MonteCarloEstimate:
    """Estimate acceptance on ``linear``/``quadratic`` random functions or a fixed function.

    Each trial draws a fresh tree and, for a family, a fresh function.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = _rng(seed)
    n = test.n
    if family == "linear":
        draw_fn = lambda: sample_linear(n, rng)  # noqa: E731
    elif family == "quadratic":
        draw_fn = lambda: sample_quadratic(n, rng)  # noqa: E731
    elif callable(family):
        fixed = family
        draw_fn = lambda: fixed  # noqa: E731
    else:
        raise ValueError(f"unknown family {family!r}")
    accepts = 0
    deepest = 0
    for _ in range(trials):
        t = test.draw(rng)
        deepest = max(deepest, t.depth())
        if run_tree(t, draw_fn()).accept:
            accepts += 1
    return MonteCarloEstimate(accepts, trials, deepest)


# --- file format -----------------------------------------------------------

def node_to_obj(v: Node) -> dict:
    if isinstance(v, Leaf):
        return {"v": v.verdict}
    return {"q": v.label.to_string(), "0": node_to_obj(v.child0), "1": node_to_obj(v.child1)}


def node_from_obj(obj) -> Node:
    if not isinstance(obj, dict):
        raise ValueError(f"tree node must be an object, got {type(obj).__name__}")
    if "v" in obj:
        if obj["v"] == "accept":
            return ACCEPT
        if obj["v"] == "reject":
            return REJECT
        raise ValueError(f"unknown verdict {obj['v']!r}")
    try:
        label = F2Vector.from_string(obj["q"])
        return Inner(label, node_from_obj(obj["0"]), node_from_obj(obj["1"]))
    except KeyError as e:
        raise ValueError(f"inner node missing key {e.args[0]!r}") from None


def tree_to_obj(t: TestTree) -> dict:
    return node_to_obj(t.root)


def test_to_obj(test: RandomizedTest) -> dict:
    if not test.explicit:
        raise ValueError("only explicit tests can be written to a file")
    return {"n": test.n,
            "trees": [{"w": f"{w.numerator}/{w.denominator}", "t": tree_to_obj(t)}
                      for w, t in test.trees]}


def load_document(text: str, n: Optional[int] = None) -> Union[TestTree, RandomizedTest]:
    """Parse a tree document or a randomized-test document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"malformed tree file: {e}") from None
    if isinstance(obj, dict) and "trees" in obj:
        try:
            dim = int(obj["n"])
            weighted = [(Fraction(item["w"]), TestTree.of(node_from_obj(item["t"]), dim))
                        for item in obj["trees"]]
        except (KeyError, TypeError, ZeroDivisionError) as e:
            raise ValueError(f"malformed randomized test: {e!r}") from None
        return RandomizedTest.mixture(weighted, n=dim)
    return TestTree.of(node_from_obj(obj), n)


def dumps(obj: Union[TestTree, RandomizedTest]) -> str:
    doc = tree_to_obj(obj) if isinstance(obj, TestTree) else test_to_obj(obj)
    return json.dumps(doc, sort_keys=True)


def load_tree_file(path: str) -> Union[TestTree, RandomizedTest]:
    with open(path) as fh:
        return load_document(fh.read())


__all__ = [
    "ACCEPT", "REJECT", "Leaf", "Inner", "Node", "TestTree", "RunOutcome", "RandomizedTest",
    "MonteCarloEstimate", "run_tree", "chain_tree", "blr_instance", "complete_graph_instance",
    "blr_test", "complete_graph_test", "sample_instance", "random_tree", "acceptance_exact",
    "acceptance_on_function", "acceptance_monte_carlo", "load_document", "dumps",
    "load_tree_file", "complete_graph_queries",
]
