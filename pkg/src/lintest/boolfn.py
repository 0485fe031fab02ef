"""Linear and quadratic functions over {0,1}^n, truth tables and spectra.

Monomials are indexed canonically: ``x_1 .. x_n`` first, then the
products ``x_i x_j`` (i < j) in lexicographic order.  Truth tables are
indexed by the integer encoding of ``x`` with ``x_1`` least significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Tuple, Union

import numpy as np

from .gf2 import F2Matrix, F2Vector, rank


def n_pairs(n: int) -> int:
    return comb(n, 2)


def n_moments(n: int) -> int:
    return n + comb(n, 2)


@lru_cache(maxsize=None)
def pair_list(n: int) -> Tuple[Tuple[int, int], ...]:
    """0-based pairs (i, j), i < j, in lexicographic order."""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def moment_bits(x: int, n: int) -> int:
    """Bitset form of the moment vector of the point with bits ``x``."""
    out = x
    pos = n
    for i in range(n):
        if (x >> i) & 1:
            for j in range(i + 1, n):
                if (x >> j) & 1:
                    out |= 1 << (pos + j - i - 1)
        pos += n - i - 1
    return out


def moment_vector(x: F2Vector, n: int = None) -> F2Vector:
    """Coordinates ``x_i`` followed by the products ``x_i x_j`` (i < j)."""
    if n is None:
        n = x.length
    if x.length != n:
        raise ValueError(f"point of dimension {x.length}, expected {n}")
    return F2Vector(moment_bits(x.bits, n), n_moments(n))


def _parity(v: int) -> int:
    return v.bit_count() & 1


def _point_bits(x, n: int) -> int:
    if isinstance(x, F2Vector):
        if x.length != n:
            raise ValueError(f"point of dimension {x.length}, function has n={n}")
        return x.bits
    x = int(x)
    if x < 0 or x >> n:
        raise ValueError(f"index {x} out of range for n={n}")
    return x


@dataclass(frozen=True)
class LinearFn:
    """f(x) = a_1 x_1 + ... + a_n x_n."""

    a: F2Vector

    @property
    def n(self) -> int:
        return self.a.length

    def __call__(self, x) -> int:
        return _parity(self.a.bits & _point_bits(x, self.n))

    def truth_table(self) -> "TruthTable":
        idx = np.arange(1 << self.n, dtype=np.int64)
        vals = np.bitwise_count(idx & self.a.bits) & 1
        return TruthTable(vals.astype(np.uint8), self.n)


@dataclass(frozen=True)
class QuadraticFn:
    """f(x) = sum_{i<j} a_ij x_i x_j + sum_i b_i x_i, so f(0) = 0.

    ``A`` holds the upper-triangular coefficients as a vector of length
    C(n, 2) in lexicographic pair order.
    """

    b: F2Vector
    A: F2Vector

    def __post_init__(self):
        if self.A.length != n_pairs(self.b.length):
            raise ValueError(
                f"pair part has length {self.A.length}, "
                f"expected C({self.b.length}, 2) = {n_pairs(self.b.length)}"
            )

    @classmethod
    def from_coeffs(cls, bits: int, n: int) -> "QuadraticFn":
        """Build from the concatenated (b, A) coefficient bitset."""
        mask = (1 << n) - 1
        return cls(F2Vector(bits & mask, n), F2Vector(bits >> n, n_pairs(n)))

    @classmethod
    def from_monomials(cls, n: int, linear=(), pairs=()) -> "QuadraticFn":
        """Build from 1-based monomial indices, e.g. ``pairs=[(1, 2)]`` for x1*x2."""
        b = 0
        for i in linear:
            b ^= 1 << (i - 1)
        index = {p: k for k, p in enumerate(pair_list(n))}
        a = 0
        for i, j in pairs:
            i, j = sorted((i - 1, j - 1))
            a ^= 1 << index[(i, j)]
        return cls(F2Vector(b, n), F2Vector(a, n_pairs(n)))

    @property
    def n(self) -> int:
        return self.b.length

    @property
    def coeffs(self) -> F2Vector:
        return self.b.concat(self.A)

    def __call__(self, x) -> int:
        return _parity(self.coeffs.bits & moment_bits(_point_bits(x, self.n), self.n))

    def bilinear_form(self) -> F2Matrix:
        """B = A + A^t: symmetric with zero diagonal."""
        n = self.n
        rows = [0] * n
        for k, (i, j) in enumerate(pair_list(n)):
            if (self.A.bits >> k) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        return F2Matrix.from_ints(rows, n)

    def truth_table(self) -> "TruthTable":
        return TruthTable(quadratic_tables(self.n, np.array([self.coeffs.bits]))[0],
                          self.n)


@dataclass(frozen=True, eq=False)
class TruthTable:
    """Explicit table of 2^n values."""

    values: np.ndarray
    n: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.uint8)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"truth table must have exactly 2^{self.n} entries")
        if np.any(vals > 1):
            raise ValueError("truth table entries must be 0 or 1")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, f, n: int) -> "TruthTable":
        return cls(np.array([f(F2Vector(x, n)) for x in range(1 << n)], dtype=np.uint8), n)

    def __call__(self, x) -> int:
        return int(self.values[_point_bits(x, self.n)])

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def truth_table(self) -> "TruthTable":
        return self

    def complement(self) -> "TruthTable":
        return TruthTable(self.values ^ 1, self.n)


Function = Union[LinearFn, QuadraticFn, TruthTable]


def evaluate(f: Function, x: F2Vector) -> int:
    """Value of ``f`` at ``x``; rejects mismatched dimensions."""
    return f(x)


def as_table(f: Function) -> TruthTable:
    return f.truth_table()


def derivative(f: Function, y: F2Vector) -> TruthTable:
    """Table of g(x) = f(x + y) + f(x)."""
    t = as_table(f)
    y = _point_bits(y, t.n)
    idx = np.arange(1 << t.n, dtype=np.int64)
    return TruthTable(t.values[idx ^ y] ^ t.values, t.n)


def agreement(f: Function, g: Function) -> Fraction:
    """|P[f = g] - P[f != g]| as an exact rational."""
    tf, tg = as_table(f), as_table(g)
    if tf.n != tg.n:
        raise ValueError(f"dimension mismatch: {tf.n} vs {tg.n}")
    size = 1 << tf.n
    diff = int(np.count_nonzero(tf.values != tg.values))
    return Fraction(abs(size - 2 * diff), size)


def walsh_counts(f: Function) -> np.ndarray:
    """Unnormalized signed correlations sum_x (-1)^(f(x) + <a,x>), indexed by a."""
    t = as_table(f)
    h = 1 - 2 * t.values.astype(np.int64)
    n = t.n
    step = 1
    for _ in range(n):
        h = h.reshape(-1, 2, step)
        h = np.stack((h[:, 0] + h[:, 1], h[:, 0] - h[:, 1]), axis=1)
        step *= 2
    return h.reshape(-1)


def walsh_spectrum(f: Function) -> Dict[int, Fraction]:
    """Exact Fourier coefficient of ``f`` at each ``a`` (encoded like ``x``)."""
    counts = walsh_counts(f)
    size = counts.size
    return {a: Fraction(int(c), size) for a, c in enumerate(counts)}


def distance_to_linear(f: Function) -> Fraction:
    """Largest agreement of ``f`` with any linear function."""
    counts = walsh_counts(f)
    return Fraction(int(np.abs(counts).max()), counts.size)


@dataclass(frozen=True)
class FourierProfile:
    rank_B: int
    support: int
    magnitude: Fraction


def fourier_profile(f: QuadraticFn) -> FourierProfile:
    r = rank(f.bilinear_form())
    # alternating forms always have even rank
    assert r % 2 == 0
    return FourierProfile(r, 1 << r, Fraction(1, 1 << (r // 2)))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_bits(rng: np.random.Generator, m: int) -> int:
    """Uniform m-bit integer."""
    out = 0
    shift = 0
    while m - shift > 0:
        chunk = min(62, m - shift)
        out |= int(rng.integers(0, 1 << chunk)) << shift
        shift += chunk
    return out


def sample_linear(n: int, seed=None) -> LinearFn:
    if n < 1:
        raise ValueError("n must be at least 1")
    return LinearFn(F2Vector(random_bits(_rng(seed), n), n))


def sample_quadratic(n: int, seed=None) -> QuadraticFn:
    if n < 1:
        raise ValueError("n must be at least 1")
    return QuadraticFn.from_coeffs(random_bits(_rng(seed), n_moments(n)), n)


def sample_point(n: int, rng: np.random.Generator) -> F2Vector:
    return F2Vector(random_bits(rng, n), n)


def linear_tables(n: int) -> np.ndarray:
    """Truth tables of all 2^n linear functions; row ``a`` is <a, x>."""
    a = np.arange(1 << n, dtype=np.int64)[:, None]
    x = np.arange(1 << n, dtype=np.int64)[None, :]
    return (np.bitwise_count(a & x) & 1).astype(np.uint8)


@lru_cache(maxsize=None)
def _moment_columns(n: int) -> np.ndarray:
    return np.array([moment_bits(x, n) for x in range(1 << n)], dtype=np.int64)


def quadratic_tables(n: int, coeffs: np.ndarray = None) -> np.ndarray:
    """Truth tables of quadratics given by (b, A) coefficient bitsets.

    With ``coeffs`` omitted, all 2^(n + C(n,2)) quadratics in coefficient order.
    """
    m = n_moments(n)
    if m > 62:
        raise ValueError("vectorized tables support n + C(n,2) <= 62")
    if coeffs is None:
        coeffs = np.arange(1 << m, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64)[:, None]
    cols = _moment_columns(n)[None, :]
    return (np.bitwise_count(coeffs & cols) & 1).astype(np.uint8)


def all_linear(n: int) -> List[LinearFn]:
    return [LinearFn(F2Vector(a, n)) for a in range(1 << n)]


def all_quadratic(n: int) -> List[QuadraticFn]:
    return [QuadraticFn.from_coeffs(c, n) for c in range(1 << n_moments(n))]


# Function literals: ``linear:<n>:<hex a>`` and ``quad:<n>:<hex b>:<hex A>``.
# The hex digits encode the integer whose bit i is coefficient i+1.

def parse_function(literal: str) -> Union[LinearFn, QuadraticFn]:
    parts = literal.strip().split(":")
    try:
        kind, n = parts[0], int(parts[1])
        if n < 1:
            raise ValueError
        if kind == "linear" and len(parts) == 3:
            return LinearFn(F2Vector(int(parts[2], 16), n))
        if kind == "quad" and len(parts) == 4:
            return QuadraticFn(F2Vector(int(parts[2], 16), n),
                               F2Vector(int(parts[3], 16), n_pairs(n)))
    except (ValueError, IndexError):
        pass
    raise ValueError(f"malformed function literal {literal!r}")


def format_function(f: Union[LinearFn, QuadraticFn]) -> str:
    if isinstance(f, LinearFn):
        return f"linear:{f.n}:{f.a.bits:x}"
    return f"quad:{f.n}:{f.b.bits:x}:{f.A.bits:x}"
