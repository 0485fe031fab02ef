"""Linear algebra over the two-element field using int bitsets.

A vector of dimension ``n`` is stored as a Python int whose bit ``i``
holds coordinate ``x_{i+1}``; coordinate ``x_1`` is the least significant
bit.  Text rendering puts ``x_1`` leftmost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple


@dataclass(frozen=True)
class F2Vector:
    """Immutable bit vector over F2."""

    bits: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("vector length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(
                f"bits 0x{self.bits:x} do not fit in dimension {self.length}"
            )

    @classmethod
    def zero(cls, n: int) -> "F2Vector":
        return cls(0, n)

    @classmethod
    def unit(cls, i: int, n: int) -> "F2Vector":
        """The standard basis vector e_{i+1} (0-based ``i``)."""
        if not 0 <= i < n:
            raise ValueError(f"unit index {i} out of range for dimension {n}")
        return cls(1 << i, n)

    @classmethod
    def from_bits(cls, seq: Iterable[int]) -> "F2Vector":
        bits = 0
        length = 0
        for i, b in enumerate(seq):
            if b not in (0, 1):
                raise ValueError(f"entry {b!r} is not a field element")
            bits |= b << i
            length += 1
        return cls(bits, length)

    @classmethod
    def from_string(cls, s: str) -> "F2Vector":
        """Parse a bitstring; the leftmost character is x_1."""
        if any(c not in "01" for c in s):
            raise ValueError(f"malformed bitstring {s!r}")
        return cls.from_bits(int(c) for c in s)

    def to_string(self) -> str:
        return "".join(str(b) for b in self)

    def _check(self, other: "F2Vector"):
        if self.length != other.length:
            raise ValueError(
                f"dimension mismatch: {self.length} vs {other.length}"
            )

    def __add__(self, other: "F2Vector") -> "F2Vector":
        self._check(other)
        return F2Vector(self.bits ^ other.bits, self.length)

    __xor__ = __add__

    def dot(self, other: "F2Vector") -> int:
        self._check(other)
        return (self.bits & other.bits).bit_count() & 1

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.length))

    def __len__(self) -> int:
        return self.length

    def __bool__(self) -> bool:
        return self.bits != 0

    def weight(self) -> int:
        return self.bits.bit_count()

    def concat(self, other: "F2Vector") -> "F2Vector":
        """Append ``other`` after this vector's coordinates."""
        return F2Vector(self.bits | (other.bits << self.length),
                        self.length + other.length)

    def __repr__(self) -> str:
        return f"F2Vector('{self.to_string()}')"


@dataclass(frozen=True)
class F2Matrix:
    """Immutable matrix over F2, stored as a tuple of row vectors."""

    rows: Tuple[F2Vector, ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if r.length != self.ncols:
                raise ValueError(
                    f"row of length {r.length} in a matrix with {self.ncols} columns"
                )

    @classmethod
    def from_rows(cls, rows: Sequence[F2Vector], ncols: Optional[int] = None):
        rows = tuple(rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = rows[0].length
        return cls(rows, ncols)

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence[int]]) -> "F2Matrix":
        return cls.from_rows([F2Vector.from_bits(r) for r in lists])

    @classmethod
    def from_ints(cls, ints: Sequence[int], ncols: int) -> "F2Matrix":
        return cls(tuple(F2Vector(b, ncols) for b in ints), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def transpose(self) -> "F2Matrix":
        cols = []
        for j in range(self.ncols):
            bits = 0
            for i, r in enumerate(self.rows):
                bits |= ((r.bits >> j) & 1) << i
            cols.append(F2Vector(bits, self.nrows))
        return F2Matrix(tuple(cols), self.nrows)

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("matrix shape mismatch")
        return F2Matrix(tuple(a + b for a, b in zip(self.rows, other.rows)),
                        self.ncols)

    def rank(self) -> int:
        return rank(self)

    def to_lists(self):
        return [list(r) for r in self.rows]


def _row_ints(m) -> Tuple[list, Optional[int]]:
    if isinstance(m, F2Matrix):
        return [r.bits for r in m.rows], m.ncols
    vecs = list(m)
    if not vecs:
        return [], None
    n = vecs[0].length
    for v in vecs:
        if v.length != n:
            raise ValueError(f"dimension mismatch: {v.length} vs {n}")
    return [v.bits for v in vecs], n


def rank_of_ints(rows: Iterable[int]) -> int:
    """Rank of the rows given as int bitsets.

    Works on a private copy; pivots on the lowest set bit (leftmost column).
    """
    pivots = {}
    r = 0
    for v in rows:
        while v:
            low = v & -v
            p = pivots.get(low)
            if p is None:
                pivots[low] = v
                r += 1
                break
            v ^= p
    return r


def rank(m) -> int:
    """Dimension of the row space of an ``F2Matrix`` or a sequence of vectors."""
    rows, _ = _row_ints(m)
    return rank_of_ints(rows)


@dataclass(frozen=True)
class InsertResult:
    independent: bool
    # Representation over the independent vectors inserted so far, in
    # insertion order; None for independent inserts.
    coefficients: Optional[Tuple[int, ...]]


class IncrementalBasis:
    """Row-echelon basis that grows one vector at a time.

    Each stored row keeps the combination mask (over independent inserts)
    that produced it, so a dependent insert can report its exact
    coefficients.
    """

    def __init__(self, dim: Optional[int] = None):
        self.dim = dim
        self._rows = {}  # lowest set bit -> (row bits, combination mask)
        self._count = 0

    def copy(self) -> "IncrementalBasis":
        other = IncrementalBasis(self.dim)
        other._rows = dict(self._rows)
        other._count = self._count
        return other

    @property
    def rank(self) -> int:
        return self._count

    def __len__(self) -> int:
        return self._count

    def _check(self, v: F2Vector):
        if self.dim is None:
            self.dim = v.length
        elif v.length != self.dim:
            raise ValueError(f"dimension mismatch: {v.length} vs {self.dim}")

    def _reduce(self, bits: int) -> Tuple[int, int]:
        combo = 0
        while bits:
            low = bits & -bits
            entry = self._rows.get(low)
            if entry is None:
                break
            bits ^= entry[0]
            combo ^= entry[1]
        return bits, combo

    def _unpack(self, combo: int) -> Tuple[int, ...]:
        return tuple((combo >> i) & 1 for i in range(self._count))

    def represent(self, v: F2Vector) -> Optional[Tuple[int, ...]]:
        """Coefficients expressing ``v`` over the basis, or None if outside the span."""
        self._check(v)
        rest, combo = self._reduce(v.bits)
        if rest:
            return None
        return self._unpack(combo)

    def insert(self, v: F2Vector) -> InsertResult:
        self._check(v)
        rest, combo = self._reduce(v.bits)
        if not rest:
            return InsertResult(False, self._unpack(combo))
        self._rows[rest & -rest] = (rest, combo ^ (1 << self._count))
        self._count += 1
        return InsertResult(True, None)


def incremental_basis(dim: Optional[int] = None) -> IncrementalBasis:
    return IncrementalBasis(dim)


def express_in_span(basis: Sequence[F2Vector],
                    target: F2Vector) -> Optional[Tuple[int, ...]]:
    """Coefficients ``c`` with ``sum(c_i * basis_i) == target``, or None.

    Basis vectors that are dependent on earlier ones get coefficient 0.
    """
    builder = IncrementalBasis(target.length)
    independent = []
    for i, b in enumerate(basis):
        if builder.insert(b).independent:
            independent.append(i)
    rep = builder.represent(target)
    if rep is None:
        return None
    coeffs = [0] * len(basis)
    for idx, c in zip(independent, rep):
        coeffs[idx] = c
    return tuple(coeffs)


def combine(coeffs: Sequence[int], vectors: Sequence[F2Vector], n: int) -> F2Vector:
    """The linear combination ``sum(c_i * v_i)``."""
    bits = 0
    for c, v in zip(coeffs, vectors):
        if c:
            bits ^= v.bits
    return F2Vector(bits, n)
