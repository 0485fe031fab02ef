"""Independent brute-force oracles used to freeze expected values.

Nothing here calls the package's elimination or rank routines.
"""

from itertools import combinations, permutations, product


def det_f2(rows):
    """Determinant over F2 by permutation expansion (rows: lists of 0/1)."""
    k = len(rows)
    total = 0
    for perm in permutations(range(k)):
        term = 1
        for i, j in enumerate(perm):
            term &= rows[i][j]
            if not term:
                break
        total ^= term
    return total


def rank_by_minors(rows):
    """Largest k with an invertible k x k submatrix."""
    if not rows:
        return 0
    nr, nc = len(rows), len(rows[0])
    for k in range(min(nr, nc), 0, -1):
        for ri in combinations(range(nr), k):
            for ci in combinations(range(nc), k):
                if det_f2([[rows[i][j] for j in ci] for i in ri]):
                    return k
    return 0


def rank_by_span_size(int_rows):
    """log2 of the number of distinct subset sums of the rows."""
    span = {0}
    for r in int_rows:
        span |= {s ^ r for s in span}
    return len(span).bit_length() - 1


def quad_eval_direct(n, b, pairs, x):
    """sum_{i<j} a_ij x_i x_j + sum_i b_i x_i from explicit monomials.

    b: list of linear coefficients; pairs: dict {(i, j): a_ij} (0-based);
    x: list of bits.
    """
    v = 0
    for i in range(n):
        v ^= b[i] & x[i]
    for (i, j), a in pairs.items():
        v ^= a & x[i] & x[j]
    return v


def all_quadratic_direct(n):
    """Every quadratic with f(0)=0 as a truth table (tuple indexed by x, x_1 = LSB)."""
    pair_idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
    tables = []
    for b in product((0, 1), repeat=n):
        for a in product((0, 1), repeat=len(pair_idx)):
            pairs = dict(zip(pair_idx, a))
            tables.append(tuple(
                quad_eval_direct(n, b, pairs, [(x >> i) & 1 for i in range(n)])
                for x in range(1 << n)))
    return tables


def all_linear_direct(n):
    return [tuple(bin(a & x).count("1") % 2 for x in range(1 << n)) for a in range(1 << n)]


def correlation_direct(table, n, a):
    """sum_x (-1)^(f(x) + <a,x>) / 2^n as (numerator, denominator)."""
    s = 0
    for x in range(1 << n):
        s += 1 if (table[x] ^ (bin(a & x).count("1") & 1)) == 0 else -1
    return s, 1 << n


def run_table(node_label_bits, table):
    return table[node_label_bits]
