"""Independent reference computations used to freeze expected values in tests.

Nothing here imports the package under test.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import comb, factorial


def ssyt(shape: tuple[int, ...], nvars: int):
    """Yield semistandard tableaux (as row tuples) with entries 1..nvars."""
    cells = [(i, j) for i, row in enumerate(shape) for j in range(row)]
    filling: dict[tuple[int, int], int] = {}

    def rec(k):
        if k == len(cells):
            yield dict(filling)
            return
        i, j = cells[k]
        lo = 1
        if j > 0:
            lo = max(lo, filling[(i, j - 1)])
        if i > 0:
            lo = max(lo, filling[(i - 1, j)] + 1)
        for v in range(lo, nvars + 1):
            filling[(i, j)] = v
            yield from rec(k + 1)
        filling.pop((i, j), None)

    yield from rec(0)


def schur_poly(shape: tuple[int, ...], nvars: int) -> Counter:
    """Monomial expansion of s_shape(x_1..x_nvars) as exponent-tuple -> coefficient."""
    poly: Counter = Counter()
    for t in ssyt(shape, nvars):
        exps = [0] * nvars
        for v in t.values():
            exps[v - 1] += 1
        poly[tuple(exps)] += 1
    return poly


def poly_mul(p: Counter, q: Counter) -> Counter:
    out: Counter = Counter()
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
    return out


def schur_expand(poly: Counter) -> dict[tuple[int, ...], int]:
    """Peel off Schur functions by repeatedly taking the dominant monomial."""
    nvars = len(next(iter(poly))) if poly else 0
    poly = Counter({e: c for e, c in poly.items() if c})
    out = {}
    while poly:
        lead = max(e for e in poly if list(e) == sorted(e, reverse=True))
        c = poly[lead]
        shape = tuple(x for x in lead if x)
        out[shape] = c
        for e, v in schur_poly(shape, nvars).items():
            poly[e] -= c * v
            if poly[e] == 0:
                del poly[e]
    return out


def lr_by_schur(lam: tuple[int, ...], mu: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    nvars = max(1, len(lam) + len(mu))
    return schur_expand(poly_mul(schur_poly(lam, nvars), schur_poly(mu, nvars)))


def count_syt(shape: tuple[int, ...]) -> int:
    """Standard tableaux by removing corners recursively."""

    @lru_cache(maxsize=None)
    def rec(sh):
        if sum(sh) == 0:
            return 1
        total = 0
        for i, row in enumerate(sh):
            if row and (i + 1 == len(sh) or sh[i + 1] < row):
                total += rec(sh[:i] + (row - 1,) + sh[i + 1:])
        return total

    return rec(tuple(shape))


def bell(n: int) -> int:
    b = [1]
    for k in range(n):
        b.append(sum(comb(k, i) * b[i] for i in range(k + 1)))
    return b[n]


def stirling2(n: int, k: int) -> int:
    return sum((-1) ** i * comb(k, i) * (k - i) ** n for i in range(k + 1)) // factorial(k)


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def all_partitions(n: int):
    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for p in range(min(rest, cap), 0, -1):
            for t in rec(rest - p, p):
                yield (p,) + t

    return list(rec(n, n))


def brute_rank(rows) -> int:
    """Rank over Q by plain Fraction elimination (small inputs only)."""
    from fractions import Fraction

    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank

