"""Integer partitions, rectangle duality, Littlewood-Richardson numbers, Specht dimensions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Trailing zeros are stripped on construction.  ``part(i)`` uses the 1-based
    row index of the formulas and returns 0 past the last row.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def part(self, i: int) -> int:
        """The i-th part, 1-based; zero beyond the length."""
        if i < 1:
            raise IndexError("rows are numbered from 1")
        return self[i - 1] if i <= len(self) else 0

    def transpose(self) -> "Partition":
        return transpose(self)

    def contains(self, other: "Partition") -> bool:
        """Young-diagram containment other ⊆ self."""
        return len(other) <= len(self) and all(o <= s for o, s in zip(other, self))

    def to_json(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


EMPTY = Partition()


def as_partition(x) -> Partition:
    return x if isinstance(x, Partition) else Partition(x)


@dataclass(frozen=True)
class Bipartition:
    """A pair [black, white] of partitions labelling mixed tensor objects."""

    black: Partition = EMPTY
    white: Partition = EMPTY

    def __post_init__(self):
        object.__setattr__(self, "black", as_partition(self.black))
        object.__setattr__(self, "white", as_partition(self.white))

    @property
    def size(self) -> int:
        return self.black.size + self.white.size

    def contains(self, other: "Bipartition") -> bool:
        return self.black.contains(other.black) and self.white.contains(other.white)

    def to_json(self) -> list[list[int]]:
        return [list(self.black), list(self.white)]


def transpose(lam) -> Partition:
    lam = as_partition(lam)
    if not lam:
        return EMPTY
    return Partition(sum(1 for p in lam if p > c) for c in range(lam[0]))


def partitions_of(n: int, max_part: int | None = None, max_len: int | None = None) -> Iterator[Partition]:
    """All partitions of n in reverse lexicographic order, optionally bounded."""
    if max_part is None:
        max_part = n
    if max_len is None:
        max_len = n

    def rec(rest, cap, slots):
        if rest == 0:
            yield ()
            return
        if slots == 0:
            return
        for p in range(min(rest, cap), 0, -1):
            for tail in rec(rest - p, p, slots - 1):
                yield (p,) + tail

    for parts in rec(n, max_part, max_len):
        yield Partition(parts)


def partitions_in_box(a: int, b: int) -> Iterator[Partition]:
    """All partitions fitting in a rows and b columns."""
    for n in range(a * b + 1):
        yield from partitions_of(n, max_part=b, max_len=a)


def fits_in_box(lam, a: int, b: int) -> bool:
    lam = as_partition(lam)
    return len(lam) <= a and (not lam or lam[0] <= b)


def is_ab_dual(lam, mu, a: int, b: int) -> bool:
    lam, mu = as_partition(lam), as_partition(mu)
    if lam.part(a + 1) or mu.part(a + 1):
        return False
    return all(lam.part(i) + mu.part(a + 1 - i) == b for i in range(1, a + 1))


def ab_dual(lam, a: int, b: int) -> Partition:
    """The complement of lam in the a x b rectangle, rotated by 180 degrees."""
    lam = as_partition(lam)
    if not fits_in_box(lam, a, b):
        raise ValueError(f"{list(lam)} does not fit in a {a}x{b} rectangle")
    return Partition(b - lam.part(a + 1 - i) for i in range(1, a + 1))


def rect_reach_condition(lam, mu, a: int, b: int) -> bool:
    """λ_i + μ_{a+1-i} >= b for every row i <= a."""
    lam, mu = as_partition(lam), as_partition(mu)
    return all(lam.part(i) + mu.part(a + 1 - i) >= b for i in range(1, a + 1))


def rect_reach_condition_transposed(lam, mu, a: int, b: int) -> bool:
    """Column form of the same condition: λ^t_j + μ^t_{b+1-j} >= a."""
    lt, mt = transpose(lam), transpose(mu)
    return all(lt.part(j) + mt.part(b + 1 - j) >= a for j in range(1, b + 1))


def lr_coefficient(lam, mu, nu) -> int:
    """Count LR tableaux of skew shape nu/lam with content mu."""
    return _lr(as_partition(lam), as_partition(mu), as_partition(nu))


@lru_cache(maxsize=None)
def _lr(lam: Partition, mu: Partition, nu: Partition) -> int:
    if nu.size != lam.size + mu.size or not nu.contains(lam):
        return 0
    if not mu:
        return 1
    # cells in reading order: rows top to bottom, each row right to left
    cells = [(i, c) for i in range(len(nu)) for c in range(nu[i] - 1, lam.part(i + 1) - 1, -1)]
    filled: dict[tuple[int, int], int] = {}
    counts = [0] * (len(mu) + 1)

    def rec(k: int) -> int:
        if k == len(cells):
            return 1
        i, c = cells[k]
        hi = len(mu)
        right = filled.get((i, c + 1))
        if right is not None:
            hi = min(hi, right)
        above = filled.get((i - 1, c))
        lo = above + 1 if above is not None else 1
        total = 0
        for v in range(lo, hi + 1):
            if counts[v] >= mu[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            filled[(i, c)] = v
            total += rec(k + 1)
            del filled[(i, c)]
            counts[v] -= 1
        return total

    return rec(0)


def lr_product(lam, mu) -> dict[Partition, int]:
    """All nonzero c^nu_{lam,mu} as a dict keyed by nu."""
    lam, mu = as_partition(lam), as_partition(mu)
    out = {}
    for nu in partitions_of(lam.size + mu.size):
        if nu.contains(lam) and nu.contains(mu):
            c = _lr(lam, mu, nu)
            if c:
                out[nu] = c
    return out


def hook_lengths(lam) -> list[int]:
    lam = as_partition(lam)
    lt = transpose(lam)
    return [lam[i] - j - 1 + lt[j] - i - 1 + 1 for i in range(len(lam)) for j in range(lam[i])]


def specht_dim(lam) -> int:
    """Number of standard Young tableaux, by the hook-length formula."""
    lam = as_partition(lam)
    prod = 1
    for h in hook_lengths(lam):
        prod *= h
    return factorial(lam.size) // prod


def staircase(j: int) -> Partition:
    return Partition(range(j, 0, -1))


def rectangle(rows: int, cols: int) -> Partition:
    return Partition([cols] * rows) if cols else EMPTY
