"""Closed-form classification data for tensor ideals.

Flavours: orthosymplectic ``O(δ)``, general linear ``GL(δ)``, periplectic
``P``, symmetric group ``S(t)`` and tilting modules ``SL2(p)``.  For O and GL
the index j resolves to a pair (m_j, n_j) with r_j = (m_j+1)(n_j+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .partitions import (
    EMPTY,
    Bipartition,
    Partition,
    ab_dual,
    as_partition,
    fits_in_box,
    is_ab_dual,
    partitions_in_box,
    partitions_of,
    rectangle,
    specht_dim,
    staircase,
    transpose,
)

Label = Union[Partition, Bipartition, int]


class ClassifierError(ValueError):
    pass


@dataclass(frozen=True)
class Category:
    kind: str
    param: int | None = None

    @classmethod
    def O(cls, delta: int) -> "Category":
        return cls("O", int(delta))

    @classmethod
    def GL(cls, delta: int) -> "Category":
        return cls("GL", int(delta))

    @classmethod
    def P(cls) -> "Category":
        return cls("P")

    @classmethod
    def S(cls, t: int) -> "Category":
        if t < 1:
            raise ClassifierError("S(t) needs t >= 1")
        return cls("S", int(t))

    @classmethod
    def SL2(cls, p: int) -> "Category":
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ClassifierError(f"{p} is not prime")
        return cls("SL2", int(p))

    def __post_init__(self):
        if self.kind not in ("O", "GL", "P", "S", "SL2"):
            raise ClassifierError(f"unknown flavour {self.kind!r}")
        if self.kind in ("O", "GL", "S", "SL2") and self.param is None:
            raise ClassifierError(f"flavour {self.kind} needs a parameter")

    @property
    def delta(self) -> int:
        if self.kind not in ("O", "GL"):
            raise ClassifierError("only O and GL carry δ")
        return self.param

    def to_json(self) -> dict:
        key = {"O": "delta", "GL": "delta", "S": "t", "SL2": "p"}.get(self.kind)
        return {"flavor": self.kind, key: self.param} if key else {"flavor": self.kind}


@dataclass(frozen=True)
class ParamTriple:
    m: int
    n: int
    r: int

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "r": self.r}


def _need(cat: Category, *kinds):
    if cat.kind not in kinds:
        raise ClassifierError(f"flavour {cat.kind} not supported here (need one of {', '.join(kinds)})")


def params(cat: Category, j: int) -> ParamTriple:
    _need(cat, "O", "GL")
    if j < 1:
        raise ClassifierError("j must be at least 1")
    d = cat.delta
    if cat.kind == "O":
        if d > 0:
            m = d + 2 * j - 2
        elif d % 2 == 0:
            m = 2 * j - 2
        else:
            m = 2 * j - 1
        twice_n = m - d
        if twice_n % 2:
            raise AssertionError("n_j must be integral")
        n = twice_n // 2
    else:
        m = d + j - 1 if d >= 0 else j - 1
        n = m - d
    return ParamTriple(m, n, (m + 1) * (n + 1))


def nu(cat: Category, j: int) -> Label:
    _need(cat, "O", "GL", "P")
    if j < 0:
        raise ClassifierError("j must be nonnegative")
    if j == 0:
        return Bipartition() if cat.kind == "GL" else EMPTY
    if cat.kind == "P":
        return rectangle(j, j + 1)
    t = params(cat, j)
    if cat.kind == "O":
        return rectangle(t.m + 1, 2 * t.n + 2)
    box = rectangle(t.m + 1, t.n + 1)
    return Bipartition(box, box)


def label_size(label: Label) -> int:
    return label.size if isinstance(label, (Partition, Bipartition)) else int(label)


def _as_label(cat: Category, label) -> Label:
    if cat.kind == "GL":
        if isinstance(label, Bipartition):
            return label
        black, white = label
        return Bipartition(black, white)
    if cat.kind == "SL2":
        return int(label)
    return as_partition(label)


def hom_unit_dim(cat: Category, label) -> int:
    """1 if the label is one of the ν^(j), else 0."""
    _need(cat, "O", "GL", "P")
    label = _as_label(cat, label)
    j = 0
    while True:
        v = nu(cat, j)
        if v == label:
            return 1
        if label_size(v) > label_size(label):
            return 0
        j += 1


def in_ideal(cat: Category, j: int, label) -> bool:
    """Membership of the indecomposable with this label in the j-th ideal."""
    if cat.kind == "S":
        raise ClassifierError("no label predicate for S(t); use the negligible radical")
    label = _as_label(cat, label)
    if j <= 0:
        return True
    if cat.kind == "SL2":
        return label >= cat.param ** j - 1
    if cat.kind == "P":
        return all(label.part(i) >= j + 1 - i for i in range(1, j + 1))
    t = params(cat, j)
    if cat.kind == "O":
        lt = transpose(label)
        return all(lt.part(i) + lt.part(2 * t.n + 3 - i) > t.m for i in range(1, t.n + 2))
    black, white = label.black, label.white
    return all(black.part(l) + white.part(t.m - l + 2) > t.n for l in range(1, t.m + 2))


def lambda_set(cat: Category, j: int) -> list[Label]:
    """Minimal labels of the j-th ideal not in the (j+1)-th, as a sorted list."""
    _need(cat, "O", "GL", "P")
    if j < 1:
        raise ClassifierError("j must be at least 1")
    if cat.kind == "P":
        size = j * (j + 1) // 2
        out = [lam for lam in partitions_of(size) if is_ab_dual(transpose(lam), lam, j, j + 1)]
        return out
    t = params(cat, j)
    if cat.kind == "O":
        a, b = t.m + 1, 2 * t.n + 2
        return [lam for lam in partitions_of(t.r, max_part=b, max_len=a) if ab_dual(lam, a, b) == lam]
    a, b = t.m + 1, t.n + 1
    return [Bipartition(black, ab_dual(black, a, b)) for black in partitions_in_box(a, b)]


def predicted_hom_J(cat: Category, j: int, lam, mu) -> int | None:
    """dim of J_j(R(lam), R(mu)) where a closed form exists; None means unknown."""
    _need(cat, "O", "GL", "P")
    lam, mu = _as_label(cat, lam), _as_label(cat, mu)
    if cat.kind == "P":
        total, thresh = lam.size + mu.size, j * (j + 1)
        if total < thresh:
            return 0
        if total == thresh:
            return int(is_ab_dual(transpose(lam), mu, j, j + 1))
        return None
    t = params(cat, j)
    if cat.kind == "O":
        total = lam.size + mu.size
        if total < 2 * t.r:
            return 0
        if total == 2 * t.r:
            return int(is_ab_dual(lam, mu, t.m + 1, 2 * t.n + 2))
        return None
    a, b = t.m + 1, t.n + 1
    if lam.black.size + mu.white.size < t.r or mu.black.size + lam.white.size < t.r:
        return 0
    if lam.size + mu.size == 2 * t.r:
        return int(is_ab_dual(lam.black, mu.white, a, b) and is_ab_dual(lam.white, mu.black, a, b))
    return None


def in_object(cat: Category, label, k) -> bool:
    """Whether R(label) is a summand of the tensor power indexed by k (or [k, l])."""
    _need(cat, "O", "GL", "P")
    label = _as_label(cat, label)
    if cat.kind == "GL":
        kk, ll = k
        diff = kk - label.black.size
        return diff >= 0 and diff == ll - label.white.size
    diff = int(k) - label.size
    return diff >= 0 and diff % 2 == 0


# ---------------------------------------------------------------------------
# critical rank and kernel dimension at threshold


def critical_rank(kind: str, dims) -> int:
    """First tensor degree at which φ has a kernel (S: smallest k with 2k > t)."""
    if kind in ("O", "GL"):
        m, n = dims
        return (m + 1) * (n + 1)
    if kind == "P":
        n = dims if isinstance(dims, int) else dims[0]
        return (n + 1) * (n + 2) // 2
    if kind == "S":
        t = dims if isinstance(dims, int) else dims[0]
        return t // 2 + 1
    raise ClassifierError(f"no critical rank for {kind}")


def _bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
    return row[0]


def _set_partitions_at_most(n: int, blocks: int) -> int:
    # Stirling numbers of the second kind by the triangle recurrence
    S = [[0] * (blocks + 1) for _ in range(n + 1)]
    S[0][0] = 1
    for i in range(1, n + 1):
        for k in range(1, blocks + 1):
            S[i][k] = k * S[i - 1][k] + S[i - 1][k - 1]
    return sum(S[n][1:]) + (1 if n == 0 else 0)


def kernel_dim_at_threshold(kind: str, dims, split: tuple[int, int] | None = None) -> int:
    if kind == "O":
        m, n = dims
        rc, a, b = (m + 1) * (n + 1), m + 1, 2 * n + 2
        return sum(specht_dim(lam) * specht_dim(ab_dual(lam, a, b))
                   for lam in partitions_of(rc, max_part=b, max_len=a))
    if kind == "GL":
        m, n = dims
        rc, a, b = (m + 1) * (n + 1), m + 1, n + 1
        if split is None or sum(split) != rc or min(split) < 0:
            raise ClassifierError(f"GL needs a split (k, l) with k + l = {rc}")
        k, l = split
        total = 0
        for black in partitions_of(k, max_part=b, max_len=a):
            for white in partitions_of(l, max_part=b, max_len=a):
                total += (specht_dim(black) * specht_dim(white)
                          * specht_dim(ab_dual(white, a, b)) * specht_dim(ab_dual(black, a, b)))
        return total
    if kind == "P":
        n = dims if isinstance(dims, int) else dims[0]
        j = n + 1
        rc = j * (j + 1) // 2
        total = 0
        for lam in partitions_of(rc):
            lt = transpose(lam)
            if fits_in_box(lt, j, j + 1):
                total += specht_dim(lam) * specht_dim(ab_dual(lt, j, j + 1))
        return total
    if kind == "S":
        t = dims if isinstance(dims, int) else dims[0]
        k = critical_rank("S", t)
        return _bell(2 * k) - _set_partitions_at_most(2 * k, t)
    raise ClassifierError(f"no kernel formula for {kind}")


# ---------------------------------------------------------------------------
# weight diagrams (δ = 2s > 0)

CIRCLE, UP, DOWN, CROSS = "∘", "∧", "∨", "×"


def weight_diagram(delta: int, lam, length: int | None = None) -> list[str]:
    if delta <= 0 or delta % 2:
        raise ClassifierError("weight diagrams are implemented for positive even δ only")
    s = delta // 2
    lam = as_partition(lam)
    lt = transpose(lam)
    if length is None:
        length = s + len(lam) + (lam[0] if lam else 0) + 2
    count = length + s + len(lt) + 2
    xs = {lt.part(i) - s - (i - 1) for i in range(1, count + 1)}
    out = []
    for n in range(length):
        up, down = n in xs, -n in xs
        out.append(CROSS if up and down else UP if up else DOWN if down else CIRCLE)
    return out


def matches_nu_pattern(seq: list[str], s: int | None = None) -> bool:
    """seq = ∘^s ∧^{2j} ∨^{rest} for some j >= 0."""
    k = 0
    while k < len(seq) and seq[k] == CIRCLE:
        k += 1
    if s is not None and k != s:
        return False
    ups = 0
    while k < len(seq) and seq[k] == UP:
        k += 1
        ups += 1
    return ups % 2 == 0 and all(c == DOWN for c in seq[k:])


def labels_up_to(cat: Category, max_size: int) -> Iterator[Label]:
    """All labels of total size <= max_size (for exhaustive property checks)."""
    if cat.kind == "GL":
        for total in range(max_size + 1):
            for k in range(total + 1):
                for black in partitions_of(k):
                    for white in partitions_of(total - k):
                        yield Bipartition(black, white)
        return
    if cat.kind == "SL2":
        yield from range(max_size + 1)
        return
    for n in range(max_size + 1):
        yield from partitions_of(n)


def label_contains(big: Label, small: Label) -> bool:
    if isinstance(big, int):
        return big >= small
    return big.contains(small)


def label_to_json(label: Label):
    if isinstance(label, (Partition, Bipartition)):
        return label.to_json()
    return label


def ideal_report(cat: Category, j: int) -> dict:
    out = cat.to_json()
    out["j"] = j
    if cat.kind in ("O", "GL"):
        out.update(params(cat, j).to_json())
    elif cat.kind == "P":
        out["r"] = j * (j + 1) // 2
    if cat.kind in ("O", "GL", "P"):
        out["nu"] = label_to_json(nu(cat, j))
        out["lambda_set"] = [label_to_json(x) for x in lambda_set(cat, j)]
    return out


__all__ = [
    "Category", "ParamTriple", "ClassifierError", "params", "nu", "hom_unit_dim", "in_ideal",
    "lambda_set", "predicted_hom_J", "in_object", "critical_rank", "kernel_dim_at_threshold",
    "weight_diagram", "matches_nu_pattern", "labels_up_to", "label_contains", "ideal_report",
]
