"""Flavoured diagram combinatorics.

Dots are numbered ``0..a-1`` along the source (bottom) row and ``a..a+b-1``
along the target (top) row, both left to right.  A diagram is stored in
canonical form: every block sorted, blocks sorted lexicographically, so
equality and hashing are structural.

Walled Brauer rows are colour words: ``+1`` for a black dot (V) and ``-1``
for a white dot (the dual).  Propagating lines join equal colours, cups and
caps join opposite colours.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

Row = Union[int, tuple]

DEFAULT_MAX_DOTS = 16


class DiagramError(ValueError):
    pass


class Flavor(str, Enum):
    BRAUER = "Brauer"
    WALLED = "WalledBrauer"
    TL = "TemperleyLieb"
    PARTITION = "PartitionCat"
    PERIPLECTIC = "Periplectic"

    @property
    def is_matching(self) -> bool:
        return self is not Flavor.PARTITION

    @property
    def coloured(self) -> bool:
        return self is Flavor.WALLED


def as_flavor(f) -> Flavor:
    return f if isinstance(f, Flavor) else Flavor(f)


def row_size(row: Row) -> int:
    return len(row) if isinstance(row, tuple) else row


def signature(k: int, l: int) -> tuple:
    """The walled row with k black dots followed by l white dots."""
    return (1,) * k + (-1,) * l


def _norm_row(flavor: Flavor, row) -> Row:
    if flavor.coloured:
        row = tuple(int(c) for c in row)
        if any(c not in (1, -1) for c in row):
            raise DiagramError(f"colour words use +1/-1, got {row}")
        return row
    if isinstance(row, (tuple, list)):
        raise DiagramError(f"{flavor.value} rows are dot counts, got {row}")
    if row < 0:
        raise DiagramError("row sizes are nonnegative")
    return int(row)


@dataclass(frozen=True)
class Diagram:
    flavor: Flavor
    source: Row
    target: Row
    blocks: tuple

    @classmethod
    def make(cls, flavor, source, target, blocks: Iterable[Iterable[int]]) -> "Diagram":
        """Validate and canonicalise."""
        flavor = as_flavor(flavor)
        source, target = _norm_row(flavor, source), _norm_row(flavor, target)
        blocks = tuple(sorted(tuple(sorted(b)) for b in blocks))
        d = cls(flavor, source, target, blocks)
        d._validate()
        return d

    @property
    def a(self) -> int:
        return row_size(self.source)

    @property
    def b(self) -> int:
        return row_size(self.target)

    @property
    def shape(self) -> tuple[Row, Row]:
        return (self.source, self.target)

    def colour(self, dot: int) -> int:
        a = self.a
        return self.source[dot] if dot < a else self.target[dot - a]

    def _validate(self):
        n = self.a + self.b
        seen = sorted(x for blk in self.blocks for x in blk)
        if seen != list(range(n)):
            raise DiagramError(f"blocks must partition the {n} dots: {self.blocks}")
        if any(len(blk) == 0 for blk in self.blocks):
            raise DiagramError("empty block")
        if self.flavor.is_matching:
            if any(len(blk) != 2 for blk in self.blocks):
                raise DiagramError("matching flavours need pairs")
        if self.flavor is Flavor.WALLED:
            a = self.a
            for x, y in self.blocks:
                same_row = (x < a) == (y < a)
                same_colour = self.colour(x) == self.colour(y)
                if same_row == same_colour:
                    raise DiagramError(f"pair {(x, y)} violates the colour rule")
        if self.flavor is Flavor.TL and not is_planar(self):
            raise DiagramError("Temperley-Lieb diagrams must be planar")

    # structural helpers -------------------------------------------------
    def pairs(self):
        return self.blocks

    def to_json(self) -> dict:
        key = "pairs" if self.flavor.is_matching else "blocks"
        if self.flavor.coloured:
            enc = [[self.colour(x) * (x + 1) for x in blk] for blk in self.blocks]
            return {"flavor": self.flavor.value, "source": list(self.source),
                    "target": list(self.target), key: enc}
        return {"flavor": self.flavor.value, "source": self.source, "target": self.target,
                key: [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: dict) -> "Diagram":
        flavor = Flavor(data["flavor"])
        raw = data.get("pairs", data.get("blocks"))
        if flavor.coloured:
            raw = [[abs(x) - 1 for x in blk] for blk in raw]
            return cls.make(flavor, tuple(data["source"]), tuple(data["target"]), raw)
        return cls.make(flavor, data["source"], data["target"], raw)

    def __repr__(self):
        return f"Diagram({self.flavor.value}, {self.source}->{self.target}, {list(self.blocks)})"


def _raw(flavor, source, target, blocks) -> Diagram:
    """Canonicalise without validation (inputs already known to be valid)."""
    return Diagram(flavor, source, target, tuple(sorted(tuple(sorted(b)) for b in blocks)))


# ---------------------------------------------------------------------------
# basic constructors


def identity(row: Row, flavor=Flavor.BRAUER) -> Diagram:
    flavor = as_flavor(flavor)
    row = _norm_row(flavor, row)
    n = row_size(row)
    return _raw(flavor, row, row, [(i, n + i) for i in range(n)])


def empty(flavor=Flavor.BRAUER) -> Diagram:
    flavor = as_flavor(flavor)
    r = () if flavor.coloured else 0
    return _raw(flavor, r, r, [])


def cap(flavor=Flavor.BRAUER, colours: tuple = (1, -1)) -> Diagram:
    flavor = as_flavor(flavor)
    src = tuple(colours) if flavor.coloured else 2
    return Diagram.make(flavor, src, () if flavor.coloured else 0, [(0, 1)])


def cup(flavor=Flavor.BRAUER, colours: tuple = (1, -1)) -> Diagram:
    return star(cap(flavor, colours))


def crossing(flavor=Flavor.BRAUER, colours: tuple = (1, 1)) -> Diagram:
    flavor = as_flavor(flavor)
    if flavor is Flavor.TL:
        raise DiagramError("no crossings in Temperley-Lieb")
    if flavor.coloured:
        c = tuple(colours)
        return Diagram.make(flavor, c, (c[1], c[0]), [(0, 3), (1, 2)])
    return Diagram.make(flavor, 2, 2, [(0, 3), (1, 2)])


def elementary(kind: str, pos: int, row: Row, flavor=Flavor.BRAUER, new_colours: tuple = (1, -1)) -> Diagram:
    """Identity strands around a single generator acting at positions pos, pos+1.

    kind is one of ``"s"`` (crossing), ``"cap"``, ``"cup"``; for PartitionCat
    also ``"p"`` (isolate strand pos) and ``"b"`` (merge strands pos, pos+1).
    ``new_colours`` gives the colours of a cup inserted into a walled row.
    """
    flavor = as_flavor(flavor)
    row = _norm_row(flavor, row)
    n = row_size(row)
    if kind == "cup":
        if not 0 <= pos <= n:
            raise DiagramError(f"cup position {pos} invalid for row of {n}")
        if flavor.coloured:
            tgt = row[:pos] + tuple(new_colours) + row[pos:]
        else:
            tgt = n + 2
        blocks = [(i, n + i) for i in range(pos)]
        blocks += [(n + pos, n + pos + 1)]
        blocks += [(i, n + i + 2) for i in range(pos, n)]
        return _raw(flavor, row, tgt, blocks)
    if kind == "p":
        if not 0 <= pos < n:
            raise DiagramError(f"position {pos} invalid for row of {n}")
        blocks = [(i, n + i) for i in range(n) if i != pos] + [(pos,), (n + pos,)]
        return _raw(flavor, row, row, blocks)
    if not 0 <= pos < n - 1:
        raise DiagramError(f"position {pos} invalid for row of {n}")
    if kind == "s":
        if flavor is Flavor.TL:
            raise DiagramError("no crossings in Temperley-Lieb")
        tgt = row
        if flavor.coloured:
            tgt = row[:pos] + (row[pos + 1], row[pos]) + row[pos + 2:]
        blocks = [(i, n + i) for i in range(n) if i not in (pos, pos + 1)]
        blocks += [(pos, n + pos + 1), (pos + 1, n + pos)]
        return _raw(flavor, row, tgt, blocks)
    if kind == "cap":
        if flavor.coloured:
            if row[pos] == row[pos + 1]:
                raise DiagramError("cap needs opposite colours")
            tgt = row[:pos] + row[pos + 2:]
        else:
            tgt = n - 2
        blocks = [(i, n + i) for i in range(pos)] + [(pos, pos + 1)]
        blocks += [(i, n + i - 2) for i in range(pos + 2, n)]
        return _raw(flavor, row, tgt, blocks)
    if kind == "b":
        blocks = [(i, n + i) for i in range(n) if i not in (pos, pos + 1)]
        blocks += [(pos, pos + 1, n + pos, n + pos + 1)]
        return _raw(flavor, row, row, blocks)
    if kind == "e":
        return compose(elementary("cup", pos, _cap_row(flavor, row, pos), flavor, _pair_colours(flavor, row, pos)),
                       elementary("cap", pos, row, flavor))[0]
    raise DiagramError(f"unknown generator kind {kind!r}")


def _cap_row(flavor, row, pos):
    if flavor.coloured:
        return row[:pos] + row[pos + 2:]
    return row - 2


def _pair_colours(flavor, row, pos):
    return (row[pos], row[pos + 1]) if flavor.coloured else (1, -1)


# ---------------------------------------------------------------------------
# operations


def _rows_match(r1: Row, r2: Row) -> bool:
    return r1 == r2


def compose(d1: Diagram, d2: Diagram) -> tuple[Diagram, int]:
    """d1 after d2 (d2 below, d1 on top).  Returns (diagram, closed loops)."""
    if d1.flavor is not d2.flavor:
        raise DiagramError("cannot compose diagrams of different flavours")
    if not _rows_match(d2.target, d1.source):
        raise DiagramError(f"middle rows differ: {d2.target} vs {d1.source}")
    a, b, c = d2.a, d2.b, d1.b
    parent = list(range(a + b + c))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union_block(nodes):
        r0 = find(nodes[0])
        for y in nodes[1:]:
            ry = find(y)
            if ry != r0:
                parent[ry] = r0

    for blk in d2.blocks:
        union_block(blk)  # bottom dots 0..a-1, middle dots a..a+b-1
    for blk in d1.blocks:
        union_block([a + x for x in blk])  # middle a..a+b-1, top a+b..
    groups: dict[int, list[int]] = {}
    for x in range(a + b + c):
        groups.setdefault(find(x), []).append(x)
    blocks = []
    loops = 0
    for members in groups.values():
        outer = [x if x < a else x - b for x in members if x < a or x >= a + b]
        if outer:
            blocks.append(outer)
        else:
            loops += 1
    return _raw(d1.flavor, d2.source, d1.target, blocks), loops


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    """Juxtapose d2 to the right of d1."""
    if d1.flavor is not d2.flavor:
        raise DiagramError("cannot tensor diagrams of different flavours")
    a1, b1, a2, b2 = d1.a, d1.b, d2.a, d2.b

    def shift1(x):
        return x if x < a1 else x + a2

    def shift2(x):
        return a1 + x if x < a2 else a1 + a2 + b1 + (x - a2)

    blocks = [tuple(shift1(x) for x in blk) for blk in d1.blocks]
    blocks += [tuple(shift2(x) for x in blk) for blk in d2.blocks]
    if d1.flavor.coloured:
        src, tgt = d1.source + d2.source, d1.target + d2.target
    else:
        src, tgt = a1 + a2, b1 + b2
    return _raw(d1.flavor, src, tgt, blocks)


def tensor_all(ds: Sequence[Diagram], flavor=Flavor.BRAUER) -> Diagram:
    out = empty(flavor) if not ds else ds[0]
    for d in ds[1:]:
        out = tensor(out, d)
    return out


def star(d: Diagram) -> Diagram:
    """Reflect in a horizontal axis: source and target rows swap."""
    a, b = d.a, d.b

    def f(x):
        return b + x if x < a else x - a

    return _raw(d.flavor, d.target, d.source, [tuple(f(x) for x in blk) for blk in d.blocks])


def ev_diagram(i: int, flavor=Flavor.BRAUER, colours: tuple | None = None) -> Diagram:
    """Shape (2i, 0): bottom dot p joined to bottom dot p+i.

    For the walled flavour the source row is X followed by its colour-flipped
    copy; X defaults to i black dots.
    """
    flavor = as_flavor(flavor)
    blocks = [(p, p + i) for p in range(i)]
    if flavor.coloured:
        x = tuple(colours) if colours is not None else (1,) * i
        if len(x) != i:
            raise DiagramError("colour word length must equal i")
        return Diagram.make(flavor, x + tuple(-c for c in x), (), blocks)
    return Diagram.make(flavor, 2 * i, 0, blocks)


def co_diagram(i: int, flavor=Flavor.BRAUER, colours: tuple | None = None) -> Diagram:
    """Shape (0, 2i), the reflection of ev.

    For walled rows the target is the flipped word followed by X, which is what
    the snake identity with ev_X needs; uncoloured flavours give star(ev_i).
    """
    flavor = as_flavor(flavor)
    if flavor.coloured:
        x = tuple(colours) if colours is not None else (1,) * i
        return star(ev_diagram(i, flavor, tuple(-c for c in x)))
    return star(ev_diagram(i, flavor))


def is_planar(d: Diagram) -> bool:
    """Non-crossing test after unrolling both rows onto one boundary circle."""
    a, b = d.a, d.b

    def pos(x):
        return x if x < a else a + (b - 1 - (x - a))

    owner = {}
    for idx, blk in enumerate(d.blocks):
        for x in blk:
            owner[pos(x)] = idx
    # a set partition on a circle is non-crossing iff the block sequence
    # reduces to nothing by the usual stack discipline
    stack: list[int] = []
    last_seen: dict[int, int] = {}
    remaining = {idx: len(blk) for idx, blk in enumerate(d.blocks)}
    for p in range(a + b):
        idx = owner[p]
        if idx in last_seen:
            if not stack or stack[-1] != idx:
                return False
        else:
            stack.append(idx)
            last_seen[idx] = p
        remaining[idx] -= 1
        if remaining[idx] == 0:
            stack.pop()
    return True


def diagram_stats(d: Diagram) -> tuple[int, int, int]:
    """(propagating, cups, caps): cups live in the target row, caps in the source row."""
    if not d.flavor.is_matching:
        raise DiagramError("line classes only make sense for matchings")
    a = d.a
    prop = cups = caps = 0
    for x, y in d.blocks:
        if x < a and y < a:
            caps += 1
        elif x >= a and y >= a:
            cups += 1
        else:
            prop += 1
    return prop, cups, caps


def propagating_number(d: Diagram) -> int:
    """Number of blocks meeting both rows."""
    a = d.a
    return sum(1 for blk in d.blocks if blk[0] < a <= blk[-1])


# ---------------------------------------------------------------------------
# enumeration


def _matchings(nodes: list[int], allowed) -> Iterator[list[tuple[int, int]]]:
    if not nodes:
        yield []
        return
    x = nodes[0]
    for k in range(1, len(nodes)):
        y = nodes[k]
        if not allowed(x, y):
            continue
        rest = nodes[1:k] + nodes[k + 1:]
        for m in _matchings(rest, allowed):
            yield [(x, y)] + m


def _set_partitions(n: int) -> Iterator[list[list[int]]]:
    blocks: list[list[int]] = []

    def rec(x):
        if x == n:
            yield [list(b) for b in blocks]
            return
        for blk in blocks:
            blk.append(x)
            yield from rec(x + 1)
            blk.pop()
        blocks.append([x])
        yield from rec(x + 1)
        blocks.pop()

    yield from rec(0)


def enumerate_diagrams(source: Row, target: Row, flavor=Flavor.BRAUER,
                       max_dots: int = DEFAULT_MAX_DOTS) -> list[Diagram]:
    """All diagrams of the given shape in a fixed deterministic order."""
    flavor = as_flavor(flavor)
    source, target = _norm_row(flavor, source), _norm_row(flavor, target)
    a, b = row_size(source), row_size(target)
    n = a + b
    if n > max_dots:
        raise DiagramError(f"{n} dots exceeds the enumeration bound {max_dots}")
    if flavor is Flavor.PARTITION:
        return [_raw(flavor, source, target, blks) for blks in _set_partitions(n)]
    if n % 2:
        return []
    if flavor.coloured:
        colour = lambda x: source[x] if x < a else target[x - a]

        def allowed(x, y):
            return ((x < a) == (y < a)) != (colour(x) == colour(y))
    else:
        allowed = lambda x, y: True
    out = [_raw(flavor, source, target, m) for m in _matchings(list(range(n)), allowed)]
    if flavor is Flavor.TL:
        out = [d for d in out if is_planar(d)]
    return out


# ---------------------------------------------------------------------------
# slice decomposition


class Slice(NamedTuple):
    kind: str          # "s", "cap" or "cup"
    pos: int           # 0-based left position acted on
    row: Row           # the row before this slice is applied
    diagram: Diagram   # the elementary diagram itself


def slice_decomposition(d: Diagram) -> list[Slice]:
    """Factor a matching diagram bottom-to-top into crossings, caps and cups.

    Order: sort the source so propagating strands come first (in target
    order) followed by adjacent cap pairs; remove caps rightmost first; insert
    cups at the right end; finally permute into target order.  Composing the
    slices (first one applied first) reproduces d with no loops.
    """
    if not d.flavor.is_matching:
        raise DiagramError("slice decomposition needs a matching diagram")
    flavor, a = d.flavor, d.a
    props, caps, cups = [], [], []
    for x, y in d.blocks:
        if y < a:
            caps.append((x, y))
        elif x >= a:
            cups.append((x - a, y - a))
        else:
            props.append((x, y - a))
    props.sort(key=lambda p: p[1])
    slices: list[Slice] = []
    row = d.source

    def push(kind, pos, new_colours=(1, -1)):
        nonlocal row
        e = elementary(kind, pos, row, flavor, new_colours)
        slices.append(Slice(kind, pos, row, e))
        row = e.target

    # 1. source permutation by insertion (bubble) sort
    wanted = [x for x, _ in props] + [x for pair in caps for x in pair]
    current = list(range(a))
    for i, dot in enumerate(wanted):
        k = current.index(dot)
        while k > i:
            push("s", k - 1)
            current[k - 1], current[k] = current[k], current[k - 1]
            k -= 1
    # 2. caps, rightmost first
    p = len(props)
    for c in range(len(caps) - 1, -1, -1):
        push("cap", p + 2 * c)
    # 3. cups appended at the right end
    labels = [t for _, t in props]
    for x, y in cups:
        colours = (d.target[x], d.target[y]) if flavor.coloured else (1, -1)
        push("cup", len(labels), colours)
        labels += [x, y]
    # 4. target permutation
    for i in range(len(labels)):
        k = labels.index(i, i)
        while k > i:
            push("s", k - 1)
            labels[k - 1], labels[k] = labels[k], labels[k - 1]
            k -= 1
    return slices


def recompose(slices: Sequence[Slice], source: Row, flavor=Flavor.BRAUER) -> tuple[Diagram, int]:
    """Compose a slice word back into a diagram, returning total loops too."""
    out = identity(source, flavor)
    loops = 0
    for s in slices:
        out, l = compose(s.diagram, out)
        loops += l
    return out, loops
