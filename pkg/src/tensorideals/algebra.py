"""Linear combinations of diagrams: products, traces, radicals and ideals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from . import linalg
from .diagrams import (
    Diagram,
    DiagramError,
    Flavor,
    Row,
    as_flavor,
    compose,
    elementary,
    enumerate_diagrams,
    identity,
    propagating_number,
    row_size,
    star,
    tensor,
)

Scalar = Fraction


def as_scalar(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraParams:
    """Flavour plus loop value (δ, or t for partition diagrams)."""

    flavor: Flavor
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "flavor", as_flavor(self.flavor))
        object.__setattr__(self, "delta", as_scalar(self.delta))

    def loop_value(self, loops: int) -> Fraction:
        if self.flavor is Flavor.PERIPLECTIC:
            return Fraction(int(loops == 0))
        return self.delta ** loops

    def to_json(self) -> dict:
        return {"flavor": self.flavor.value, "delta": str(self.delta)}


# ---------------------------------------------------------------------------
# periplectic signs are defined through the matrix realisation


def _peri_product(d1: Diagram, d2: Diagram) -> tuple[Diagram, int]:
    from .oracle import periplectic_product

    return periplectic_product(d1, d2)


def _peri_tensor_sign(d1: Diagram, d2: Diagram) -> int:
    from .oracle import periplectic_tensor_sign

    return periplectic_tensor_sign(d1, d2)


def diagram_product(params: AlgebraParams, d1: Diagram, d2: Diagram) -> tuple[Diagram, Fraction]:
    """d1 ∘ d2 as (diagram, scalar)."""
    if params.flavor is Flavor.PERIPLECTIC:
        d, sign = _peri_product(d1, d2)
        return d, Fraction(sign)
    d, loops = compose(d1, d2)
    return d, params.loop_value(loops)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Morphism:
    params: AlgebraParams
    source: Row
    target: Row
    terms: Mapping[Diagram, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, c in self.terms.items():
            c = as_scalar(c)
            if c:
                if d.flavor is not self.params.flavor or d.source != self.source or d.target != self.target:
                    raise AlgebraError(f"{d} does not match the morphism shape")
                clean[d] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: kv[0].blocks)))

    # constructors --------------------------------------------------------
    @classmethod
    def of(cls, params: AlgebraParams, d: Diagram, coeff=1) -> "Morphism":
        return cls(params, d.source, d.target, {d: as_scalar(coeff)})

    @classmethod
    def zero(cls, params: AlgebraParams, source: Row, target: Row) -> "Morphism":
        return cls(params, source, target, {})

    @classmethod
    def one(cls, params: AlgebraParams, row: Row) -> "Morphism":
        return cls.of(params, identity(row, params.flavor))

    @classmethod
    def from_vector(cls, params, source, target, basis: Sequence[Diagram], vec) -> "Morphism":
        return cls(params, source, target, {d: as_scalar(c) for d, c in zip(basis, vec) if c})

    # structure -----------------------------------------------------------
    @property
    def shape(self):
        return (self.source, self.target)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, d: Diagram) -> Fraction:
        return self.terms.get(d, Fraction(0))

    def vector(self, basis: Sequence[Diagram]) -> list[Fraction]:
        vec = [self.terms.get(d, Fraction(0)) for d in basis]
        if sum(1 for c in vec if c) != len(self.terms):
            raise AlgebraError("morphism has terms outside the given basis")
        return vec

    def _check(self, other: "Morphism"):
        if self.params != other.params or self.shape != other.shape:
            raise AlgebraError("morphisms differ in parameters or shape")

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.params == other.params and self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((self.params, self.source, self.target, tuple(self.terms.items())))

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, 0) + c
        return Morphism(self.params, self.source, self.target, out)

    def __neg__(self) -> "Morphism":
        return Morphism(self.params, self.source, self.target, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, s) -> "Morphism":
        s = as_scalar(s)
        return Morphism(self.params, self.source, self.target, {d: s * c for d, c in self.terms.items()})

    def __rmul__(self, s) -> "Morphism":
        return self.scale(s)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return multiply(self, other)

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "shape": {"source": _row_json(self.source), "target": _row_json(self.target)},
            "terms": [{"diagram": d.to_json(), "coeff": str(c)} for d, c in self.terms.items()],
        }

    def __repr__(self):
        inner = " + ".join(f"{c}*{list(d.blocks)}" for d, c in self.terms.items()) or "0"
        return f"Morphism({self.source}->{self.target}: {inner})"


def _row_json(row):
    return list(row) if isinstance(row, tuple) else row


def multiply(f: Morphism, g: Morphism) -> Morphism:
    """f ∘ g (g applied first)."""
    if f.params != g.params:
        raise AlgebraError("cannot multiply morphisms with different parameters")
    if g.target != f.source:
        raise AlgebraError(f"shapes not composable: {g.shape} then {f.shape}")
    out: dict[Diagram, Fraction] = {}
    for d1, c1 in f.terms.items():
        for d2, c2 in g.terms.items():
            d, s = diagram_product(f.params, d1, d2)
            if s:
                out[d] = out.get(d, 0) + c1 * c2 * s
    return Morphism(f.params, g.source, f.target, out)


def tensor_morphisms(f: Morphism, g: Morphism) -> Morphism:
    if f.params != g.params:
        raise AlgebraError("cannot tensor morphisms with different parameters")
    out: dict[Diagram, Fraction] = {}
    peri = f.params.flavor is Flavor.PERIPLECTIC
    for d1, c1 in f.terms.items():
        for d2, c2 in g.terms.items():
            d = tensor(d1, d2)
            s = _peri_tensor_sign(d1, d2) if peri else 1
            out[d] = out.get(d, 0) + c1 * c2 * s
    src = tensor(identity(f.source, f.params.flavor), identity(g.source, f.params.flavor)).source
    tgt = tensor(identity(f.target, f.params.flavor), identity(g.target, f.params.flavor)).source
    return Morphism(f.params, src, tgt, out)


def star_morphism(f: Morphism) -> Morphism:
    if f.params.flavor is Flavor.PERIPLECTIC:
        raise AlgebraError("no sign-free reflection for periplectic morphisms")
    return Morphism(f.params, f.target, f.source, {star(d): c for d, c in f.terms.items()})


# ---------------------------------------------------------------------------
# trace and negligible morphisms


def closure_components(d: Diagram) -> int:
    """Components after joining source strand p to target strand p."""
    if d.source != d.target:
        raise AlgebraError("trace needs an endomorphism")
    a = d.a
    parent = list(range(2 * a))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for blk in d.blocks:
        for y in blk[1:]:
            parent[find(y)] = find(blk[0])
    for p in range(a):
        parent[find(a + p)] = find(p)
    return len({find(x) for x in range(2 * a)})


def _require_braided(params: AlgebraParams):
    if params.flavor is Flavor.PERIPLECTIC:
        raise AlgebraError("no trace form for the periplectic flavour (odd form, no even braiding)")


def trace(f: Morphism) -> Fraction:
    _require_braided(f.params)
    return sum((c * f.params.loop_value(closure_components(d)) for d, c in f.terms.items()), Fraction(0))


def pairing_matrix(params: AlgebraParams, a: Row, b: Row):
    """(left, right, P) with P[i][j] = tr(right[j] ∘ left[i]) for left: a -> b, right: b -> a."""
    _require_braided(params)
    left = enumerate_diagrams(a, b, params.flavor)
    right = enumerate_diagrams(b, a, params.flavor)
    rows = []
    for d in left:
        row = []
        for e in right:
            c, loops = compose(e, d)
            row.append(params.loop_value(loops + closure_components(c)))
        rows.append(row)
    return left, right, rows


def negligible_dim(params: AlgebraParams, a: Row, b: Row) -> int:
    left, right, P = pairing_matrix(params, a, b)
    if not left or not right:
        return len(left)
    return len(left) - linalg.rank(P, len(right))


def negligible_subspace(params: AlgebraParams, a: Row, b: Row) -> "Subspace":
    """The radical of the trace pairing as a subspace of Hom(a, b)."""
    left, right, P = pairing_matrix(params, a, b)
    n = len(left)
    if not right:
        vecs = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    else:
        # x is negligible iff x^T P = 0
        vecs = linalg.nullspace([list(col) for col in zip(*P)], n)
    return Subspace.from_vectors(params, a, b, left, vecs)


# ---------------------------------------------------------------------------
# subspaces and ideals


@dataclass
class Subspace:
    params: AlgebraParams
    source: Row
    target: Row
    basis: list[Diagram]
    rows: list[list[Fraction]]
    pivots: list[int]

    @classmethod
    def from_vectors(cls, params, source, target, basis, vectors) -> "Subspace":
        vectors = [v for v in vectors if any(v)]
        if not vectors:
            return cls(params, source, target, list(basis), [], [])
        R, piv = linalg.rref(vectors, len(basis))
        return cls(params, source, target, list(basis), R, piv)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def shape(self):
        return (self.source, self.target)

    @cached_property
    def _annihilator(self) -> list[list[int]]:
        return [linalg.integer_row(z) for z in linalg.nullspace(self.rows, len(self.basis))] if self.rows else None

    def contains(self, f: Morphism | Sequence) -> bool:
        vec = f.vector(self.basis) if isinstance(f, Morphism) else list(f)
        if not any(vec):
            return True
        if not self.rows:
            return False
        return linalg.in_span(self._annihilator, vec)

    def morphisms(self) -> list[Morphism]:
        return [Morphism.from_vector(self.params, self.source, self.target, self.basis, r) for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.params == other.params and self.shape == other.shape
                and self.basis == other.basis and self.rows == other.rows)

    def to_json(self) -> dict:
        return {"dim": self.dim, "shape": {"source": _row_json(self.source), "target": _row_json(self.target)},
                "params": self.params.to_json()}


def algebra_generators(params: AlgebraParams, row: Row) -> list[Diagram]:
    """Diagrams generating End(row) as a unital algebra."""
    flavor = params.flavor
    n = row_size(row)
    gens: list[Diagram] = []
    if flavor is Flavor.PARTITION:
        for i in range(n):
            gens.append(elementary("p", i, row, flavor))
        for i in range(n - 1):
            gens += [elementary("s", i, row, flavor), elementary("b", i, row, flavor)]
        return gens
    for i in range(n - 1):
        if flavor is Flavor.WALLED:
            if row[i] == row[i + 1]:
                gens.append(elementary("s", i, row, flavor))
            else:
                gens.append(elementary("e", i, row, flavor))
            continue
        if flavor is not Flavor.TL:
            gens.append(elementary("s", i, row, flavor))
        gens.append(elementary("e", i, row, flavor))
    return gens


class EndAlgebra:
    """End(row) with its enumerated diagram basis and exact vector arithmetic."""

    def __init__(self, params: AlgebraParams, row: Row):
        self.params, self.row = params, row
        self.basis = enumerate_diagrams(row, row, params.flavor, max_dots=2 * row_size(row))
        self.index = {d: i for i, d in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _integral_delta(self) -> int:
        d = self.params.delta
        if d.denominator != 1:
            raise AlgebraError("ideal closure needs an integral loop value")
        return int(d)

    def monomial_map(self, g: Diagram, side: str) -> linalg.MonomialMap:
        """Left (g ∘ x) or right (x ∘ g) multiplication as a monomial map."""
        self._integral_delta()
        targets, coeffs = [], []
        for x in self.basis:
            d, s = diagram_product(self.params, g, x) if side == "left" else diagram_product(self.params, x, g)
            targets.append(self.index[d])
            coeffs.append(int(s))
        return targets, coeffs

    def generator_maps(self) -> list[linalg.MonomialMap]:
        gens = algebra_generators(self.params, self.row)
        return [self.monomial_map(g, "left") for g in gens] + [self.monomial_map(g, "right") for g in gens]

    def morphism(self, vec) -> Morphism:
        return Morphism.from_vector(self.params, self.row, self.row, self.basis, vec)

    def vector(self, f: Morphism) -> list[Fraction]:
        return f.vector(self.basis)

    def ideal(self, generators: Iterable[Morphism]) -> Subspace:
        seeds = [linalg.integer_row(self.vector(f)) for f in generators]
        basis = linalg.span_closure(seeds, self.generator_maps(), self.dim)
        return Subspace.from_vectors(self.params, self.row, self.row, self.basis, basis)


def two_sided_ideal(generators: list[Morphism], shape, params: AlgebraParams | None = None) -> Subspace:
    """Smallest two-sided ideal of End(row) containing the generators."""
    source, target = shape
    if source != target:
        raise AlgebraError("two-sided ideals live in endomorphism algebras")
    if params is None:
        if not generators:
            raise AlgebraError("parameters are needed when there are no generators")
        params = generators[0].params
    for f in generators:
        if f.shape != (source, target) or f.params != params:
            raise AlgebraError("generator shape or parameters mismatch")
    return EndAlgebra(params, source).ideal(generators)


def tensor_ideal_truncation(F: Morphism, r: int) -> Subspace:
    """Two-sided ideal of F ⊗ I^{r - r0} inside End(r)."""
    r0 = row_size(F.source)
    if F.source != F.target:
        raise AlgebraError("F must be an endomorphism")
    if F.params.flavor is Flavor.WALLED:
        raise AlgebraError("walled truncation needs an explicit colour word")
    if r < r0:
        raise AlgebraError(f"rank {r} is below the generator's rank {r0}")
    pad = Morphism.one(F.params, r - r0)
    G = tensor_morphisms(F, pad)
    return two_sided_ideal([G], (r, r))


# ---------------------------------------------------------------------------
# annihilation, Jones-Wenzl, quasi-idempotents


def non_propagating_basis(params: AlgebraParams, row: Row) -> list[Diagram]:
    """Endomorphism diagrams with at least one cup (equivalently one cap)."""
    n = row_size(row)
    return [d for d in enumerate_diagrams(row, row, params.flavor) if propagating_number(d) < n]


def annihilated_by_cups_caps(f: Morphism) -> bool:
    if not f.params.flavor.is_matching:
        raise AlgebraError("cup/cap annihilation is for matching flavours")
    if f.source != f.target:
        raise AlgebraError("square shape required")
    for d in non_propagating_basis(f.params, f.source):
        m = Morphism.of(f.params, d)
        if not multiply(m, f).is_zero() or not multiply(f, m).is_zero():
            return False
    return True


def is_quasi_idempotent(f: Morphism) -> tuple[bool, Fraction | None]:
    if f.source != f.target:
        raise AlgebraError("square shape required")
    if f.is_zero():
        return True, Fraction(0)
    sq = multiply(f, f)
    d, c = next(iter(f.terms.items()))
    alpha = sq.coeff(d) / c
    if sq == f.scale(alpha):
        return True, alpha
    return False, None


def annihilating_element(params: AlgebraParams, row: Row) -> Morphism:
    """The unique f = 1 + (non-identity terms) killed by every cup/cap diagram."""
    basis = enumerate_diagrams(row, row, params.flavor)
    one = identity(row, params.flavor)
    others = [d for d in basis if d != one]
    index = {d: i for i, d in enumerate(basis)}
    probes = non_propagating_basis(params, row)
    # unknowns: coefficients of `others`, then the identity coefficient
    equations = []
    for x in probes:
        for side in ("left", "right"):
            eq = [[Fraction(0)] * (len(others) + 1) for _ in basis]
            for k, d in enumerate(others + [one]):
                prod, s = diagram_product(params, x, d) if side == "left" else diagram_product(params, d, x)
                if s:
                    eq[index[prod]][k] += s
            equations.extend(e for e in eq if any(e))
    n = len(others) + 1
    ker = linalg.nullspace(equations, n) if equations else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if not any(v[-1] for v in ker):
        raise AlgebraError("no annihilated element with identity coefficient 1")
    if len(ker) != 1:
        raise AlgebraError("annihilated element is not unique")
    v = ker[0]
    v = [c / v[-1] for c in v]
    terms = {d: c for d, c in zip(others + [one], v)}
    return Morphism(params, row, row, terms)


def jones_wenzl(l: int, delta) -> tuple[Morphism, Fraction]:
    """Quasi-idempotent of TL_{l-1}(δ) killed by all cups and caps, with α in f² = αf."""
    if l < 2:
        raise AlgebraError("l must be at least 2")
    params = AlgebraParams(Flavor.TL, delta)
    f = annihilating_element(params, l - 1)
    ok, alpha = is_quasi_idempotent(f)
    if not ok:
        raise AlgebraError("annihilated element is not quasi-idempotent")
    return f, alpha
