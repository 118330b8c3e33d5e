"""Find a single generator of ker φ at the critical rank and test it."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import (
    EndAlgebra,
    Morphism,
    is_quasi_idempotent,
    non_propagating_basis,
    tensor_ideal_truncation,
)
from .oracle import DEFAULT_BUDGET_MB, RepSpec, phi


def _int_vectors(vectors, n: int) -> np.ndarray:
    return np.array([linalg.integer_row(v) for v in vectors], dtype=object).reshape(len(vectors), n)


class _Products:
    """Vector multiplication in End(row) through per-diagram monomial maps."""

    def __init__(self, alg: EndAlgebra):
        self.alg = alg
        self._left: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def _map(self, i: int):
        if i not in self._left:
            t, c = self.alg.monomial_map(self.alg.basis[i], "left")
            self._left[i] = (np.array(t), np.array(c, dtype=object))
        return self._left[i]

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros(len(y), dtype=object)
        for i in np.nonzero(x)[0]:
            t, c = self._map(int(i))
            np.add.at(out, t, c * y * x[i])
        return out


def annihilated_subspace(alg: EndAlgebra, vectors: np.ndarray) -> np.ndarray:
    """Combinations of the given rows killed on both sides by every cup/cap diagram."""
    k = len(vectors)
    if k == 0:
        return vectors
    eqs = []
    for d in non_propagating_basis(alg.params, alg.row):
        for side in ("left", "right"):
            t, c = alg.monomial_map(d, side)
            imgs = np.zeros((len(alg.basis), k), dtype=object)
            for col, v in enumerate(vectors):
                np.add.at(imgs[:, col], t, np.array(c, dtype=object) * v)
            eqs.extend(list(row) for row in imgs if any(row))
    if not eqs:
        return vectors
    coeffs = linalg.nullspace(eqs, k)
    out = [linalg.integer_row([sum(c * v for c, v in zip(z, col)) for col in vectors.T]) for z in coeffs]
    return np.array(out, dtype=object).reshape(len(out), vectors.shape[1])


def unit_of(prod: _Products, A: np.ndarray) -> list[Fraction] | None:
    """Coefficients e with (Σ e_i A_i) · A_j = A_j = A_j · (Σ e_i A_i), if they exist."""
    a = len(A)
    if a == 0:
        return None
    table = [[prod.product(A[i], A[j]) for j in range(a)] for i in range(a)]
    rows = []
    for j in range(a):
        for side in ("left", "right"):
            cols = [table[i][j] if side == "left" else table[j][i] for i in range(a)]
            for pos in range(A.shape[1]):
                row = [cols[i][pos] for i in range(a)] + [-A[j][pos]]
                if any(row):
                    rows.append(row)
    sols = linalg.nullspace(rows, a + 1)
    hit = next((z for z in sols if z[-1]), None)
    if hit is None:
        return None
    return [c / hit[-1] for c in hit[:-1]]


@dataclass
class GeneratorResult:
    spec: RepSpec
    rank: int
    kernel_dim: int
    annihilated_dim: int
    F: Morphism | None
    unit: bool
    quasi_idempotent: bool
    alpha: Fraction | None
    generated_dim: int

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "r": self.rank,
            "kernel_dim": self.kernel_dim,
            "annihilated_dim": self.annihilated_dim,
            "F_terms": len(self.F.terms) if self.F else 0,
            "F_is_unit_of_annihilated_part": self.unit,
            "quasi_idempotent": self.quasi_idempotent,
            "alpha": None if self.alpha is None else str(self.alpha),
            "ideal_dim_at_r": self.generated_dim,
        }


def find_generator(spec: RepSpec, r: int, budget_mb: float = DEFAULT_BUDGET_MB, cache=None) -> GeneratorResult:
    res = phi(spec, r, with_kernel=True, budget_mb=budget_mb, cache=cache)
    alg = EndAlgebra(spec.params, res.row)
    if alg.basis != res.basis:
        raise AssertionError("diagram bases disagree")
    K = _int_vectors(res.kernel, len(alg.basis))
    A = annihilated_subspace(alg, K)
    F, unit = None, False
    if len(A):
        e = unit_of(_Products(alg), A)
        unit = e is not None
        if e is None:
            e = [Fraction(i + 1) for i in range(len(A))]
        vec = [sum((c * int(v) for c, v in zip(e, col)), Fraction(0)) for col in A.T]
        F = alg.morphism(vec)
    ok, alpha = is_quasi_idempotent(F) if F is not None else (False, None)
    ok = ok and alpha is not None and alpha != 0
    generated = alg.ideal([F]).dim if F is not None else 0
    return GeneratorResult(spec, r, res.kernel_dim, len(A), F, unit, ok, alpha if ok else None, generated)


def truncation_dim(F: Morphism, r: int) -> int:
    return tensor_ideal_truncation(F, r).dim
