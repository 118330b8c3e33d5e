"""Matrix realisations of diagrams on tensor powers of (super) vector spaces.

Basis conventions: even basis vectors come first, then odd ones.  A tensor
word (i_1, ..., i_r) has index sum(i_k * D**(r-k)), the leftmost factor being
most significant.  Operators are integer scipy CSR matrices (every entry that
occurs is an integer, so int64 is exact; overflow is guarded by bounds).

Sign rule: (f ⊗ g)(v ⊗ w) = (-1)^{|g||v|} f(v) ⊗ g(w); the crossing is the
graded swap v ⊗ w -> (-1)^{|v||w|} w ⊗ v.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from . import linalg
from .algebra import AlgebraParams, Morphism
from .cache import Cache
from .diagrams import (
    Diagram,
    Flavor,
    Row,
    compose,
    diagram_stats,
    enumerate_diagrams,
    row_size,
    signature,
    slice_decomposition,
    tensor,
)

DEFAULT_BUDGET_MB = 4096


class OracleError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, needed_mb: float, budget_mb: float):
        super().__init__(f"estimated {needed_mb:.0f} MB exceeds the {budget_mb:.0f} MB budget")
        self.needed_mb, self.budget_mb = needed_mb, budget_mb


@dataclass(frozen=True)
class RepSpec:
    """Which natural representation realises the diagrams.

    kind "O": V = k^{m|2n} with an even supersymmetric form;
    kind "GL": V = k^{m|n} and its dual W;
    kind "P": V = k^{n|n} with an odd symmetric form;
    kind "S": the permutation module k^t of the symmetric group.
    """

    kind: str
    m: int = 0
    n: int = 0
    t: int = 0

    @classmethod
    def O(cls, m: int, n: int = 0) -> "RepSpec":
        return cls("O", m=m, n=n)

    @classmethod
    def GL(cls, m: int, n: int = 0) -> "RepSpec":
        return cls("GL", m=m, n=n)

    @classmethod
    def P(cls, n: int) -> "RepSpec":
        return cls("P", n=n)

    @classmethod
    def S(cls, t: int) -> "RepSpec":
        return cls("S", t=t)

    def __post_init__(self):
        if self.kind not in ("O", "GL", "P", "S"):
            raise OracleError(f"unknown representation kind {self.kind!r}")
        if min(self.m, self.n, self.t) < 0:
            raise OracleError("dimensions must be nonnegative")
        if self.kind == "S" and self.t < 1:
            raise OracleError("the permutation module needs t >= 1")
        if self.kind == "P" and self.n < 1:
            raise OracleError("the periplectic space needs n >= 1")

    @property
    def flavor(self) -> Flavor:
        return {"O": Flavor.BRAUER, "GL": Flavor.WALLED, "P": Flavor.PERIPLECTIC, "S": Flavor.PARTITION}[self.kind]

    @property
    def delta(self) -> int:
        return {"O": self.m - 2 * self.n, "GL": self.m - self.n, "P": 0, "S": self.t}[self.kind]

    @property
    def params(self) -> AlgebraParams:
        return AlgebraParams(self.flavor, self.delta)

    @property
    def dim(self) -> int:
        return {"O": self.m + 2 * self.n, "GL": self.m + self.n, "P": 2 * self.n, "S": self.t}[self.kind]

    @property
    def parities(self) -> tuple[int, ...]:
        if self.kind == "O":
            return (0,) * self.m + (1,) * (2 * self.n)
        if self.kind == "GL":
            return (0,) * self.m + (1,) * self.n
        if self.kind == "P":
            return (0,) * self.n + (1,) * self.n
        return (0,) * self.t

    @property
    def form_kind(self) -> str:
        if self.kind == "O":
            return "symmetric" if self.n == 0 else ("symplectic" if self.m == 0 else "even-supersymmetric")
        return {"GL": "none", "P": "odd-symmetric", "S": "none"}[self.kind]

    @property
    def form_parity(self) -> int:
        return 1 if self.kind == "P" else 0

    def to_json(self) -> dict:
        if self.kind == "S":
            return {"kind": "S", "t": self.t}
        if self.kind == "P":
            return {"kind": "P", "n": self.n}
        return {"kind": self.kind, "m": self.m, "n": self.n}

    def label(self) -> str:
        if self.kind == "O":
            return f"OSp({self.m}|{2 * self.n})"
        if self.kind == "GL":
            return f"GL({self.m}|{self.n})"
        if self.kind == "P":
            return f"Pe({self.n})"
        return f"S_{self.t}"


# ---------------------------------------------------------------------------
# forms


def _form(spec: RepSpec, left: str, right: str) -> np.ndarray:
    """Matrix of the pairing left ⊗ right -> k (V/W labels)."""
    D = spec.dim
    par = spec.parities
    if spec.kind == "O":
        beta = np.zeros((D, D), dtype=np.int64)
        for i in range(spec.m):
            beta[i, i] = 1
        n, m = spec.n, spec.m
        for i in range(n):
            beta[m + i, m + n + i] = 1
            beta[m + n + i, m + i] = -1
        return beta
    if spec.kind == "P":
        n = spec.n
        beta = np.zeros((D, D), dtype=np.int64)
        for i in range(n):
            beta[i, n + i] = 1
            beta[n + i, i] = 1
        return beta
    if spec.kind == "GL":
        if (left, right) == ("V", "W"):
            return np.diag([(-1) ** p for p in par]).astype(np.int64)
        if (left, right) == ("W", "V"):
            return np.eye(D, dtype=np.int64)
        raise OracleError(f"no pairing {left} ⊗ {right}")
    raise OracleError("the permutation module has no cup/cap generators")


def _copairing(spec: RepSpec, left: str, right: str) -> np.ndarray:
    """Coefficients C[j, k] of the cup k -> left ⊗ right.

    Fixed by the snake (cap_{right,left} ⊗ 1)(1 ⊗ cup_{left,right}) = 1, which
    with the sign rule reads  P^{|cup|} β C = I.
    """
    beta = _form(spec, right, left)
    inv = np.rint(np.linalg.inv(beta)).astype(np.int64)
    assert np.array_equal(beta @ inv, np.eye(spec.dim, dtype=np.int64))
    if spec.form_parity:
        signs = np.array([(-1) ** p for p in spec.parities], dtype=np.int64)
        inv = inv * signs[np.newaxis, :]  # β^{-1} P
    return inv


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class TensorOperator:
    """An exact integer matrix from V^{source} to V^{target}."""

    source: tuple
    target: tuple
    matrix: sp.csr_matrix
    parity: int = 0

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.source), len(self.target))

    def __matmul__(self, other: "TensorOperator") -> "TensorOperator":
        if other.target != self.source:
            raise OracleError("operator shapes do not compose")
        return TensorOperator(other.source, self.target, (self.matrix @ other.matrix).tocsr(),
                              (self.parity + other.parity) % 2)

    def equals(self, other: "TensorOperator", scale: int = 1) -> bool:
        diff = self.matrix - scale * other.matrix
        return diff.count_nonzero() == 0

    def is_zero(self) -> bool:
        return self.matrix.count_nonzero() == 0

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def factor_labels(spec: RepSpec, row: Row) -> tuple:
    if isinstance(row, tuple):
        return tuple("V" if c > 0 else "W" for c in row)
    return ("V",) * row


def _sign_vector(spec: RepSpec, nfactors: int) -> np.ndarray:
    s = np.array([(-1) ** p for p in spec.parities], dtype=np.int64)
    out = np.ones(1, dtype=np.int64)
    for _ in range(nfactors):
        out = np.kron(out, s)
    return out


def _eye(D: int, k: int) -> sp.csr_matrix:
    return sp.identity(D ** k, dtype=np.int64, format="csr")


@lru_cache(maxsize=4096)
def _local(spec: RepSpec, kind: str, labels: tuple) -> tuple[sp.csr_matrix, int]:
    D = spec.dim
    par = spec.parities
    if kind == "s":
        rows, cols, vals = [], [], []
        for i in range(D):
            for j in range(D):
                rows.append(j * D + i)
                cols.append(i * D + j)
                vals.append(-1 if par[i] and par[j] else 1)
        return sp.csr_matrix((vals, (rows, cols)), shape=(D * D, D * D), dtype=np.int64), 0
    if kind == "cap":
        beta = _form(spec, *labels)
        return sp.csr_matrix(beta.reshape(1, D * D)), spec.form_parity
    if kind == "cup":
        C = _copairing(spec, *labels)
        return sp.csr_matrix(C.reshape(D * D, 1)), spec.form_parity
    raise OracleError(f"unknown generator {kind!r}")


def elementary_operator(spec: RepSpec, kind: str, pos: int, row: Row,
                        new_colours: tuple = (1, -1)) -> TensorOperator:
    """1 ⊗ X ⊗ 1 with X a crossing, cap or cup at positions pos, pos+1 of row."""
    if spec.kind == "S":
        from .diagrams import elementary

        return rep_of_diagram(spec, elementary(kind, pos, row, Flavor.PARTITION))
    labels = factor_labels(spec, row)
    n = len(labels)
    D = spec.dim
    if kind == "cup":
        if not 0 <= pos <= n:
            raise OracleError(f"invalid cup position {pos}")
        new = factor_labels(spec, tuple(new_colours)) if isinstance(row, tuple) else ("V", "V")
        local, parity = _local(spec, "cup", new)
        left, right = pos, n - pos
        target = labels[:pos] + new + labels[pos:]
    else:
        if not 0 <= pos < n - 1:
            raise OracleError(f"invalid position {pos} for a row of {n}")
        pair = labels[pos:pos + 2]
        local, parity = _local(spec, kind, pair)
        left, right = pos, n - pos - 2
        if kind == "s":
            target = labels[:pos] + (pair[1], pair[0]) + labels[pos + 2:]
        else:
            target = labels[:pos] + labels[pos + 2:]
    if parity:
        L = sp.diags(_sign_vector(spec, left), format="csr", dtype=np.int64)
    else:
        L = _eye(D, left)
    M = sp.kron(sp.kron(L, local, format="csr"), _eye(D, right), format="csr")
    return TensorOperator(labels, target, M.astype(np.int64), parity)


def identity_operator(spec: RepSpec, row: Row) -> TensorOperator:
    labels = factor_labels(spec, row)
    return TensorOperator(labels, labels, _eye(spec.dim, len(labels)), 0)


@lru_cache(maxsize=200_000)
def rep_of_diagram(spec: RepSpec, d: Diagram) -> TensorOperator:
    if d.flavor is not spec.flavor:
        raise OracleError(f"{spec.label()} realises {spec.flavor.value} diagrams, not {d.flavor.value}")
    if spec.kind == "S":
        return _partition_operator(spec, d)
    out = identity_operator(spec, d.source)
    for s in slice_decomposition(d):
        new = s.diagram.target[s.pos:s.pos + 2] if (s.kind == "cup" and isinstance(s.row, tuple)) else (1, -1)
        out = elementary_operator(spec, s.kind, s.pos, s.row, new) @ out
    return out


def _partition_operator(spec: RepSpec, d: Diagram) -> TensorOperator:
    t = spec.t
    a, b = d.a, d.b
    block_of = {}
    for k, blk in enumerate(d.blocks):
        for x in blk:
            block_of[x] = k
    rows, cols = [], []
    for vals in product(range(t), repeat=len(d.blocks)):
        col = 0
        for x in range(a):
            col = col * t + vals[block_of[x]]
        row = 0
        for x in range(a, a + b):
            row = row * t + vals[block_of[x]]
        rows.append(row)
        cols.append(col)
    M = sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(t ** b, t ** a))
    return TensorOperator(("V",) * a, ("V",) * b, M, 0)


def graded_kron(spec: RepSpec, f: TensorOperator, g: TensorOperator) -> TensorOperator:
    """f ⊗ g with the Koszul sign (-1)^{|g||v|}."""
    D = spec.dim
    left = sp.kron(f.matrix, _eye(D, len(g.target)), format="csr")
    if g.parity:
        signs = sp.diags(_sign_vector(spec, len(f.source)), format="csr", dtype=np.int64)
    else:
        signs = _eye(D, len(f.source))
    right = sp.kron(signs, g.matrix, format="csr")
    return TensorOperator(f.source + g.source, f.target + g.target, (left @ right).tocsr(),
                          (f.parity + g.parity) % 2)


def loop_scalar(spec: RepSpec, loops: int) -> int:
    return spec.delta ** loops


# ---------------------------------------------------------------------------
# φ: diagram algebra -> End(V^{⊗r})


def _row_for(spec: RepSpec, r) -> Row:
    if spec.kind == "GL":
        if isinstance(r, tuple) and all(c in (1, -1) for c in r):
            return r
        k, l = r
        return signature(k, l)
    if not isinstance(r, int):
        raise OracleError(f"{spec.label()} takes an integer rank")
    return r


def estimate_mb(spec: RepSpec, ndiagrams: int, r: int) -> float:
    """Sparse operator storage plus the dense Gram matrix and its modular copy."""
    return (48 * ndiagrams * spec.dim ** r + 96 * ndiagrams ** 2) / 2 ** 20


def _flattened(spec: RepSpec, diagrams: Sequence[Diagram], source_deg: int) -> sp.csr_matrix:
    """One row per diagram holding its operator flattened row-major."""
    ncols_op = spec.dim ** source_deg
    rows, cols, vals = [], [], []
    total = None
    for k, d in enumerate(diagrams):
        M = rep_of_diagram(spec, d).matrix.tocoo()
        total = M.shape[0] * M.shape[1]
        rows.append(np.full(M.nnz, k, dtype=np.int64))
        cols.append(M.row.astype(np.int64) * ncols_op + M.col)
        vals.append(M.data)
    if total is None:
        return sp.csr_matrix((0, 0), dtype=np.int64)
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(len(diagrams), total), dtype=np.int64)


@dataclass
class PhiResult:
    spec: RepSpec
    row: Row
    algebra_dim: int
    rank: int
    kernel: list[list[Fraction]] | None
    basis: list[Diagram]

    @property
    def kernel_dim(self) -> int:
        return self.algebra_dim - self.rank


def _cache_key(spec: RepSpec, row: Row, what: str) -> dict:
    return {"kind": what, "spec": spec.to_json(), "row": list(row) if isinstance(row, tuple) else row}


def phi(spec: RepSpec, r, with_kernel: bool = True, budget_mb: float = DEFAULT_BUDGET_MB,
        cache: Cache | None = None) -> PhiResult:
    """Rank (and kernel) of φ: End(row) -> End(V^{⊗row}) via the Gram matrix M M^T."""
    row = _row_for(spec, r)
    n = row_size(row)
    basis = enumerate_diagrams(row, row, spec.flavor, max_dots=2 * n)
    need = estimate_mb(spec, len(basis), n)
    if need > budget_mb:
        raise BudgetExceeded(need, budget_mb)
    key = _cache_key(spec, row, "phi")
    if cache is not None:
        hit = cache.get(key)
        if hit is not None and (hit.get("kernel") is not None or not with_kernel):
            ker = [[Fraction(x) for x in v] for v in hit["kernel"]] if hit.get("kernel") is not None else None
            return PhiResult(spec, row, hit["algebra_dim"], hit["rank"], ker, basis)
    if spec.dim == 0 and n > 0:
        ker = [[Fraction(int(i == j)) for j in range(len(basis))] for i in range(len(basis))]
        res = PhiResult(spec, row, len(basis), 0, ker, basis)
    else:
        M = _flattened(spec, basis, n)
        G = (M @ M.T).toarray()
        ker = linalg.nullspace(G, len(basis))
        # G z = 0 iff M^T z = 0 over Q; check the operators themselves as well
        if ker and not linalg.sparse_product_is_zero(M.T, [linalg.integer_row(v) for v in ker]):
            raise linalg.CertificationError("kernel vector with nonzero image")
        res = PhiResult(spec, row, len(basis), len(basis) - len(ker), ker, basis)
    if cache is not None:
        cache.put(key, {"algebra_dim": res.algebra_dim, "rank": res.rank,
                        "kernel": [[str(x) for x in v] for v in res.kernel]})
    if not with_kernel:
        res.kernel = None
    return res


def phi_rank(spec: RepSpec, r, **kw) -> int:
    return phi(spec, r, **kw).rank


def phi_kernel_basis(spec: RepSpec, r, **kw) -> list[Morphism]:
    res = phi(spec, r, **kw)
    return [Morphism.from_vector(spec.params, res.row, res.row, res.basis, v) for v in res.kernel]


def invariant_dim(spec: RepSpec, r, budget_mb: float = DEFAULT_BUDGET_MB) -> int:
    """Rank of the vectors rep(d)·1 over diagrams d of shape (0, r)."""
    row = _row_for(spec, r)
    empty_row = () if isinstance(row, tuple) else 0
    ds = enumerate_diagrams(empty_row, row, spec.flavor)
    if not ds:
        return 0
    need = estimate_mb(spec, len(ds), row_size(row))
    if need > budget_mb:
        raise BudgetExceeded(need, budget_mb)
    if spec.dim == 0:
        return 0
    M = _flattened(spec, ds, 0)
    G = (M @ M.T).toarray()
    return linalg.rank(G, len(ds))


# ---------------------------------------------------------------------------
# periplectic structure constants


def faithful_n(total_dots: int) -> int:
    """Smallest n with Hom(a, c) realised faithfully on (k^{n|n}): a + c < (n+1)(n+2)."""
    n = 1
    while total_dots >= (n + 1) * (n + 2):
        n += 1
    return n


def _solve_back(spec: RepSpec, R: TensorOperator, source: Row, target: Row) -> dict[Diagram, Fraction]:
    """Express an operator in the diagram basis by exact elimination."""
    ds = enumerate_diagrams(source, target, spec.flavor)
    M = _flattened(spec, ds, row_size(source))
    flatR = R.matrix.tocoo()
    ncols_op = spec.dim ** row_size(source)
    r = sp.csr_matrix((flatR.data, (np.zeros(flatR.nnz, dtype=np.int64), flatR.row * ncols_op + flatR.col)),
                      shape=(1, M.shape[1]), dtype=np.int64)
    aug = sp.vstack([M, -r]).T.tocsr()  # columns: diagrams, then the target
    G = (aug.T @ aug).toarray()
    ker = linalg.nullspace(G, len(ds) + 1)
    sols = [v for v in ker if v[-1]]
    if len(ker) != 1 or not sols:
        raise OracleError("operator is not uniquely a combination of diagrams")
    v = [x / sols[0][-1] for x in sols[0]]
    return {d: c for d, c in zip(ds, v[:-1]) if c}


def _peri_spec(d: Diagram) -> RepSpec:
    return RepSpec.P(faithful_n(d.a + d.b))


@lru_cache(maxsize=None)
def periplectic_product_at(n: int, d1: Diagram, d2: Diagram) -> dict[Diagram, Fraction]:
    spec = RepSpec.P(n)
    d, loops = compose(d1, d2)
    R = rep_of_diagram(spec, d1) @ rep_of_diagram(spec, d2)
    if loops:
        if not R.is_zero():
            raise OracleError("a closed periplectic loop did not evaluate to zero")
        return {}
    Rd = rep_of_diagram(spec, d)
    if R.equals(Rd, 1):
        return {d: Fraction(1)}
    if R.equals(Rd, -1):
        return {d: Fraction(-1)}
    return _solve_back(spec, R, d2.source, d1.target)


def periplectic_product(d1: Diagram, d2: Diagram) -> tuple[Diagram, int]:
    """d1 ∘ d2 in the periplectic category as (diagram, sign in {0, ±1})."""
    d, _ = compose(d1, d2)
    n = faithful_n(d.a + d.b)
    res = periplectic_product_at(n, d1, d2)
    if not res:
        return d, 0
    if len(res) != 1 or d not in res or abs(res[d]) != 1:
        raise OracleError(f"unexpected periplectic product {res}")
    return d, int(res[d])


@lru_cache(maxsize=None)
def periplectic_tensor_sign(d1: Diagram, d2: Diagram) -> int:
    """Sign s with rep(d1 ⊗ d2) = s · (rep(d1) ⊗ rep(d2)) under the Koszul rule."""
    d = tensor(d1, d2)
    spec = _peri_spec(d)
    lhs = rep_of_diagram(spec, d)
    rhs = graded_kron(spec, rep_of_diagram(spec, d1), rep_of_diagram(spec, d2))
    if lhs.equals(rhs, 1):
        return 1
    if lhs.equals(rhs, -1):
        return -1
    raise OracleError("tensor of periplectic diagrams is not ± a diagram")


def periplectic_structure_constants(r: int, n: int, cache: Cache | None = None) -> dict[tuple[Diagram, Diagram], Morphism]:
    """Products of all pairs of basis diagrams of A_r, realised on (k^{n|n})^{⊗r}."""
    if not 2 * r < (n + 1) * (n + 2):
        raise OracleError(f"n={n} does not realise A_{r} faithfully (need r < (n+1)(n+2)/2)")
    basis = enumerate_diagrams(r, r, Flavor.PERIPLECTIC)
    params = AlgebraParams(Flavor.PERIPLECTIC, 0)
    key = {"kind": "peri", "r": r, "n": n}
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return {(basis[i], basis[j]): Morphism(params, r, r, {basis[k]: Fraction(c) for k, c in terms})
                    for i, j, terms in hit}
    index = {d: i for i, d in enumerate(basis)}
    table = {}
    stored = []
    for i, d1 in enumerate(basis):
        for j, d2 in enumerate(basis):
            terms = periplectic_product_at(n, d1, d2)
            table[(d1, d2)] = Morphism(params, r, r, terms)
            stored.append([i, j, [[index[d], str(c)] for d, c in terms.items()]])
    if cache is not None:
        cache.put(key, stored)
    return table


def snake_operators(spec: RepSpec, i: int, colours: tuple | None = None) -> tuple[TensorOperator, TensorOperator]:
    """(ev_i ⊗ 1)(1 ⊗ co_i) and (1 ⊗ ev_i)(co_i ⊗ 1), built with graded_kron."""
    from .diagrams import co_diagram, ev_diagram

    flavor = spec.flavor
    ev = rep_of_diagram(spec, ev_diagram(i, flavor, colours))
    co = rep_of_diagram(spec, co_diagram(i, flavor, colours))
    if spec.kind == "GL":
        x = tuple(colours) if colours is not None else (1,) * i
        one_x = identity_operator(spec, x)
        one_dual = identity_operator(spec, tuple(-c for c in x))
    else:
        one_x = one_dual = identity_operator(spec, i)
    first = graded_kron(spec, ev, one_x) @ graded_kron(spec, one_x, co)
    second = graded_kron(spec, one_dual, ev) @ graded_kron(spec, co, one_dual)
    return first, second
