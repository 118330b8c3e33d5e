"""Exact rank, nullspace and span computations over Q.

Two engines share one interface:

* a pure-Python integer-preserving Gauss-Jordan elimination on sparse rows,
  used for small systems and as the reference in tests;
* a multimodular engine: row reduction modulo 62-bit primes (python-flint),
  Chinese remaindering plus rational reconstruction, then an exact check
  that the reconstructed kernel really is annihilated.  A kernel of dimension
  ``n - rank_p`` that passes the exact check proves ``rank_Q = rank_p``, so
  nothing returned by this module is probabilistic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from flint import nmod_mat

PRIMES = (
    4611686018427387847, 4611686018427387817, 4611686018427387787, 4611686018427387761,
    4611686018427387751, 4611686018427387737, 4611686018427387733, 4611686018427387709,
    4611686018427387701, 4611686018427387631, 4611686018427387617, 4611686018427387587,
    4611686018427387461, 4611686018427387421, 4611686018427387409, 4611686018427387329,
)

# below this many matrix entries the pure-Python engine is used
SMALL_ENTRIES = 20_000
INT64_SAFE = 1 << 62


class CertificationError(RuntimeError):
    """Raised if exact verification fails for every available prime."""


# ---------------------------------------------------------------------------
# conversions


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def integer_row(row: Sequence) -> list[int]:
    """Scale a rational row to a primitive integer row (same span)."""
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = _lcm(den, x.denominator)
    ints = [int(x * den) for x in row] if den != 1 else [int(x) for x in row]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def _as_int_rows(rows) -> list[list[int]]:
    if sp.issparse(rows):
        rows = rows.toarray()
    if isinstance(rows, np.ndarray):
        return [[int(x) for x in r] for r in rows.tolist()]
    return [integer_row(r) for r in rows]


def _ncols(rows, ncols):
    if ncols is not None:
        return ncols
    if sp.issparse(rows) or isinstance(rows, np.ndarray):
        return rows.shape[1]
    return len(rows[0]) if len(rows) else 0


# ---------------------------------------------------------------------------
# pure-Python engine


def _rref_small(rows: list[list[int]], ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Gauss-Jordan with integer rows; normalises to Fractions at the end."""
    work = []
    for r in rows:
        d = {j: x for j, x in enumerate(r) if x}
        if d:
            work.append(d)
    pivots: list[int] = []
    done: list[dict[int, int]] = []
    for col in range(ncols):
        piv = None
        for idx, r in enumerate(work):
            if col in r:
                if piv is None or len(r) < len(work[piv]):
                    piv = idx
        if piv is None:
            continue
        prow = work.pop(piv)
        pv = prow[col]
        for group in (work, done):
            for idx, r in enumerate(group):
                c = r.get(col)
                if not c:
                    continue
                new = {j: pv * x for j, x in r.items()}
                for j, x in prow.items():
                    v = new.get(j, 0) - c * x
                    if v:
                        new[j] = v
                    else:
                        new.pop(j, None)
                g = 0
                for x in new.values():
                    g = gcd(g, x)
                if g > 1:
                    new = {j: x // g for j, x in new.items()}
                group[idx] = new
        work = [r for r in work if r]
        done.append(prow)
        pivots.append(col)
    out = []
    for col, r in zip(pivots, done):
        pv = r[col]
        out.append({j: Fraction(x, pv) for j, x in r.items()})
    return out, pivots


# ---------------------------------------------------------------------------
# modular engine


def _nmod(rows: list[list[int]], ncols: int, p: int) -> nmod_mat:
    flat = [x for r in rows for x in r]
    return nmod_mat(len(rows), ncols, flat, p)


def _mod_rref(rows: list[list[int]], ncols: int, p: int):
    """(rank, pivots, R) for the RREF of rows modulo p."""
    if not rows or ncols == 0:
        return 0, [], None
    R, rank = _nmod(rows, ncols, p).rref()
    pivots = []
    j = 0
    for i in range(rank):
        while int(R[i, j]) == 0:
            j += 1
        pivots.append(j)
        j += 1
    return rank, pivots, R


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Find n/d ≡ a (mod m) with |n|, d <= sqrt(m/2), or None."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _crt_pair(a1: int, m1: int, a2: int, m2: int) -> int:
    # m1, m2 coprime
    t = ((a2 - a1) * pow(m1, -1, m2)) % m2
    return a1 + m1 * t


class _Reconstructor:
    """Accumulates RREF entries (pivot rows x chosen columns) across primes."""

    def __init__(self, rows: list[list[int]], ncols: int, columns_of):
        self.rows, self.ncols, self.columns_of = rows, ncols, columns_of
        self.key = None
        self.values: list[list[int]] = []
        self.modulus = 1

    def feed(self, p: int):
        rank, pivots, R = _mod_rref(self.rows, self.ncols, p)
        key = (rank, [-x for x in pivots])
        cols = self.columns_of(pivots)
        vals = [[int(R[i, c]) for c in cols] for i in range(rank)] if rank else []
        if self.key is None or key > self.key:
            self.key, self.pivots, self.cols = key, pivots, cols
            self.values, self.modulus = vals, p
        elif key == self.key:
            self.values = [[_crt_pair(x, self.modulus, y, p) for x, y in zip(r1, r2)]
                           for r1, r2 in zip(self.values, vals)]
            self.modulus *= p

    def reconstruct(self) -> list[list[Fraction]] | None:
        out = []
        m = self.modulus
        for r in self.values:
            row = []
            for x in r:
                f = rational_reconstruct(x, m)
                if f is None:
                    return None
                row.append(f)
            out.append(row)
        return out


def _max_abs(rows) -> int:
    return max((abs(x) for r in rows for x in r), default=0)


def product_is_zero(A_rows: list[list[int]], Z_cols: list[list[int]]) -> bool:
    """Exact test of A @ Z == 0 for integer matrices (Z given by columns).

    Every entry of A @ Z is bounded by B = max_row_l1(A) * max|Z|, so checking
    modulo primes whose product exceeds 2B decides the question exactly.
    """
    if not A_rows or not Z_cols:
        return True
    ncols = len(Z_cols[0])
    l1 = max(sum(abs(x) for x in r) for r in A_rows)
    bound = l1 * _max_abs(Z_cols)
    if bound == 0:
        return True
    if bound < INT64_SAFE and max(l1, _max_abs(Z_cols)) < INT64_SAFE:
        A = np.array(A_rows, dtype=np.int64)
        Z = np.array(Z_cols, dtype=np.int64).T
        if A.size * Z.shape[1] <= 4 * 10**8:
            return not np.any(A @ Z)
    modulus = 1
    for p in PRIMES:
        A = _nmod(A_rows, ncols, p)
        Z = _nmod(Z_cols, ncols, p).transpose()
        prod = A * Z
        if any(int(x) for x in prod.entries()):
            return False
        modulus *= p
        if modulus > 2 * bound:
            return True
    raise CertificationError("prime budget too small for the product bound")


def sparse_product_is_zero(A: sp.spmatrix, Z_cols: list[list[int]]) -> bool:
    """A @ Z == 0 for a sparse integer matrix A, exactly."""
    if not Z_cols:
        return True
    A = sp.csr_matrix(A)
    l1 = int(abs(A).sum(axis=1).max()) if A.nnz else 0
    bound = l1 * _max_abs(Z_cols)
    if bound < INT64_SAFE:
        Z = np.array(Z_cols, dtype=np.int64).T
        return not np.any(A.astype(np.int64) @ Z)
    # rare: fall back to Python integers, column by column
    indptr, indices, data = A.indptr, A.indices, A.data.tolist()
    for z in Z_cols:
        for i in range(A.shape[0]):
            s = 0
            for k in range(indptr[i], indptr[i + 1]):
                s += int(data[k]) * z[indices[k]]
            if s:
                return False
    return True


# ---------------------------------------------------------------------------
# public API


def rref(rows, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q: (nonzero rows, pivot columns)."""
    ncols = _ncols(rows, ncols)
    A = _as_int_rows(rows)
    A = [r for r in A if any(r)]
    if not A:
        return [], []
    if len(A) * ncols <= SMALL_ENTRIES:
        R, piv = _rref_small(A, ncols)
        return [[r.get(j, Fraction(0)) for j in range(ncols)] for r in R], piv
    # RREF rows are rational; certify them against the row space
    rec = _Reconstructor(A, ncols, lambda pivots: range(ncols))
    Z = None
    for p in PRIMES:
        rec.feed(p)
        cand = rec.reconstruct()
        if cand is None:
            continue
        if Z is None:
            Z = nullspace(A, ncols)
        Zi = [integer_row(z) for z in Z]
        Ci = [integer_row(r) for r in cand]
        if len(cand) + len(Z) == ncols and product_is_zero(Ci, Zi):
            return cand, list(rec.pivots)
    raise CertificationError("could not certify an RREF")


def nullspace(rows, ncols: int | None = None) -> list[list[Fraction]]:
    """Canonical basis of {x : A x = 0}: one vector per free column, x_free = 1."""
    ncols = _ncols(rows, ncols)
    A = _as_int_rows(rows)
    A = [r for r in A if any(r)]
    if not A:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    if len(A) * ncols <= SMALL_ENTRIES:
        R, pivots = _rref_small(A, ncols)
        return _kernel_from_rref([[r.get(f, 0) for f in _free(pivots, ncols)] for r in R], pivots, ncols)

    def free_cols(pivots):
        return _free(pivots, ncols)

    rec = _Reconstructor(A, ncols, free_cols)
    for p in PRIMES:
        rec.feed(p)
        if rec.key[0] == ncols:
            return []
        vals = rec.reconstruct()
        if vals is None:
            continue
        basis = _kernel_from_rref(vals, rec.pivots, ncols)
        if product_is_zero(A, [integer_row(z) for z in basis]):
            return basis
    raise CertificationError("could not certify a nullspace")


def _free(pivots, ncols):
    ps = set(pivots)
    return [j for j in range(ncols) if j not in ps]


def _kernel_from_rref(vals, pivots, ncols) -> list[list[Fraction]]:
    """vals[i][k] = RREF entry in pivot row i, k-th free column."""
    free = _free(pivots, ncols)
    basis = []
    for k, f in enumerate(free):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x = vals[i][k]
            if x:
                v[pc] = -Fraction(x)
        basis.append(v)
    return basis


def rank(rows, ncols: int | None = None) -> int:
    ncols = _ncols(rows, ncols)
    A = _as_int_rows(rows)
    A = [r for r in A if any(r)]
    if not A:
        return 0
    if len(A) * ncols <= SMALL_ENTRIES:
        return len(_rref_small(A, ncols)[1])
    r_p, _, _ = _mod_rref(A, ncols, PRIMES[0])
    if r_p == min(len(A), ncols):
        return r_p  # the rank mod p never exceeds the rank over Q
    return ncols - len(nullspace(A, ncols))


def independent_rows_mod(rows: list[list[int]], ncols: int, p: int = PRIMES[0]) -> list[int]:
    """Indices of a greedy maximal independent subset of rows, computed mod p.

    Used only for discovery; callers certify the result exactly.
    """
    if not rows:
        return []
    At = _nmod(rows, ncols, p).transpose()
    R, rk = At.rref()
    out = []
    j = 0
    for i in range(rk):
        while int(R[i, j]) == 0:
            j += 1
        out.append(j)
        j += 1
    return out


MonomialMap = tuple  # (targets: list[int], coeffs: list[int]) describing e_i -> coeffs[i] * e_{targets[i]}


def apply_monomial(m: MonomialMap, v: Sequence[int], n: int) -> list[int]:
    targets, coeffs = m
    out = [0] * n
    for i, x in enumerate(v):
        if x:
            c = coeffs[i]
            if c:
                out[targets[i]] += c * x
    return out


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        v = [x // g for x in v]
    for x in v:
        if x:
            if x < 0:
                v = [-y for y in v]
            break
    return v


def span_closure(seeds: list[list[int]], maps: list[MonomialMap], n: int,
                 on_round: Callable[[int, int], None] | None = None,
                 certify: bool = True) -> list[list[int]]:
    """Smallest subspace containing seeds and stable under every map.

    Discovery runs breadth first with modular independence tests; the final
    basis (exact integer vectors) is then certified: each map image of each
    basis vector is checked exactly to lie in the span, and any failure is
    added and the loop resumed.
    """
    basis: list[list[int]] = []
    frontier = [_primitive(list(s)) for s in seeds if any(s)]
    rounds = 0
    while True:
        while frontier:
            keep = independent_rows_mod(basis + frontier, n)
            new_idx = [i - len(basis) for i in keep if i >= len(basis)]
            new = [frontier[i] for i in new_idx]
            basis.extend(new)
            rounds += 1
            if on_round:
                on_round(rounds, len(basis))
            frontier = []
            for v in new:
                for m in maps:
                    w = apply_monomial(m, v, n)
                    if any(w):
                        frontier.append(_primitive(w))
            if len(basis) == n:
                frontier = []
        if not certify or not basis or len(basis) == n:
            return basis
        missing = _uncertified_images(basis, maps, n)
        if not missing:
            return basis
        frontier = missing


def _uncertified_images(basis: list[list[int]], maps: list[MonomialMap], n: int) -> list[list[int]]:
    Z = [integer_row(z) for z in nullspace(basis, n)]
    if len(Z) != n - len(basis):
        # basis was not independent over Q; rebuild it exactly
        raise CertificationError("discovered basis is dependent over Q")
    if not Z:
        return []
    missing = []
    for m in maps:
        imgs = [apply_monomial(m, v, n) for v in basis]
        if product_is_zero(imgs, Z):
            continue
        for w in imgs:
            if not product_is_zero([w], Z):
                missing.append(_primitive(w))
    return missing


def in_span(basis_nullspace: list[list[int]], v: Sequence) -> bool:
    """Membership test given an integer basis of the annihilator of the span."""
    return product_is_zero([integer_row(v)], basis_nullspace)
