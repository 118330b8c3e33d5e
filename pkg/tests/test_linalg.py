import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tensorideals import linalg
from tensorideals.linalg import (
    nullspace,
    product_is_zero,
    rank,
    rational_reconstruct,
    rref,
    span_closure,
)

from oracles import brute_rank


def random_low_rank(m, n, r, seed, spread=3):
    rng = random.Random(seed)
    left = [[rng.randint(-spread, spread) for _ in range(r)] for _ in range(m)]
    right = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(r)]
    return [[sum(left[i][k] * right[k][j] for k in range(r)) for j in range(n)] for i in range(m)]


def matmul_zero(A, v):
    return all(sum(Fraction(a) * x for a, x in zip(row, v)) == 0 for row in A)


int_matrix = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=1, max_size=6)
)


@settings(max_examples=60)
@given(int_matrix)
def test_small_engine_matches_fraction_elimination(A):
    n = len(A[0])
    assert rank(A) == brute_rank(A)
    ker = nullspace(A)
    assert len(ker) == n - brute_rank(A)
    assert all(matmul_zero(A, v) for v in ker)


@pytest.mark.parametrize("seed", range(4))
def test_modular_engine_agrees_with_small_engine(seed, monkeypatch):
    A = random_low_rank(30, 25, 11, seed)
    small_rank, small_ker, small_rref = rank(A), nullspace(A), rref(A)
    monkeypatch.setattr(linalg, "SMALL_ENTRIES", 0)
    assert rank(A) == small_rank == 11
    assert nullspace(A) == small_ker
    assert rref(A) == small_rref


def test_modular_engine_handles_large_rationals(monkeypatch):
    # entries whose RREF needs denominators beyond one 62-bit prime
    big = 10**25
    A = [[big + 1, big, 1], [big, big - 1, 2]]
    expected = nullspace(A)
    monkeypatch.setattr(linalg, "SMALL_ENTRIES", 0)
    assert nullspace(A) == expected
    assert matmul_zero(A, expected[0])


def test_rref_is_reduced():
    A = random_low_rank(8, 10, 4, 7)
    R, piv = rref(A)
    assert len(R) == 4
    for i, p in enumerate(piv):
        assert R[i][p] == 1
        assert all(R[k][p] == 0 for k in range(len(R)) if k != i)


def test_rational_reconstruction():
    m = linalg.PRIMES[0]
    for f in [Fraction(3, 7), Fraction(-22, 9), Fraction(0), Fraction(123456, 1)]:
        a = f.numerator * pow(f.denominator, -1, m) % m
        assert rational_reconstruct(a, m) == f


def test_product_is_zero_paths():
    A = [[1, -1], [2, -2]]
    assert product_is_zero(A, [[1, 1]])
    assert not product_is_zero(A, [[1, 0]])
    big = 2**80
    assert product_is_zero([[big, -big]], [[big, big]])
    assert not product_is_zero([[big, -big + 1]], [[big, big]])


def test_span_closure_under_cyclic_shift():
    n = 6
    shift = (list((i + 1) % n for i in range(n)), [1] * n)
    basis = span_closure([[1, 0, 0, 0, 0, 0]], [shift], n)
    assert len(basis) == 6
    basis = span_closure([[1, -1, 0, 0, 0, 0]], [shift], n)
    assert len(basis) == 5  # sum-zero vectors
    assert span_closure([], [shift], n) == []
