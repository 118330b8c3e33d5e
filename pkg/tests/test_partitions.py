from itertools import product
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from tensorideals.partitions import (
    EMPTY,
    Partition,
    ab_dual,
    is_ab_dual,
    lr_coefficient,
    lr_product,
    partitions_in_box,
    partitions_of,
    rect_reach_condition,
    rect_reach_condition_transposed,
    specht_dim,
    staircase,
    transpose,
)

from oracles import all_partitions, count_syt, lr_by_schur


def small_partitions(max_size):
    return [Partition(p) for n in range(max_size + 1) for p in all_partitions(n)]


partition_st = st.integers(0, 12).flatmap(
    lambda n: st.sampled_from([Partition(p) for p in all_partitions(n)])
)


def test_construction_strips_zeros_and_validates():
    assert Partition([3, 1, 0, 0]) == (3, 1)
    assert Partition([]).size == 0
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, -1])


def test_part_is_one_based_and_zero_padded():
    lam = Partition([3, 1])
    assert [lam.part(i) for i in (1, 2, 3, 7)] == [3, 1, 0, 0]


@pytest.mark.parametrize(
    "lam,expected",
    [((), ()), ((3, 1), (2, 1, 1)), ((4, 4), (2, 2, 2, 2))],
)
def test_transpose_examples(lam, expected):
    assert transpose(lam) == Partition(expected)


@given(partition_st)
def test_transpose_involution(lam):
    assert transpose(transpose(lam)) == lam
    assert transpose(lam).size == lam.size


def test_partition_counts():
    assert [len(list(partitions_of(n))) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert len(list(partitions_in_box(2, 3))) == 10  # binom(5, 2)


def test_dual_examples():
    assert is_ab_dual(EMPTY, Partition([3, 3]), 2, 3)
    assert is_ab_dual((2,), (2,), 1, 4)
    for j in range(1, 6):
        s = staircase(j)
        assert is_ab_dual(transpose(s), s, j, j + 1)
    assert ab_dual(EMPTY, 2, 3) == (3, 3)
    assert ab_dual((2, 1), 2, 3) == (2, 1)
    assert ab_dual((4,), 2, 4) == (4,)
    with pytest.raises(ValueError):
        ab_dual((5,), 2, 4)
    with pytest.raises(ValueError):
        ab_dual((1, 1, 1), 2, 4)


def test_dual_symmetry_exhaustive():
    parts = small_partitions(8)
    for a, b in product(range(5), range(5)):
        box = [p for p in parts if len(p) <= a + 1 and (not p or p[0] <= b + 1)]
        for lam, mu in product(box, box):
            assert is_ab_dual(lam, mu, a, b) == is_ab_dual(mu, lam, a, b)


def test_ab_dual_is_the_unique_dual():
    for a, b in product(range(1, 5), range(1, 5)):
        box = list(partitions_in_box(a, b))
        for lam in box:
            duals = [mu for mu in box if is_ab_dual(lam, mu, a, b)]
            assert duals == [ab_dual(lam, a, b)]


def test_lr_examples():
    for nu in small_partitions(5):
        assert lr_coefficient(EMPTY, nu, nu) == 1
    assert lr_coefficient((1,), (1, 1), (2, 1)) == 1
    assert lr_coefficient((2, 1), (2, 1), (3, 2, 1)) == 2
    assert lr_coefficient((1,), (1,), (3,)) == 0


def test_lr_matches_schur_product_oracle():
    parts = small_partitions(4)
    for lam, mu in product(parts, parts):
        if lam.size + mu.size > 6:
            continue
        expected = {Partition(k): v for k, v in lr_by_schur(lam, mu).items()}
        assert lr_product(lam, mu) == expected, (lam, mu)


def test_lr_symmetry():
    parts = small_partitions(5)
    for lam, mu in product(parts, parts):
        for nu in partitions_of(lam.size + mu.size):
            assert lr_coefficient(lam, mu, nu) == lr_coefficient(mu, lam, nu)


def test_lr_rectangle_matches_duality_exhaustive():
    for a, b in product(range(1, 13), range(1, 13)):
        if a * b > 12:
            continue
        rect = Partition([b] * a)
        for k in range(a * b + 1):
            for lam in partitions_of(k):
                for mu in partitions_of(a * b - k):
                    assert lr_coefficient(lam, mu, rect) == int(is_ab_dual(lam, mu, a, b))


def test_rect_reach_examples():
    assert rect_reach_condition(Partition([3, 3]), EMPTY, 2, 3)
    assert not rect_reach_condition((1,), (1,), 1, 3)


def test_rect_reach_row_and_column_forms_agree():
    parts = small_partitions(7)
    for a, b in product(range(6), range(6)):
        for lam, mu in product(parts, parts):
            assert rect_reach_condition(lam, mu, a, b) == rect_reach_condition_transposed(lam, mu, a, b)


def test_rect_reach_implied_by_lr_support():
    for n in range(11):
        for k in range(n + 1):
            for lam in partitions_of(k):
                for mu in partitions_of(n - k):
                    support = lr_product(lam, mu)
                    for a, b in product(range(1, 5), range(1, 5)):
                        if a * b > n:
                            continue
                        if any(len(nu) >= a and nu[a - 1] >= b for nu in support):
                            assert rect_reach_condition(lam, mu, a, b)


def test_specht_examples():
    assert specht_dim((5,)) == 1
    assert specht_dim((2, 1)) == 2
    assert specht_dim((3, 1)) == 3


def test_specht_against_tableau_count():
    for lam in small_partitions(7):
        assert specht_dim(lam) == count_syt(lam)


@pytest.mark.parametrize("n", range(9))
def test_specht_square_sum(n):
    assert sum(specht_dim(lam) ** 2 for lam in partitions_of(n)) == factorial(n)


@settings(max_examples=50)
@given(partition_st, partition_st)
def test_containment_matches_boxes(lam, mu):
    boxes = lambda p: {(i, j) for i, r in enumerate(p) for j in range(r)}
    assert lam.contains(mu) == (boxes(mu) <= boxes(lam))
