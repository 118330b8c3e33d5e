from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from tensorideals.algebra import AlgebraParams, Morphism, two_sided_ideal
from tensorideals.diagrams import Flavor, cap, compose, cup, elementary, enumerate_diagrams, identity, tensor
from tensorideals.oracle import (
    BudgetExceeded,
    OracleError,
    RepSpec,
    graded_kron,
    identity_operator,
    invariant_dim,
    loop_scalar,
    periplectic_product,
    periplectic_structure_constants,
    phi,
    phi_kernel_basis,
    phi_rank,
    rep_of_diagram,
    snake_operators,
)
from tensorideals.algebra import annihilated_by_cups_caps
from tensorideals.cache import Cache

from oracles import bell, double_factorial

SNAKE_SPECS = [RepSpec.O(3), RepSpec.O(2), RepSpec.O(0, 1), RepSpec.O(1, 1), RepSpec.GL(1), RepSpec.GL(1, 1),
               RepSpec.GL(2), RepSpec.P(1), RepSpec.P(2)]


def sign_of(op, ident):
    if op.equals(ident, 1):
        return 1
    if op.equals(ident, -1):
        return -1
    return None


@pytest.mark.parametrize("spec", SNAKE_SPECS, ids=lambda s: s.label())
@pytest.mark.parametrize("i", [1, 2, 3])
def test_snake_identities(spec, i):
    if spec.dim ** (3 * i) > 10 ** 6:
        pytest.skip("too large for a quick snake check")
    colour_words = [None] if spec.kind != "GL" else [w for w in product((1, -1), repeat=i)]
    for x in colour_words:
        first, second = snake_operators(spec, i, x)
        row = x if x is not None else i
        dual = tuple(-c for c in x) if x is not None else i
        s1, s2 = sign_of(first, identity_operator(spec, row)), sign_of(second, identity_operator(spec, dual))
        if spec.kind == "P":
            assert (s1, s2) == (1, (-1) ** i)
        else:
            assert (s1, s2) == (1, 1)


def test_o3_cap_is_standard_pairing():
    M = rep_of_diagram(RepSpec.O(3), cap()).dense()
    assert M.tolist() == [[1, 0, 0, 0, 1, 0, 0, 0, 1]]


def test_sp2_cap_and_loop():
    spec = RepSpec.O(0, 1)
    M = rep_of_diagram(spec, cap()).dense()[0]
    assert (M[1], M[2]) == (1, -1) and M[0] == M[3] == 0
    loop = (rep_of_diagram(spec, cap()) @ rep_of_diagram(spec, cup())).dense()
    assert loop.tolist() == [[-2]]


@pytest.mark.parametrize("spec,value", [(RepSpec.O(3), 3), (RepSpec.O(0, 1), -2), (RepSpec.O(1, 1), -1),
                                        (RepSpec.GL(1), 1), (RepSpec.GL(1, 1), 0), (RepSpec.P(1), 0)])
def test_loop_values(spec, value):
    flavor = spec.flavor
    c = cap(flavor) if flavor is not Flavor.WALLED else cap(flavor, (1, -1))
    u = cup(flavor) if flavor is not Flavor.WALLED else cup(flavor, (1, -1))
    assert (rep_of_diagram(spec, c) @ rep_of_diagram(spec, u)).dense().tolist() == [[value]]


def test_rep_e_squared():
    spec = RepSpec.O(3)
    E = rep_of_diagram(spec, elementary("e", 0, 2, Flavor.BRAUER))
    assert (E @ E).equals(E, 3)


def test_identity_diagram_gives_identity_matrix():
    spec = RepSpec.O(1, 1)
    M = rep_of_diagram(spec, identity(2)).dense()
    assert np.array_equal(M, np.eye(9, dtype=np.int64))


def _rows(spec, k):
    if spec.kind == "GL":
        return [w for w in product((1, -1), repeat=k)]
    return [k]


def _functorial(spec, max_len):
    flavor = spec.flavor
    rows = [r for k in range(max_len + 1) for r in _rows(spec, k)]
    checked = 0
    for a, b, c in product(rows, repeat=3):
        for d2 in enumerate_diagrams(a, b, flavor):
            R2 = rep_of_diagram(spec, d2)
            for d1 in enumerate_diagrams(b, c, flavor):
                d, loops = compose(d1, d2)
                lhs = rep_of_diagram(spec, d1) @ R2
                assert lhs.equals(rep_of_diagram(spec, d), loop_scalar(spec, loops)), (d1, d2)
                checked += 1
    return checked


@pytest.mark.parametrize("spec", [RepSpec.O(3), RepSpec.O(0, 1), RepSpec.O(1, 1), RepSpec.S(4)],
                         ids=lambda s: s.label())
def test_functoriality(spec):
    assert _functorial(spec, 3) > 0


def test_functoriality_walled():
    assert _functorial(RepSpec.GL(1), 2) > 0
    assert _functorial(RepSpec.GL(1, 1), 2) > 0


def test_periplectic_products_hold_on_a_larger_space():
    # signs are fixed on the smallest faithful space; check them on k^{2|2}
    spec = RepSpec.P(2)
    for a, b, c in product(range(3), repeat=3):
        for d2 in enumerate_diagrams(a, b, Flavor.PERIPLECTIC):
            for d1 in enumerate_diagrams(b, c, Flavor.PERIPLECTIC):
                d, sign = periplectic_product(d1, d2)
                lhs = rep_of_diagram(spec, d1) @ rep_of_diagram(spec, d2)
                assert lhs.equals(rep_of_diagram(spec, d), sign)


@pytest.mark.parametrize("spec", [RepSpec.O(1, 1), RepSpec.GL(1, 1), RepSpec.O(0, 1)], ids=lambda s: s.label())
def test_graded_interchange(spec):
    flavor = spec.flavor
    rows = _rows(spec, 1) + _rows(spec, 2) if spec.kind == "GL" else [1, 2]
    for r1, r2 in product(rows, repeat=2):
        for d1 in enumerate_diagrams(r1, r1, flavor):
            for d2 in enumerate_diagrams(r2, r2, flavor):
                lhs = rep_of_diagram(spec, tensor(d1, d2))
                rhs = graded_kron(spec, rep_of_diagram(spec, d1), rep_of_diagram(spec, d2))
                assert lhs.equals(rhs, 1)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_o3_injective_below_threshold(r):
    assert phi_rank(RepSpec.O(3), r) == double_factorial(2 * r - 1)
    assert phi_kernel_basis(RepSpec.O(3), r) == []


def test_o3_kernel_at_threshold():
    res = phi(RepSpec.O(3), 4)
    assert (res.algebra_dim, res.kernel_dim) == (105, 14)


def test_s4_isomorphism_at_two():
    assert phi_rank(RepSpec.S(4), 2) == bell(4)


@pytest.mark.parametrize("spec,r", [(RepSpec.O(0, 1), 1), (RepSpec.P(1), 1), (RepSpec.P(1), 2),
                                    (RepSpec.GL(1), (1, 0)), (RepSpec.GL(1), (0, 1))])
def test_empty_kernel_below_threshold(spec, r):
    assert phi_kernel_basis(spec, r) == []


def test_sp2_kernel_element_is_annihilated():
    ker = phi_kernel_basis(RepSpec.O(0, 1), 2)
    assert len(ker) == 1
    assert annihilated_by_cups_caps(ker[0])


def test_kernel_vectors_map_to_zero():
    spec = RepSpec.O(2)
    for f in phi_kernel_basis(spec, 3):
        total = None
        for d, c in f.terms.items():
            M = rep_of_diagram(spec, d).dense() * c
            total = M if total is None else total + M
        assert not np.any(total)


def test_kernel_is_a_two_sided_ideal():
    spec = RepSpec.O(0, 1)
    ker = phi_kernel_basis(spec, 3)
    assert len(ker) == 10
    assert two_sided_ideal(ker, (3, 3)).dim == 10


@pytest.mark.parametrize("spec,r,expected", [(RepSpec.O(3), 2, 1), (RepSpec.O(3), 3, 0), (RepSpec.O(3), 1, 0),
                                             (RepSpec.S(4), 2, 2), (RepSpec.S(4), 1, 1)])
def test_invariant_dims(spec, r, expected):
    assert invariant_dim(spec, r) == expected


def test_budget_gate():
    with pytest.raises(BudgetExceeded):
        phi(RepSpec.O(3), 6, budget_mb=1)


def test_periplectic_table_r2():
    table = periplectic_structure_constants(2, 1)
    basis = enumerate_diagrams(2, 2, Flavor.PERIPLECTIC)
    for (d1, d2), m in table.items():
        d, loops = compose(d1, d2)
        if loops:
            assert m.is_zero()
        else:
            assert list(m.terms) == [d] and abs(m.terms[d]) == 1
    assert any(next(iter(m.terms.values())) == -1 for m in table.values() if not m.is_zero())
    assert len(table) == len(basis) ** 2


def test_periplectic_constants_independent_of_n(tmp_path):
    cache = Cache(tmp_path)
    assert periplectic_structure_constants(3, 2, cache) == periplectic_structure_constants(3, 3)
    # second call is served from disk
    assert periplectic_structure_constants(3, 2, cache) == periplectic_structure_constants(3, 2)


def test_periplectic_identity_is_neutral():
    params = AlgebraParams(Flavor.PERIPLECTIC, 0)
    for r in range(1, 4):
        one = identity(r, Flavor.PERIPLECTIC)
        for d in enumerate_diagrams(r, r, Flavor.PERIPLECTIC):
            assert Morphism.of(params, one) @ Morphism.of(params, d) == Morphism.of(params, d)
            assert Morphism.of(params, d) @ Morphism.of(params, one) == Morphism.of(params, d)


def test_periplectic_constants_reject_non_faithful_n():
    with pytest.raises(OracleError):
        periplectic_structure_constants(3, 1)


def test_phi_cache_round_trip(tmp_path):
    cache = Cache(tmp_path)
    first = phi(RepSpec.O(0, 1), 2, cache=cache)
    second = phi(RepSpec.O(0, 1), 2, cache=cache)
    assert first.kernel == second.kernel and first.rank == second.rank
    assert any(tmp_path.iterdir())


def test_zero_dimensional_space():
    res = phi(RepSpec.O(0, 0), 2)
    assert res.rank == 0 and res.kernel_dim == 3


def test_fraction_kernel_entries():
    res = phi(RepSpec.O(0, 1), 2)
    assert all(isinstance(x, Fraction) for v in res.kernel for x in v)
