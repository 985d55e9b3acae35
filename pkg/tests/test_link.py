from math import gcd
from itertools import product

import pytest
from hypothesis import given, strategies as st

from orthocoll import _exact
from orthocoll.hjfrac import TDecomposition, hj_expand, tridiag_det
from orthocoll.link import (
    GammaValue,
    IntersectionMatrix,
    NotAGeneratorError,
    adjust_divisor,
    alpha_coefficients,
    chain_group,
    gamma,
    gamma_invariance_check,
    inverse_mod,
    is_generator_mod_square,
    lifts_to_general_fiber,
    link_group,
)

chains = st.lists(st.integers(2, 7), min_size=1, max_size=6)
small_mats = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(small_mats)
def test_snf_is_a_factorization(A):
    U, D, V = _exact.smith_normal_form(A)
    assert _exact.matmul(_exact.matmul(U, A), V) == D
    assert abs(_exact.det(U)) == 1 and abs(_exact.det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag == sorted(nz) + [0] * (len(diag) - len(nz))


@given(small_mats)
def test_snf_is_deterministic(A):
    assert _exact.smith_normal_form(A) == _exact.smith_normal_form([list(r) for r in A])


def test_snf_example():
    _, D, _ = _exact.smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [D[i][i] for i in range(3)] == [2, 6, 12]


@given(chains)
def test_chain_group_is_cyclic_of_order_det(b):
    g = chain_group(b)
    assert g.is_cyclic
    assert g.order == tridiag_det(b)
    if g.order > 1:
        assert g.alpha(1).residue == 1


@given(chains)
def test_alpha_coefficients_agree_with_snf(b):
    g = chain_group(b)
    m = g.order
    coeffs = alpha_coefficients(b)
    assert coeffs[0] == 1
    if m > 1:
        assert tuple(g.alpha(j + 1).residue for j in range(len(b))) == tuple(c % m for c in coeffs)


def test_alpha_coefficients_example():
    assert alpha_coefficients((6, 3, 2, 2, 2)) == (1, 6, 17, 28, 39)


def test_link_group_of_non_chain_matrix():
    # D4 configuration: group (Z/2)^2
    M = IntersectionMatrix(((-2, 1, 1, 1), (1, -2, 0, 0), (1, 0, -2, 0), (1, 0, 0, -2)))
    g = link_group(M)
    assert g.invariant_factors == (2, 2)
    assert not g.is_cyclic and g.order == 4


def test_intersection_matrix_validation():
    with pytest.raises(ValueError):
        IntersectionMatrix(((-2, 1), (0, -2)))
    with pytest.raises(ValueError):
        IntersectionMatrix(((-1, 1), (1, -1)))
    with pytest.raises(ValueError):
        IntersectionMatrix(((-2,),), ("a", "b"))


@given(chains, st.data())
def test_gamma_is_additive(b, data):
    g = chain_group(b)
    r = len(b)
    v = data.draw(st.lists(st.integers(-50, 50), min_size=r, max_size=r))
    w = data.draw(st.lists(st.integers(-50, 50), min_size=r, max_size=r))
    assert gamma([x + y for x, y in zip(v, w)], g) == gamma(v, g) + gamma(w, g)
    assert gamma([3 * x for x in v], g) == 3 * gamma(v, g)


@given(chains, st.data())
def test_gamma_ignores_exceptional_changes(b, data):
    M = IntersectionMatrix.chain(b)
    r = len(b)
    v = data.draw(st.lists(st.integers(-50, 50), min_size=r, max_size=r))
    e = data.draw(st.lists(st.integers(-5, 5), min_size=r, max_size=r))
    shifted = [x + y for x, y in zip(v, _exact.matvec(M.entries, e))]
    assert gamma_invariance_check(M, v, shifted)


@given(chains, st.data())
def test_adjust_divisor_round_trip(b, data):
    M = IntersectionMatrix.chain(b)
    r = len(b)
    v = data.draw(st.lists(st.integers(-50, 50), min_size=r, max_size=r))
    e = data.draw(st.lists(st.integers(-5, 5), min_size=r, max_size=r))
    target = [x + y for x, y in zip(v, _exact.matvec(M.entries, e))]
    assert adjust_divisor(v, target, M) == tuple(e)


def test_adjust_divisor_none_when_gamma_differs():
    M = IntersectionMatrix.chain((4,))
    assert adjust_divisor((0,), (1,), M) is None
    assert adjust_divisor((1,), (5,), M) == (-1,)


def test_gamma_value_arithmetic():
    a = GammaValue((3,), (4,))
    assert (a + a).coords == (2,)
    assert (a * 4).is_zero
    assert a.residue == 3 and a.modulus == 4
    with pytest.raises(ValueError):
        a + GammaValue((1,), (5,))
    with pytest.raises(ValueError):
        GammaValue((1, 1), (2, 2)).residue


def test_lifts_to_general_fiber_bruteforce():
    # v lifts iff v = n w for some w in Z/n^2
    for n in (2, 3, 5):
        mod = n * n
        multiples = {(n * w) % mod for w in range(mod)}
        for x in range(mod):
            assert lifts_to_general_fiber(GammaValue((x,), (mod,)), n) == (x in multiples)


def test_lifts_warns_when_n_does_not_divide_order():
    with pytest.warns(UserWarning):
        lifts_to_general_fiber(GammaValue((0,), (7,)), 2)


def test_inverse_mod():
    assert inverse_mod(3, 4) == 3
    assert inverse_mod(5, 1) == 1
    with pytest.raises(NotAGeneratorError):
        inverse_mod(0, 81)
    with pytest.raises(NotAGeneratorError):
        inverse_mod(6, 9)


@given(st.integers(2, 12), st.integers(-500, 500))
def test_inverse_mod_property(n, g):
    mod = n * n
    if gcd(g, n) != 1:
        with pytest.raises(NotAGeneratorError):
            inverse_mod(g, mod)
    else:
        m = inverse_mod(g, mod)
        assert 0 < m < mod and (m * g) % mod == 1


def test_is_generator_mod_square():
    assert is_generator_mod_square(GammaValue((1,), (81,)), 9)
    assert not is_generator_mod_square(GammaValue((3,), (81,)), 9)
    assert is_generator_mod_square(GammaValue((0,), (3,)), 1)


def test_class_t_link_groups_small():
    for d, n in product(range(1, 5), range(1, 8)):
        for a in range(1, n + 1):
            if gcd(n, a) != 1 or (a == n and n > 1):
                continue
            t = TDecomposition(d, n, a)
            if t.m == 1:
                continue
            g = chain_group(hj_expand(t.m, t.q))
            assert g.invariant_factors == (t.m,)
