from fractions import Fraction
from functools import lru_cache
from math import gcd

import pytest
from hypothesis import assume, given, strategies as st

from orthocoll.bundles import (
    BundleLedger,
    StabilityError,
    SurfaceNumerics,
    block_divisors,
    c2_exceptional,
    c2_tensor,
    check_main_hypotheses,
    chi_matrix,
    gamma_of_block_divisors,
    make_block_ledgers,
    normalize_divisor,
    ow_generators,
    rr_chi,
    stability_residue,
    tensor_dual,
)
from orthocoll.files import builtin, fan_from_dict
from orthocoll.hjfrac import TDecomposition
from orthocoll.link import NotAGeneratorError, lifts_to_general_fiber
from orthocoll.toric import (
    Fan2,
    MBlock,
    QDivisor,
    local_model,
    m_resolve_fan,
    minimal_resolution,
    mumford_intersect,
)

rationals = st.fractions(min_value=-200, max_value=200, max_denominator=50)


def ch2(c1sq, c2):
    """Degree-two part of the Chern character."""
    return Fraction(c1sq) / 2 - c2


def c2_from_ch(c1sq, ch2_value):
    return Fraction(c1sq) / 2 - ch2_value


# --- closed forms ---------------------------------------------------------------


def test_c2_exceptional_examples():
    assert c2_exceptional(1, Fraction(7, 3)) == 0
    assert c2_exceptional(2, 1) == 1
    assert c2_exceptional(9, -162) == Fraction(-608, 9)
    assert c2_exceptional(9, -162, alt_constant=True) == Fraction(8, 18) * (-162 + 82)


def test_c2_tensor_examples():
    assert c2_tensor(1, 5, 0, 1, 3, 0, 2) == 0
    assert c2_tensor(2, 1, 1, 1, 0, 0, 0) == 1


@given(st.integers(1, 12), rationals, rationals)
def test_c2_tensor_dual_pair(n, s, c2):
    # E = F^dual, G = F: cross = -s
    assert c2_tensor(n, s, c2, n, s, c2, -s) == (1 - n) * s + 2 * n * c2


@given(st.integers(1, 6), rationals, rationals, st.integers(1, 6), rationals, rationals, rationals)
def test_c2_tensor_matches_chern_character(e, se, c2e, g, sg, c2g, cross):
    # ch(E (x) G) = ch(E) ch(G); c1(E (x) G) = g c1(E) + e c1(G)
    total = g * ch2(se, c2e) + e * ch2(sg, c2g) + cross
    c1sq = g * g * se + 2 * e * g * cross + e * e * sg
    assert c2_tensor(e, se, c2e, g, sg, c2g, cross) == c2_from_ch(c1sq, total)


def symbolic_surface(names, u, v, w, n):
    """Gram matrix with (A_i)^2 = -2/n^2, adjacent A's 1/n^2, K.A = 0; D0 pairings free."""
    gram = {("D0", "D0"): u, ("K", "D0"): w, ("K", "K"): 3}
    for i, a in enumerate(names):
        gram[(a, a)] = Fraction(-2, n * n)
        gram[("D0", a)] = v[i]
        if i + 1 < len(names):
            gram[(a, names[i + 1])] = Fraction(1, n * n)
    return SurfaceNumerics.from_gram(gram, QDivisor.curve("K"))


def symbolic_ledgers(num, names, n):
    out = []
    D = QDivisor.curve("D0")
    for k in range(len(names) + 1):
        c1 = n * D
        out.append(BundleLedger(n, c1, c2_exceptional(n, num.square(c1))))
        if k < len(names):
            D = D + QDivisor.curve(names[k])
    return out


@given(st.integers(1, 12), rationals)
def test_chi_of_exceptional_ledger_is_one(n, s):
    num = SurfaceNumerics.from_gram({("D", "D"): s, ("K", "D"): 1}, QDivisor.curve("K"))
    L = BundleLedger(n, QDivisor.curve("D"), c2_exceptional(n, s))
    assert rr_chi(L, L, num) == 1


@given(st.integers(1, 4), st.integers(1, 7), rationals, st.lists(rationals, min_size=4, max_size=4), rationals)
def test_off_diagonal_chi_vanishes_symbolically(d, n, u, v, w):
    names = [f"A{i}" for i in range(1, d)]
    num = symbolic_surface(names, u, v, w, n)
    L = symbolic_ledgers(num, names, n)
    M = chi_matrix(L, num)
    assert M == [[int(i == j) for j in range(d)] for i in range(d)]


def test_alt_constant_breaks_chi():
    num = SurfaceNumerics.from_gram({("D", "D"): -2}, QDivisor())
    L = BundleLedger(3, QDivisor.curve("D"), c2_exceptional(3, -2, alt_constant=True))
    assert rr_chi(L, L, num) != 1


def test_rank_one_trivial():
    num = SurfaceNumerics.from_gram({}, QDivisor())
    O = BundleLedger(1, QDivisor(), 0)
    assert rr_chi(O, O, num) == 1
    assert chi_matrix([O], num) == [[1]]


def test_ledger_validation_and_dual():
    with pytest.raises(ValueError):
        BundleLedger(0, QDivisor(), 0)
    L = BundleLedger(2, QDivisor.curve("x"), Fraction(1, 2))
    assert L.dual().c1 == -L.c1 and L.dual().c2 == L.c2


def test_gram_must_be_symmetric():
    with pytest.raises(ValueError):
        SurfaceNumerics.from_gram({("a", "b"): 1, ("b", "a"): 2}, QDivisor())


@pytest.mark.parametrize("n,a,pq", [(2, 1, (1, 0)), (9, 2, (5, -1)), (5, 3, (2, -1)), (1, 1, (0, 1))])
def test_ow_generators(n, a, pq):
    assert ow_generators(n, a) == pq


@given(st.integers(1, 50), st.integers(1, 50))
def test_ow_generators_property(n, a):
    if gcd(n, a) != 1:
        with pytest.raises(ValueError):
            ow_generators(n, a)
        return
    p, q = ow_generators(n, a)
    assert p * a + q * n == 1 and 0 <= p < max(n, 1)


# --- the cubic example ---------------------------------------------------------------


def example_divisor(k):
    D = QDivisor({"rho1": 81})
    for j in range(2, k + 1):
        D = D + QDivisor.curve(f"rho{j}")
    return D


@pytest.mark.parametrize("block,k", [(0, 1), (1, 2), (2, 4)])
def test_block_chi_matrices(z0, block, k):
    s, blocks = z0
    b = blocks[block]
    N = normalize_divisor(s, example_divisor(k), b)
    assert N.m == 1 and N.divisor == example_divisor(k)
    num = SurfaceNumerics.from_model(s)
    L = make_block_ledgers(s, N.divisor, b)
    d, n = b.t.d, b.t.n
    assert chi_matrix(L, num) == [[int(i == j) for j in range(d)] for i in range(d)]
    for i in range(d):
        assert L[i].rank == n
        for j in range(i + 1, d):
            diff = L[j].c1 - L[i].c1
            assert num.square(diff) == -2
            assert num.square(tensor_dual(L[i], L[j], num).c1) == -2 * n * n
            assert num.pairing(num.K, diff) == 0
    res = {stability_residue(s, x, b.t) for x in L}
    assert res == {(-b.t.a) % n}


def test_normalize_rejects_zero_gamma(z0):
    s, blocks = z0
    with pytest.raises(NotAGeneratorError):
        normalize_divisor(s, QDivisor({"rho1": 81}), blocks[2])
    with pytest.raises(NotAGeneratorError):
        normalize_divisor(s, QDivisor(), blocks[1])


def test_normalize_finds_multiplier(z0):
    s, blocks = z0
    b = blocks[2]
    D = QDivisor({"rho4": 5})
    N = normalize_divisor(s, D, b)
    assert (N.m * 5) % 81 == 1
    assert check_main_hypotheses(s, N.divisor).label(b.cones[0]) == "(1)"
    gamma_of_block_divisors(s, N.divisor, b)


def test_normalize_uses_adjustments(z0):
    s, blocks = z0
    b = blocks[1]
    # rho4 sits at the far end of the middle block; A[2][1] must compensate
    D = QDivisor({"rho2": 1, "rho4": 3})
    N = normalize_divisor(s, D, b)
    assert N.adjustments != (0,)
    assert [v.residue for v in (s.gamma_at(N.divisor, c) for c in b.cones)] == [1, 0]
    for c in b.cones:
        ch = s.chain(c)
        tgt = [s.smooth_intersect(N.divisor + N.corrections, QDivisor.curve(e)) for e in ch.names]
        assert tgt == ([1] + [0] * (len(tgt) - 1) if c == b.cones[0] else [0] * len(tgt))


def test_normalized_wahl_fixed_point():
    f = Fan2(((1, 0), (0, 1), (-1, -4)), ("x", "y", "z"))
    s = minimal_resolution(f)
    block = MBlock(2, TDecomposition(1, 2, 1), ("z", "x"), (2,))
    D = QDivisor.curve("z")
    N = normalize_divisor(s, D, block)
    assert N.m == 1 and N.divisor == D
    L = make_block_ledgers(s, D, block)
    assert stability_residue(s, L[0], block.t) == 1


def test_gamma_of_block_divisors_pattern(z0):
    s, blocks = z0
    b = blocks[2]
    D0 = example_divisor(4)
    vals = gamma_of_block_divisors(s, D0, b)
    assert len(vals) == 6
    n = b.t.n
    for k, row in enumerate(vals):
        assert [v.residue == 1 for v in row][k]
        for i in range(k):
            assert lifts_to_general_fiber(row[i], n)
        for v in row[k + 1:]:
            assert v.is_zero
    assert block_divisors(D0, b)[3] == example_divisor(7)


def test_gamma_of_block_divisors_middle(z0):
    s, blocks = z0
    vals = gamma_of_block_divisors(s, example_divisor(2), blocks[1])
    assert [v.residue for v in vals[0]] == [1, 0]
    assert vals[1][0].residue % 5 == 0 and vals[1][1].residue == 1


def test_make_block_ledgers_requires_normalized(z0):
    s, blocks = z0
    with pytest.raises(ValueError, match="normalized"):
        make_block_ledgers(s, QDivisor({"rho1": 81}), blocks[2])


@pytest.mark.parametrize("k", range(1, 10))
def test_hypothesis_pattern(z0, k):
    s, _ = z0
    h = check_main_hypotheses(s, example_divisor(k))
    assert h.holds and h.target == k - 1
    labels = [h.label(c) for c in range(9)]
    assert labels == ["(2)"] * (k - 1) + ["(1)"] + ["(3)"] * (9 - k)
    assert h.multiplier == 1
    assert h.adjustment is not None


def test_zero_divisor_fails_everywhere(z0):
    s, _ = z0
    h = check_main_hypotheses(s, QDivisor())
    assert not h.holds
    assert all(not p.generates for p in h.points)


def test_stability_needs_unit(z0):
    s, blocks = z0
    with pytest.raises(StabilityError):
        stability_residue(s, BundleLedger(9, QDivisor(), 0), blocks[2].t)
    # 81 rho1 does not normalize at the big block; there K.c1 = -405/2 = 0 mod 9
    L = BundleLedger(9, 9 * QDivisor({"rho1": 81}), 0)
    assert mumford_intersect(s, QDivisor({n: -1 for n in s.fan.names}), L.c1).numerator % 9 == 0
    with pytest.raises(StabilityError):
        stability_residue(s, L, blocks[2].t)


def test_stability_needs_complete_surface():
    s, block = local_model(TDecomposition(2, 5, 1))
    with pytest.raises(ValueError):
        stability_residue(s, BundleLedger(5, QDivisor(), 0), block.t)


def test_n_equal_one_block():
    f = Fan2(((1, 0), (0, 1), (-1, -3)))
    s = minimal_resolution(f)
    assert s.chains and s.chains[0].singularity.m == 3
    t = TDecomposition(3, 1, 1)
    assert stability_residue(s, BundleLedger(1, QDivisor.curve("rho1"), 0), t) == 0


@lru_cache(maxsize=None)
def big_block():
    mr = m_resolve_fan(fan_from_dict(builtin("x_fan.json")))
    return minimal_resolution(mr.fan), mr.blocks[2]


@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40))
def test_residue_independent_of_block_index(x, y, z):
    # any divisor normalizing at the big block gives one residue for all six ledgers
    assume(gcd(x, 3) == 1)
    s, b = big_block()
    D = QDivisor({"rho4": x, "rho2": y, "rho1": 81 * z})
    N = normalize_divisor(s, D, b)
    L = make_block_ledgers(s, N.divisor, b)
    assert len({stability_residue(s, l, b.t) for l in L}) == 1
