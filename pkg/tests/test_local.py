import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from twosquares import local
from twosquares.errors import BudgetError
from twosquares.local import OffsetSet


def sots_residues(modulus):
    """Residues mod ``modulus`` that are u^2 + v^2 mod ``modulus``; computed directly."""
    sq = np.unique(np.arange(modulus, dtype=np.int64) ** 2 % modulus)
    out = np.zeros(modulus, dtype=bool)
    out[(sq[:, None] + sq[None, :]).ravel() % modulus] = True
    return out


def lifted_density(h, p, beta):
    """Share of a mod p^beta with every a + h_i congruent to a sum of two squares."""
    M = p**beta
    ok = sots_residues(M)
    a = np.arange(M)
    keep = np.ones(M, dtype=bool)
    for x in h:
        keep &= ok[(a + x) % M]
    return Fraction(int(keep.sum()), M)


offset_sets = st.lists(st.integers(-30, 30), min_size=1, max_size=3, unique=True).map(OffsetSet)
primes = st.sampled_from([2, 3, 7, 11])


def test_offset_set():
    h = OffsetSet([5, 1, 3])
    assert h.offsets == (1, 3, 5) and h.k == 3 and len(h) == 3
    assert h.det == 2 * 4 * 2
    assert OffsetSet([7]).det == 1
    assert h.normalized().offsets == (0, 2, 4)
    assert OffsetSet.union([0, 1], [1, 2]).offsets == (0, 1, 2)
    with pytest.raises(ValueError):
        OffsetSet([1, 1])
    with pytest.raises(ValueError):
        OffsetSet([])


@pytest.mark.parametrize("n, p, v", [(12, 2, 2), (0, 3, math.inf), (7, 3, 0), (-18, 3, 2)])
def test_nu_p(n, p, v):
    assert local.nu_p(n, p) == v


@pytest.mark.parametrize("n, p, expected", [
    (4, 2, True), (-4, 2, False), (0, 2, True), (0, 7, True), (18, 3, True), (6, 3, False),
    (-1, 2, False), (-3, 2, True), (3, 2, False), (5, 5, True),
])
def test_in_Sp(n, p, expected):
    assert local.in_Sp(n, p) is expected


def test_in_Sp_matches_two_square_residues():
    # n in S_p iff n is a sum of two squares mod every power of p
    for p, beta in [(2, 8), (3, 5), (7, 3)]:
        M = p**beta
        ok = sots_residues(M)
        for n in range(-200, 200):
            if n == 0 or local.nu_p(n, p) >= beta - (p == 2):
                continue
            assert local.in_Sp(n, p) == ok[n % M], (n, p)


def test_h_p_set():
    assert local.h_p_set([0], 2) == OffsetSet([0])
    assert local.h_p_set([0, 4], 2) == OffsetSet([0])
    assert local.h_p_set([0, 3], 3) == ()
    assert local.h_p_set([0, 9], 3) == OffsetSet([0, 9])


@settings(max_examples=100, deadline=None)
@given(offset_sets)
def test_h_2_has_at_most_one_element(h):
    assert len(local.h_p_set(h, 2)) <= 1


def test_enumerate_T_examples():
    assert local.enumerate_T([0], 2).tolist() == [1, 2, 5]
    assert local.enumerate_T([0, 1, 2, 3], 2).tolist() == []
    assert local.enumerate_T([0], 1).tolist() == [1]
    assert local.enumerate_T([3], 2).tolist() == sorted((r - 3) % 8 for r in [1, 2, 5])


def test_enumerate_V_examples():
    assert local.enumerate_V([0], 3, 1).tolist() == [1, 2]
    assert local.enumerate_V([0, 1], 3, 1).tolist() == [1]
    for p in [3, 7, 11]:
        for alpha in [1, 2, 3]:
            got = Fraction(len(local.enumerate_V([0], p, alpha)), p**alpha)
            expected = Fraction(p, p + 1) * (1 - Fraction(1, p ** (alpha + alpha % 2)))
            assert got == expected


def test_enumeration_budget():
    with pytest.raises(BudgetError):
        local.enumerate_T([0], 20, budget=1 << 10)
    with pytest.raises(BudgetError):
        local.enumerate_V([0], 3, 10, budget=1 << 10)
    with pytest.raises(ValueError):
        local.enumerate_V([0], 5, 1)


@pytest.mark.parametrize("h, p, value", [
    ([0], 2, Fraction(1, 2)),
    ([0], 3, Fraction(3, 4)),
    ([0, 1], 2, Fraction(1, 4)),
    ([0, 1, 2, 3], 2, Fraction(0)),
    ([0, 1], 7, Fraction(3, 4)),
    ([0, 1], 5, Fraction(1)),
    ([0, 1, 2], 2, Fraction(1, 16)),
])
def test_delta_examples(h, p, value):
    assert local.delta(h, p).value == value


def test_delta_record():
    d = local.delta([0, 4], 2)
    assert d.alpha == 4 and d.hp_count == 1
    assert d.value == Fraction(d.residue_count + 1, 32)
    assert float(d) == float(d.value)


@settings(max_examples=80, deadline=None)
@given(offset_sets, primes, st.integers(-10**6, 10**6))
def test_translation_invariance(h, p, c):
    assert local.delta(h, p).value == local.delta(h.shifted(c), p).value
    base = local.enumerate_T(h, 3) if p == 2 else local.enumerate_V(h, p, 2)
    M = 16 if p == 2 else p**2
    moved = local.enumerate_T(h.shifted(c), 3) if p == 2 else local.enumerate_V(h.shifted(c), p, 2)
    assert moved.tolist() == sorted(((base - c) % M).tolist())


def _rhs(h, p, alpha):
    hp = len(local.h_p_set(h, p))
    if p == 2:
        return Fraction(len(local.enumerate_T(h, alpha)) + hp, 2 ** (alpha + 1))
    return (len(local.enumerate_V(h, p, alpha)) + hp * Fraction(p, p + 1) / p ** (alpha % 2)) / p**alpha


@settings(max_examples=60, deadline=None)
@given(offset_sets, primes)
def test_stabilization(h, p):
    alpha = local.stabilization_exponent(h, p)
    assert _rhs(h, p, alpha) == _rhs(h, p, alpha + 1) == local.delta(h, p).value


@settings(max_examples=60, deadline=None)
@given(offset_sets, primes, st.integers(1, 6))
def test_convergence_envelope(h, p, alpha):
    assume(p**alpha <= 3**6)
    d = local.delta(h, p).value
    if p == 2:
        ratio = Fraction(len(local.enumerate_T(h, alpha)), 2 ** (alpha + 1))
        assert abs(ratio - d) <= Fraction(h.k, 2**alpha)
    else:
        ratio = Fraction(len(local.enumerate_V(h, p, alpha)), p**alpha)
        bound = h.k * Fraction(p, p + 1) / p ** (alpha + alpha % 2)
        assert abs(ratio - d) <= bound


@settings(max_examples=60, deadline=None)
@given(offset_sets, st.sampled_from([3, 7, 11, 19]))
def test_lower_bound(h, p):
    d = local.delta(h, p).value
    floor = Fraction(p, p + 1) * (1 - Fraction(min(h.k - 1, p), p))
    assert d >= floor
    if h.det % p:
        assert d == floor


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=1, max_size=3, unique=True).map(OffsetSet), st.sampled_from([2, 3, 7]))
def test_delta_matches_two_square_residues(h, p):
    # independent route: residues that are u^2 + v^2 mod p^beta, lifted to large beta
    alpha = local.stabilization_exponent(h, p)
    beta = alpha + 3
    while p**beta < 2000:
        beta += 1
    assume(p**beta <= 1 << 13)
    emp = lifted_density(h, p, beta)
    d = local.delta(h, p).value
    # residues where some a + h_i has valuation >= beta - 1 account for the gap
    assert abs(emp - d) <= Fraction(3 * h.k, p ** (beta - 1))


def test_epsilon_examples():
    assert local.epsilon([0, 1], 2, 1) == 0
    assert local.epsilon([0, 1], 3, 1) == Fraction(-1, 4)
    assert local.epsilon([0, 1], 2, 2) == -1
    for h in ([0], [0, 1], [0, 2, 5]):
        for p in (3, 7):
            assert local.epsilon(h, p, 2) == 0
            assert local.epsilon(h, p, 4 if p == 3 else 2) == 0
        assert local.epsilon(h, 2, 1) == 0


def test_epsilon_of_singleton_vanishes_beyond_first_level():
    # for h = {0} and j = 1 both terms are identically 1
    for p, alpha in [(2, 3), (3, 3), (7, 1)]:
        assert local.epsilon([0], p, alpha) == 0


def _brute_cancellation(p, alpha, k, with_zero):
    M = p**alpha
    j = k + int(with_zero)
    total = Fraction(0)
    for hs in itertools.product(range(M), repeat=k):
        h = OffsetSet(set(hs) | ({0} if with_zero else set()))
        total += local.epsilon(h, p, alpha, j)
    return total


@pytest.mark.parametrize("p, alpha, k, with_zero", [
    (2, 1, 1, False), (2, 2, 2, True), (2, 3, 2, False), (3, 1, 2, True), (3, 2, 1, True), (7, 1, 2, False),
])
def test_cancellation_matches_brute_force(p, alpha, k, with_zero):
    assert local.cancellation_sum(p, alpha, k, with_zero) == _brute_cancellation(p, alpha, k, with_zero) == 0


def test_cancellation_k3():
    assert local.cancellation_sum(3, 2, 3, True) == 0
    with pytest.raises(BudgetError):
        local.cancellation_sum(11, 3, 3, False)
