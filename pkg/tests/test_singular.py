import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twosquares import local, singular
from twosquares.errors import CutoffError
from twosquares.local import OffsetSet
from twosquares.primes import primes_upto


def q3(P):
    q = primes_upto(P)
    return q[q % 4 == 3]


def test_landau_ramanujan():
    r = singular.landau_ramanujan(10**7)
    assert abs(r.value - 0.764223) <= 1e-6
    assert abs(r.value - singular.LANDAU_RAMANUJAN) <= r.tail_bound
    assert singular.landau_ramanujan(3).value == pytest.approx((1 / math.sqrt(2)) * (1 - 1 / 9) ** -0.5)
    # truncations increase towards the limit and stay inside their bounds
    vals = [singular.landau_ramanujan(P) for P in (10**3, 10**4, 10**5)]
    for a, b in zip(vals, vals[1:]):
        assert a.value < b.value <= a.value + a.tail_bound


def test_generic_factor():
    assert singular.generic_factor(3, 2) == Fraction(4, 3) * Fraction(2, 3)
    assert singular.generic_factor(7, 1) == 1
    with pytest.raises(ValueError):
        singular.generic_factor(5, 2)


@pytest.mark.parametrize("k", [2, 3, 5, 8])
def test_generic_logs_match_exact_factor(k):
    q = q3(2000)
    q = q[q >= k]
    got = singular._generic_logs(q, k)
    exact = [math.log(singular.generic_factor(int(p), k)) for p in q]
    assert np.allclose(got, exact, rtol=1e-12, atol=1e-15)


def test_sss_examples():
    assert singular.singular_series([0, 1], 10**7).value == pytest.approx(0.856108, abs=1e-5)
    assert singular.singular_series([0]).value == 1.0
    for h in ([0, 1, 2, 3], [0, 1, 2, 4, 5, 8, 16, 21]):
        s = singular.singular_series(h)
        assert s.value == 0.0 and not s.admissible
    assert singular.is_admissible([0, 1, 2])
    assert not singular.is_admissible([0, 1, 2, 3])
    assert not singular.is_admissible([0, 1, 2, 4, 5, 8, 16, 21])


def test_sss_pair_equals_inverse_of_2C2():
    s = singular.singular_series([0, 1], 10**7)
    c = singular.landau_ramanujan(10**7)
    product = s.value * 2 * c.value**2
    slack = s.tail_bound * 2 * c.value**2 + 4 * s.value * c.value * c.tail_bound + 1e-12
    assert abs(product - 1) <= slack


def test_sss_triple_against_independent_product():
    # exceptional factors written out by hand, generic ones as a plain product of logs
    P = 10**6
    q = q3(P).astype(float)
    q = q[q > 3]
    logs = np.log((1 + 1 / q) ** 2 * (1 - 2 / q))
    direct = 2**3 * (1 / 16) * (Fraction(4, 3) ** 3 * local.delta([0, 1, 2], 3).value)
    value = float(direct) * math.exp(math.fsum(logs.tolist()))
    s = singular.singular_series([0, 1, 2], P)
    assert abs(s.value - value) <= 1e-10
    assert abs(s.value - 0.26208855206) <= s.tail_bound


def test_cutoff_error():
    with pytest.raises(CutoffError):
        singular.singular_series([0, 1, 3 * 1000003 + 1], 1000)
    with pytest.raises(ValueError):
        singular.singular_series([0, 1], 2)


def test_tail_bound_is_rigorous():
    for h in ([0, 1], [0, 1, 2], [0, 2, 6, 8]):
        small = singular.singular_series(h, 10**3)
        big = singular.singular_series(h, 10**7)
        lo, hi = small.bounds()
        assert lo <= big.value <= hi


def test_cutoff_for():
    assert singular.cutoff_for(1, 1e-12) == 10**3
    P = singular.cutoff_for(3, 1e-6)
    assert singular._generic_tail(3, P) <= 1e-6 < singular._generic_tail(3, P // 10)


small_sets = st.lists(st.integers(-40, 40), min_size=1, max_size=5, unique=True).map(OffsetSet)


@settings(max_examples=60, deadline=None)
@given(small_sets, st.integers(-10**4, 10**4))
def test_sss_translation_invariant(h, c):
    a = singular.singular_series(h, 10**4).value
    b = singular.singular_series(h.shifted(c), 10**4).value
    assert a == b


@settings(max_examples=60, deadline=None)
@given(small_sets)
def test_admissible_iff_positive(h):
    s = singular.singular_series(h, 10**4)
    assert (s.value > 0) == singular.is_admissible(h) == s.admissible
    if s.admissible:
        generic = s.value / s.exceptional
        assert math.exp(-(h.k - 1)) <= generic <= 1 + 1e-12


def _eps_d(h, d, cache):
    out = Fraction(1)
    for p in sorted(set(_factor(d))):
        a = 0
        while d % p == 0:
            d //= p
            a += 1
        key = (p, a)
        if key not in cache:
            cache[key] = local.epsilon(h, p, a)
        out *= cache[key]
        if out == 0:
            break
    return out


def _factor(n):
    p = 2
    while p * p <= n:
        while n % p == 0:
            yield p
            n //= p
        p += 1
    if n > 1:
        yield n


def test_series_identity_partial_sums():
    # 1 + sum over d of eps_h(d), with d composed of 2 and primes 3 mod 4, tends to S_h
    h = OffsetSet([0, 1])
    target = singular.singular_series(h, 10**7).value
    cache = {}
    partial = {}
    total = 1.0
    for d in range(2, 10**4 + 1):
        if all(p == 2 or p % 4 == 3 for p in _factor(d)):
            total += float(_eps_d(h, d, cache))
        if d in (10**3, 10**4):
            partial[d] = total
    assert abs(partial[10**4] - target) < abs(partial[10**3] - target)
    assert abs(partial[10**4] - target) < 0.02
