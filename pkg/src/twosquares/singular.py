"""Singular series of offset sets, with rigorous truncation bounds.

The Euler product is split into exceptional primes (p = 2 and the primes
3 mod 4 dividing det h), which use exact local densities, and generic
primes, whose factor depends only on k = card h.  Generic factors are
accumulated as logarithms with ``math.fsum`` over primes in ascending
order, so the result is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from .errors import CutoffError
from .local import BUDGET, OffsetSet, _as_offsets, delta
from .primes import prime_factors, primes_3mod4_upto

DEFAULT_CUTOFF = 10**7

# Landau-Ramanujan constant.  Only the first six digits (0.764223) are
# printed in the source literature; the rest come from the Euler product
# (see ``landau_ramanujan``) and agree with it to ~1e-10 at P = 10^8.
LANDAU_RAMANUJAN = 0.7642236535892206


def _sum_inv_sq_3mod4_tail(P: int) -> float:
    """Upper bound for the sum of 1/n^2 over n > P with n = 3 (mod 4).

    Each term 1/n^2 is at most (1/4) * integral of t^-2 over [n - 4, n],
    and these intervals are disjoint and lie in (P - 4, inf).
    """
    if P <= 4:
        return 1 / 9 + 1 / 49 + 1 / (4 * 7)
    return 1.0 / (4 * (P - 4))


@dataclass(frozen=True)
class Truncated:
    """A truncated Euler product with a bound on |true - value|."""

    value: float
    tail_bound: float
    cutoff: int


def landau_ramanujan(P: int = DEFAULT_CUTOFF) -> Truncated:
    """Landau-Ramanujan constant from primes 3 mod 4 up to P."""
    if P < 3:
        raise ValueError("cutoff must be >= 3")
    q = primes_3mod4_upto(int(P)).astype(np.float64)
    log_prod = -0.5 * math.fsum(np.log1p(-1.0 / q**2).tolist())
    value = math.exp(log_prod) / math.sqrt(2)
    # tail of -1/2 sum log(1 - 1/p^2) is at most (1/2) s / (1 - 1/P^2)
    t = 0.5 * _sum_inv_sq_3mod4_tail(P) / (1 - 1 / P**2)
    return Truncated(value, value * math.expm1(t), int(P))


def generic_factor(p: int, k: int) -> Fraction:
    """delta_z(p)^-k delta_h(p) for p = 3 (mod 4) not dividing det h."""
    if p % 4 != 3:
        raise ValueError("generic factor is defined for p = 3 (mod 4)")
    return Fraction(p + 1, p) ** (k - 1) * Fraction(p - k + 1, p)


def _generic_logs(q: np.ndarray, k: int) -> np.ndarray:
    """log of the generic factor at each prime in q, computed as log1p(g - 1).

    g - 1 = (p^k - (p+1)^(k-1)(p-k+1)) * (-1/p^k); the numerator is a
    polynomial in p with integer coefficients of degree k - 2.
    """
    if k == 1:
        return np.zeros(q.size)
    # coefficients of (p+1)^(k-1) (p-k+1) - p^k, lowest degree first
    poly = np.polynomial.Polynomial
    num = poly([1, 1]) ** (k - 1) * poly([1 - k, 1]) - poly([0, 1]) ** k
    coef = np.round(num.coef).astype(np.float64)[: k - 1]
    qf = q.astype(np.float64)
    val = np.zeros(q.size)
    for c in coef[::-1]:
        val = val * qf + c
    return np.log1p(val / qf**k)


@lru_cache(maxsize=64)
def _generic_log_table(k: int, P: int) -> tuple[np.ndarray, np.ndarray, float]:
    q = primes_3mod4_upto(P)
    q = q[q >= k]  # p < k always divides det h
    logs = _generic_logs(q, k)
    return q, logs, math.fsum(logs.tolist())


def _generic_tail(k: int, P: int) -> float:
    """Bound on |log prod_{p > P} g(p, k)|."""
    if k == 1:
        return 0.0
    s = (k - 1) ** 2
    return s / (1 - s / P**2) * _sum_inv_sq_3mod4_tail(P)


def cutoff_for(k: int, tolerance: float) -> int:
    """Smallest power-of-ten cutoff whose relative tail is below ``tolerance``."""
    P = 10**3
    while _generic_tail(k, P) > tolerance:
        P *= 10
    return P


@dataclass(frozen=True)
class SingularSeriesValue:
    value: float
    tail_bound: float
    cutoff: int
    local_factors: tuple[tuple[int, Fraction], ...] = field(default=())

    @property
    def admissible(self) -> bool:
        return self.value > 0

    @property
    def exceptional(self) -> float:
        """Product of the exact exceptional factors."""
        return float(math.prod(f for _, f in self.local_factors))

    def bounds(self) -> tuple[float, float]:
        """Lower/upper bounds for the full product (generic part in [e^-(k-1), 1])."""
        return self.value - self.tail_bound, self.value


def exceptional_primes(h) -> list[int]:
    """Primes 3 mod 4 dividing det h."""
    return [p for p in prime_factors(_as_offsets(h).det) if p % 4 == 3]


def local_factors(h, budget: int = BUDGET) -> list[tuple[int, Fraction]]:
    """Exact factors 2^k delta_h(2) and (1 + 1/p)^k delta_h(p) for p | det h."""
    h = _as_offsets(h)
    k = h.k
    out = [(2, 2**k * delta(h, 2, budget).value)]
    for p in exceptional_primes(h):
        out.append((p, Fraction(p + 1, p) ** k * delta(h, p, budget).value))
    return out


def singular_series(h, P: int = DEFAULT_CUTOFF, budget: int = BUDGET) -> SingularSeriesValue:
    """Truncated singular series of h with a rigorous bound on the omitted primes."""
    h = _as_offsets(h)
    P = int(P)
    if P < 3:
        raise ValueError("cutoff must be >= 3")
    k = h.k
    exc = exceptional_primes(h)
    if exc and max(exc) > P:
        raise CutoffError(f"exceptional prime {max(exc)} exceeds cutoff {P}")
    factors = tuple(local_factors(h, budget))
    exact = math.prod(f for _, f in factors)
    if exact == 0:
        return SingularSeriesValue(0.0, 0.0, P, factors)
    q, logs, total = _generic_log_table(k, P)
    exc = [p for p in exc if p >= k]
    if exc:
        idx = np.searchsorted(q, exc)
        total = math.fsum([total, *(-logs[idx]).tolist()])
    value = float(exact) * math.exp(total)
    t = _generic_tail(k, P)
    return SingularSeriesValue(value, value * -math.expm1(-t), P, factors)


def is_admissible(h, budget: int = BUDGET) -> bool:
    """True iff every local density at p = 2 and p | det h (p = 3 mod 4) is positive."""
    h = _as_offsets(h)
    if delta(h, 2, budget).value == 0:
        return False
    return all(delta(h, p, budget).value > 0 for p in exceptional_primes(h))
