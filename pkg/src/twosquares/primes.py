"""Small prime tables used by the density and product code."""

from functools import lru_cache
import math

import numpy as np


@lru_cache(maxsize=4)
def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (plain Eratosthenes, odd-only)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    # index i stands for 2*i + 1
    odd = np.ones((n + 1) // 2, dtype=bool)
    odd[0] = False
    for i in range(1, (math.isqrt(n) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2 :: p] = False
    out = 2 * np.flatnonzero(odd).astype(np.int64) + 1
    return np.concatenate(([2], out)).astype(np.int64)


@lru_cache(maxsize=4)
def primes_3mod4_upto(n: int) -> np.ndarray:
    p = primes_upto(n)
    return p[p % 4 == 3]


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n| by trial division (n small)."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out
