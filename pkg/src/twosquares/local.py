"""Exact local densities at p = 2 and p = 3 (mod 4).

Everything here is rational: densities come back as ``fractions.Fraction``
and residue sets as sorted integer arrays.  Residue enumeration is
vectorised over chunks of residues and is bounded by ``BUDGET`` residues
per call.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import itertools
import math
from typing import Iterable

import numpy as np

from .errors import BudgetError

BUDGET = 1 << 28
_CHUNK = 1 << 20


@dataclass(frozen=True)
class OffsetSet:
    """A finite set of distinct integer offsets h_1 < ... < h_k."""

    offsets: tuple[int, ...]

    def __init__(self, offsets: Iterable[int]):
        offs = tuple(sorted(int(h) for h in offsets))
        if not offs:
            raise ValueError("an offset set needs at least one element")
        if any(a == b for a, b in zip(offs, offs[1:])):
            raise ValueError(f"duplicate offsets in {offs}")
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def union(cls, *parts: Iterable[int]) -> OffsetSet:
        """Set union of the given offsets; repeated values collapse."""
        return cls(set(itertools.chain.from_iterable(parts)))

    @property
    def k(self) -> int:
        return len(self.offsets)

    def __len__(self) -> int:
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def __repr__(self) -> str:
        return "OffsetSet({" + ", ".join(map(str, self.offsets)) + "})"

    def shifted(self, c: int) -> OffsetSet:
        return OffsetSet(h + c for h in self.offsets)

    def normalized(self) -> OffsetSet:
        """Translate so that the smallest offset is 0."""
        return self.shifted(-self.offsets[0])

    def differences(self) -> list[int]:
        return [b - a for a, b in itertools.combinations(self.offsets, 2)]

    @property
    def det(self) -> int:
        """Product of all positive differences; 1 when k = 1."""
        return math.prod(self.differences())

    def max_valuation(self, p: int) -> int:
        """max over i != j of nu_p(h_i - h_j); zero when k = 1."""
        return max((nu_p(d, p) for d in self.differences()), default=0)


def _as_offsets(h) -> OffsetSet:
    return h if isinstance(h, OffsetSet) else OffsetSet(h)


def nu_p(n: int, p: int) -> int | float:
    """p-adic valuation of n, with nu_p(0) = inf."""
    n = int(n)
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def in_Sp(n: int, p: int) -> bool:
    """Membership of the integer n (any sign) in the local set S_p."""
    n = int(n)
    if n == 0 or p % 4 == 1:
        return True
    v = nu_p(n, p)
    if p == 2:
        return (n >> v) % 4 == 1
    return v % 2 == 0


def h_p_set(h, p: int) -> OffsetSet | tuple:
    """Offsets h' with h - h' in S_p for every h in the set; may be empty."""
    h = _as_offsets(h)
    keep = [b for b in h if all(in_Sp(a - b, p) for a in h)]
    return OffsetSet(keep) if keep else ()


def _valuation_vec(n: np.ndarray, p: int, cap: int) -> np.ndarray:
    """nu_p of each entry, saturated at ``cap`` (zeros map to cap)."""
    v = np.zeros(n.shape, dtype=np.int64)
    m = n.copy()
    live = m != 0
    v[~live] = cap
    for _ in range(cap):
        hit = live & (m % p == 0)
        if not hit.any():
            break
        v[hit] += 1
        m[hit] //= p
        live = hit
    return v


def _good_mask(n: np.ndarray, p: int, level: int) -> np.ndarray:
    """n in S_p and nu_p(n) < level, evaluated on the integers n."""
    v = _valuation_vec(n, p, level)
    ok = v < level
    if p == 2:
        odd = np.right_shift(n, np.minimum(v, 62))
        return ok & (odd % 4 == 1)
    return ok & (v % 2 == 0)


def _enumerate(h: OffsetSet, p: int, modulus: int, level: int, budget: int) -> np.ndarray:
    if modulus > budget:
        raise BudgetError(f"residue enumeration mod {modulus} exceeds budget {budget}")
    base = h.offsets[0]
    shifts = np.array([x - base for x in h.offsets], dtype=np.int64)
    found = []
    for lo in range(0, modulus, _CHUNK):
        a = np.arange(lo, min(lo + _CHUNK, modulus), dtype=np.int64)
        keep = np.ones(a.size, dtype=bool)
        for s in shifts:
            keep &= _good_mask(a + s, p, level)
        found.append(a[keep])
    res = np.concatenate(found) if found else np.zeros(0, dtype=np.int64)
    # residues were computed for h - base; undo the translation
    return np.sort((res - base) % modulus)


def enumerate_T(h, alpha: int, budget: int = BUDGET) -> np.ndarray:
    """T_h(2^(alpha+1)): residues a with a + h in S_2 and max nu_2(a + h) < alpha."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    return _enumerate(_as_offsets(h), 2, 2 ** (alpha + 1), alpha, budget)


def enumerate_V(h, p: int, alpha: int, budget: int = BUDGET) -> np.ndarray:
    """V_h(p^alpha): residues a with a + h in S_p and max nu_p(a + h) < alpha."""
    if p % 4 != 3:
        raise ValueError("enumerate_V needs p = 3 (mod 4)")
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if p**alpha > budget:
        raise BudgetError(f"residue enumeration mod {p}^{alpha} exceeds budget {budget}")
    return _enumerate(_as_offsets(h), p, p**alpha, alpha, budget)


@dataclass(frozen=True)
class LocalDensity:
    p: int
    alpha: int
    residue_count: int
    hp_count: int
    value: Fraction

    def __float__(self) -> float:
        return float(self.value)


def stabilization_exponent(h, p: int) -> int:
    h = _as_offsets(h)
    if p == 2:
        return 2 + h.max_valuation(2)
    return 1 + h.max_valuation(p)


@lru_cache(maxsize=1 << 16)
def _delta_cached(offsets: tuple[int, ...], p: int, budget: int) -> LocalDensity:
    h = OffsetSet(offsets)
    if p % 4 == 1:
        return LocalDensity(p, 0, 0, 0, Fraction(1))
    alpha = stabilization_exponent(h, p)
    hp = h_p_set(h, p)
    if p == 2:
        count = len(enumerate_T(h, alpha, budget))
        value = Fraction(count + len(hp), 2 ** (alpha + 1))
    else:
        count = len(enumerate_V(h, p, alpha, budget))
        value = (count + len(hp) * Fraction(p, p + 1) / p ** (alpha % 2)) / p**alpha
    return LocalDensity(p, alpha, count, len(hp), value)


def delta(h, p: int, budget: int = BUDGET) -> LocalDensity:
    """Exact local density delta_h(p) at the stabilisation exponent."""
    h = _as_offsets(h).normalized()
    return _delta_cached(h.offsets, int(p), budget)


def _ratio(h: OffsetSet, p: int, m: int, budget: int) -> Fraction:
    # card T_h(p^m)/p^m for p = 2 (V for odd p); levels 0 and 1 by convention
    if p == 2:
        if m <= 1:
            return Fraction(1)
        return Fraction(len(enumerate_T(h, m - 1, budget)), 2**m)
    if m == 0:
        return Fraction(1)
    return Fraction(len(enumerate_V(h, p, m, budget)), p**m)


def epsilon(h, p: int, alpha: int, j: int | None = None, budget: int = BUDGET) -> Fraction:
    """Local increment eps_h(p^alpha; j); j defaults to card h."""
    h = _as_offsets(h)
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    j = h.k if j is None else j
    z = OffsetSet([0])
    hi = _ratio(z, p, alpha, budget) ** -j * _ratio(h, p, alpha, budget)
    lo = _ratio(z, p, alpha - 1, budget) ** -j * _ratio(h, p, alpha - 1, budget)
    return hi - lo


def _indicator(p: int, m: int) -> np.ndarray:
    """Residues r mod p^m with r counted by T (p = 2) or V (odd p) at level m."""
    modulus = p**m
    r = np.arange(modulus, dtype=np.int64)
    level = m - 1 if p == 2 else m
    return _good_mask(r, p, level).astype(np.int64)


def _tuple_counts(p: int, m: int, modulus: int, k: int, with_zero: bool) -> np.ndarray:
    """Residue-set sizes at level m for every k-tuple of offsets mod ``modulus``.

    Entry [h_1, ..., h_k] is card of the T/V set of o ∪ {h_1, ..., h_k}, found
    by summing the product of shifted indicators over all residues a.
    """
    shape = (modulus,) * k
    if (p == 2 and m <= 1) or (p != 2 and m == 0):
        const = {0: 1, 1: 2}[m] if p == 2 else 1
        return np.full(shape, const, dtype=np.int64)
    small = p**m
    g = _indicator(p, m)
    a = np.arange(small)[:, None]
    hs = np.arange(modulus)[None, :]
    shifted = g[(a + hs) % small]  # [a, h] -> indicator(a + h)
    weight = g if with_zero else np.ones(small, dtype=np.int64)
    if k == 1:
        return weight @ shifted
    if k == 2:
        return shifted.T @ (weight[:, None] * shifted)
    out = np.zeros(shape, dtype=np.int64)
    for ai in range(small):
        if weight[ai]:
            row = shifted[ai]
            term = row
            for _ in range(k - 1):
                term = np.multiply.outer(term, row)
            out += term
    return out


def cancellation_sum(p: int, alpha: int, k: int, with_zero: bool, budget: int = 1 << 24) -> Fraction:
    """Sum of eps_{o ∪ h}(p^alpha; |o| + k) over all (h_1..h_k) in (Z/p^alpha)^k.

    ``with_zero`` selects o = {0} rather than the empty set.  The sum is
    exact: per-tuple residue counts are integers and the two prefactors are
    rationals shared by all tuples.
    """
    modulus = p**alpha
    if modulus**k > budget or k > 3:
        raise BudgetError(f"{modulus}^{k} tuples exceed the cancellation budget")
    j = k + int(with_zero)
    z = OffsetSet([0])
    hi_w = _ratio(z, p, alpha, BUDGET) ** -j / p**alpha
    lo_w = _ratio(z, p, alpha - 1, BUDGET) ** -j / p ** (alpha - 1)
    hi = int(_tuple_counts(p, alpha, modulus, k, with_zero).sum())
    lo = int(_tuple_counts(p, alpha - 1, modulus, k, with_zero).sum())
    return hi_w * hi - lo_w * lo
