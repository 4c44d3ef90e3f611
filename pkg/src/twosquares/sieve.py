"""Membership sieves for the set of sums of two squares.

Dense windows are built by lattice marking: every value a^2 + b^2 with
0 <= a <= b that falls in the window is flagged.  The same kernel serves
windows starting at 0 and far windows [X, X + W); for each a the admissible
b-range is found with exact integer square roots.

Windows store one bit per integer (little-endian bit order inside each
byte) and are cut into segments of ``SEGMENT`` integers while being built.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import os
from typing import BinaryIO, Iterator

import numba
import numpy as np
import sympy

from .errors import BudgetError, CoverageError, UnclassifiedError

SEGMENT = 1 << 26
MAX_DENSE = 10**10
MAX_A_ITERATIONS = 10**8
INT63 = 2**63 - 1

WINDOW_MAGIC = "sots-window v1"


def worker_count() -> int:
    """Worker threads for segment construction (``TWOSQUARES_WORKERS``, default all cores)."""
    env = os.environ.get("TWOSQUARES_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@numba.njit(cache=True, nogil=True)
def _isqrt(n):
    # floor(sqrt(n)) for 0 <= n < 2**62; float estimate corrected in integers
    r = np.int64(np.sqrt(np.float64(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@numba.njit(cache=True, nogil=True)
def _mark(out, lo, hi):
    amax = _isqrt((hi - 1) // 2)
    for a in range(amax + 1):
        a2 = a * a
        rem = lo - a2
        if rem <= 0:
            b = a
        else:
            b = _isqrt(rem - 1) + 1
            if b < a:
                b = a
        bmax = _isqrt(hi - 1 - a2)
        while b <= bmax:
            out[a2 + b * b - lo] = 1
            b += 1


def membership(lo: int, hi: int) -> np.ndarray:
    """Boolean membership array for the integers lo, ..., hi - 1.

    Negative integers are never sums of two squares; ``lo`` may be negative.
    """
    if hi <= lo:
        return np.zeros(0, dtype=bool)
    if hi - 1 > INT63 // 2:
        raise BudgetError(f"window end {hi} exceeds the 64-bit kernel range")
    out = np.zeros(hi - lo, dtype=np.uint8)
    start = max(lo, 0)
    if start < hi:
        _mark(out[start - lo :], start, hi)
    return out.view(bool)


def iter_membership(lo: int, hi: int, overhang: int = 0, segment: int = SEGMENT) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(s, bits)`` covering [lo, hi) in segments.

    ``bits`` spans [s, min(s + segment, hi) + overhang) so that scans of
    n + h with 0 <= h <= overhang stay inside one array.
    """
    starts = list(range(lo, hi, segment))

    def build(s: int) -> np.ndarray:
        return membership(s, min(s + segment, hi) + overhang)

    workers = worker_count()
    if workers == 1 or len(starts) <= 1:
        for s in starts:
            yield s, build(s)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # bounded look-ahead keeps memory to ~2 segments per worker
        pending = []
        it = iter(starts)
        for s in it:
            pending.append((s, pool.submit(build, s)))
            if len(pending) >= 2 * workers:
                s0, fut = pending.pop(0)
                yield s0, fut.result()
        for s0, fut in pending:
            yield s0, fut.result()


@dataclass(frozen=True)
class SieveWindow:
    """Membership bitmap for the integers start, ..., start + length - 1."""

    start: int
    length: int
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.start < 0 or self.length < 0:
            raise ValueError("window start and length must be nonnegative")
        if self.bits.dtype != np.uint8 or self.bits.size != (self.length + 7) // 8:
            raise ValueError("bits must be a packed uint8 array of ceil(length/8) bytes")
        self.bits.setflags(write=False)

    @property
    def stop(self) -> int:
        return self.start + self.length

    @classmethod
    def from_bools(cls, start: int, flags: np.ndarray) -> SieveWindow:
        flags = np.asarray(flags, dtype=bool)
        return cls(start, flags.size, np.packbits(flags, bitorder="little"))

    def covers(self, lo: int, hi: int) -> bool:
        return self.start <= lo and hi <= self.stop

    def slice(self, lo: int, hi: int) -> np.ndarray:
        """Boolean membership for [lo, hi); must lie inside the window."""
        if not self.covers(lo, hi):
            raise CoverageError(f"[{lo}, {hi}) is outside window [{self.start}, {self.stop})")
        i, j = lo - self.start, hi - self.start
        chunk = np.unpackbits(self.bits[i // 8 : (j + 7) // 8], bitorder="little")
        return chunk[i % 8 : i % 8 + (j - i)].view(bool)

    def bools(self) -> np.ndarray:
        return self.slice(self.start, self.stop)

    def __contains__(self, n: int) -> bool:
        if not self.start <= n < self.stop:
            raise CoverageError(f"{n} is outside window [{self.start}, {self.stop})")
        i = n - self.start
        return bool((self.bits[i // 8] >> (i % 8)) & 1)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, SieveWindow):
            return NotImplemented
        return (self.start, self.length) == (other.start, other.length) and np.array_equal(self.bools(), other.bools())

    def __hash__(self):
        return hash((self.start, self.length))

    def concat(self, other: SieveWindow) -> SieveWindow:
        """Window of the union of two adjacent windows."""
        if other.start != self.stop:
            raise ValueError("windows are not adjacent")
        return SieveWindow.from_bools(self.start, np.concatenate([self.bools(), other.bools()]))

    def dump(self, fh: BinaryIO) -> None:
        fh.write(f"{WINDOW_MAGIC} start={self.start} length={self.length}\n".encode("ascii"))
        fh.write(self.bits.tobytes())

    @classmethod
    def load(cls, fh: BinaryIO) -> SieveWindow:
        header = fh.readline().decode("ascii").split()
        if " ".join(header[:2]) != WINDOW_MAGIC:
            raise ValueError("not a sots-window v1 file")
        fields = dict(item.split("=", 1) for item in header[2:])
        start, length = int(fields["start"]), int(fields["length"])
        raw = fh.read((length + 7) // 8)
        if len(raw) != (length + 7) // 8:
            raise ValueError("truncated window bitmap")
        return cls(start, length, np.frombuffer(raw, dtype=np.uint8).copy())


def _build(lo: int, hi: int) -> SieveWindow:
    # segments are multiples of 8 long, so packed pieces concatenate byte-aligned
    parts = [np.packbits(bits, bitorder="little") for _, bits in iter_membership(lo, hi)]
    packed = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)
    return SieveWindow(lo, hi - lo, packed)


def sieve_upto(x: int, max_integers: int = MAX_DENSE) -> SieveWindow:
    """Window [0, x] (inclusive) with exact membership."""
    x = int(x)
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x + 1 > max_integers:
        raise BudgetError(f"sieve_upto({x}) exceeds the budget of {max_integers} integers")
    return _build(0, x + 1)


def window_sieve(X: int, W: int, max_iterations: int = MAX_A_ITERATIONS) -> SieveWindow:
    """Window [X, X + W) with exact membership."""
    X, W = int(X), int(W)
    if X < 0 or W <= 0:
        raise ValueError("need X >= 0 and W > 0")
    if math.isqrt((X + W - 1) // 2) > max_iterations:
        raise BudgetError(f"window [{X}, {X + W}) needs more than {max_iterations} a-iterations")
    if W > MAX_DENSE:
        raise BudgetError(f"window length {W} exceeds {MAX_DENSE}")
    return _build(X, X + W)


def _small_primes(limit: int) -> list[int]:
    from .primes import primes_upto

    return primes_upto(limit).tolist()


def is_sots(n: int) -> bool:
    """True iff n = a^2 + b^2 for integers a, b.

    Trial division runs up to the cube root (capped at 2 * 10^6); what is
    left then has at most two prime factors, which are classified with a
    primality test, a square test and, only when both factors could be
    3 mod 4, an explicit factorisation.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > INT63:
        raise UnclassifiedError(f"{n} is outside the supported range")
    if n == 0:
        return True
    bound = min(round(n ** (1 / 3)) + 1, 2 * 10**6)
    for p in _small_primes(bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if p % 4 == 3 and e % 2:
                return False
    if n == 1:
        return True
    if bound >= 2 * 10**6 and bound**3 < n:
        # cofactor may have three or more large factors
        return all(e % 2 == 0 for p, e in sympy.factorint(n).items() if p % 4 == 3)
    if sympy.isprime(n):
        return n % 4 != 3
    r = math.isqrt(n)
    if r * r == n:
        return True
    # n = q * r with distinct primes q, r
    if n % 4 == 3:
        return False
    factors = sympy.factorint(n)
    if len(factors) != 2:
        raise UnclassifiedError(f"unexpected cofactor structure for {n}")
    return all(p % 4 == 1 for p in factors)


def count(window: SieveWindow, x: int) -> int:
    """N(x): number of elements of the set in [1, x]."""
    x = int(x)
    if x <= 0:
        if x < 0:
            raise CoverageError("x must be nonnegative")
        return 0
    if window.start > 1 or window.stop < x + 1:
        raise CoverageError(f"window [{window.start}, {window.stop}) does not cover [1, {x}]")
    return int(np.count_nonzero(window.slice(1, x + 1)))


def count_upto(x: int) -> int:
    """N(x) by streaming segments, without keeping a window."""
    return sum(int(np.count_nonzero(bits)) for _, bits in iter_membership(1, int(x) + 1))


def level_density(x: int, window: SieveWindow | None = None) -> float:
    """R_1(x) = N(x) / x."""
    if x < 1:
        raise ValueError("x must be >= 1")
    n = count(window, x) if window is not None else count_upto(x)
    return n / x


def elements(window: SieveWindow) -> np.ndarray:
    """Sorted elements of the set inside the window."""
    if window.length == 0:
        return np.zeros(0, dtype=np.int64)
    return window.start + np.flatnonzero(window.bools()).astype(np.int64)
