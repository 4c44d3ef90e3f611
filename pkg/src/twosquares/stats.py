"""Empirical statistics of sums of two squares.

Conventions (fixed by matching the published pair/triple tables exactly):

* correlation sums ``sum_{n <= x} 1_S(n + h_1) ... 1_S(n + h_k)`` run over
  0 <= n < x, so n = 0 contributes when h is a subset of S;
* N(x) counts elements of S in [1, x], and R_1(x) = N(x) / x.

Since N(x) is then the correlation count of h = {1}, both come out of one
segmented scan.  Scans build membership segment by segment and never hold
more than a few segments in memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math
from typing import Sequence

import numpy as np

from . import sieve
from .errors import BudgetError, CoverageError
from .local import OffsetSet, _as_offsets
from .regions import Region, compositions, lattice_points, volume
from .singular import DEFAULT_CUTOFF, cutoff_for, singular_series


def _segments(lo: int, hi: int, cuts: Sequence[int], segment: int):
    """Half-open pieces of [lo, hi), also split at every cut point."""
    points = sorted({lo, hi, *range(lo, hi, segment), *(c for c in cuts if lo < c < hi)})
    return list(zip(points, points[1:]))


def scan_counts(tuples: Sequence[Sequence[int]], xs: Sequence[int], window: sieve.SieveWindow | None = None,
                segment: int = sieve.SEGMENT) -> np.ndarray:
    """Correlation counts for each offset tuple at each x.

    Entry [i, j] is the number of 0 <= n < xs[j] with n + h in S for every
    h in tuples[i].  Offsets may be negative.
    """
    tuples = [tuple(int(h) for h in t) for t in tuples]
    xs = [int(x) for x in xs]
    if not tuples or not xs:
        return np.zeros((len(tuples), len(xs)), dtype=np.int64)
    hmin = min(min(t) for t in tuples)
    hmax = max(max(t) for t in tuples)
    top = max(xs)
    if window is not None and not window.covers(max(hmin, 0), top + hmax):
        raise CoverageError(
            f"window [{window.start}, {window.stop}) does not cover [{max(hmin, 0)}, {top + hmax})")
    pieces = _segments(0, top, xs, segment)
    totals = np.zeros(len(tuples), dtype=np.int64)
    out = np.zeros((len(tuples), len(xs)), dtype=np.int64)
    at = {x: [j for j, xx in enumerate(xs) if xx == x] for x in xs}
    for j in at.get(0, []):
        out[:, j] = 0
    for s, e in pieces:
        lo, hi = s + hmin, e + hmax
        if window is None:
            bits = sieve.membership(lo, hi)
        else:
            pad = max(0, -lo)
            bits = np.concatenate([np.zeros(pad, dtype=bool), window.slice(lo + pad, hi)])
        n = e - s
        for i, t in enumerate(tuples):
            acc = bits[t[0] - hmin : t[0] - hmin + n].copy()
            for h in t[1:]:
                acc &= bits[h - hmin : h - hmin + n]
            totals[i] += int(np.count_nonzero(acc))
        for j in at.get(e, []):
            out[:, j] = totals
    return out


def counting_function(x: int, window: sieve.SieveWindow | None = None) -> int:
    """N(x) = number of elements of S in [1, x]."""
    if window is not None:
        return sieve.count(window, x)
    return int(scan_counts([(1,)], [x])[0, 0])


def default_y(x: int, n_x: int | None = None) -> float:
    """Mean spacing x / N(x)."""
    n_x = counting_function(x) if n_x is None else n_x
    return x / n_x


@dataclass(frozen=True)
class CorrelationReport:
    h: OffsetSet
    x: int
    count: int
    n_x: int
    singular: float
    r_k: float = field(init=False)
    prediction: float = field(init=False)
    error_term: float = field(init=False)

    def __post_init__(self):
        r1 = self.n_x / self.x
        k = self.h.k
        object.__setattr__(self, "r_k", self.count / self.x)
        object.__setattr__(self, "prediction", self.singular * r1**k)
        object.__setattr__(self, "error_term", self.r_k / r1**k - self.singular)

    @property
    def expected_count(self) -> float:
        """x * S_h * R_1(x)^k."""
        return self.x * self.prediction

    @property
    def ratio(self) -> float:
        return self.count / self.expected_count if self.expected_count else math.nan


def correlation(h, x: int, window: sieve.SieveWindow | None = None, cutoff: int = DEFAULT_CUTOFF) -> CorrelationReport:
    h = _as_offsets(h)
    x = int(x)
    counts = scan_counts([h.offsets, (1,)], [x], window)
    sss = singular_series(h, cutoff).value
    return CorrelationReport(h, x, int(counts[0, 0]), int(counts[1, 0]), sss)


@dataclass(frozen=True)
class TableRow:
    x: int
    count: int
    prediction: float
    ratio: float


def table_rows(h, xs: Sequence[int], window: sieve.SieveWindow | None = None,
               cutoff: int = DEFAULT_CUTOFF) -> list[TableRow]:
    """Rows (x, count, x S_h R_1(x)^k, ratio) for each x, from one scan."""
    h = _as_offsets(h)
    xs = [int(x) for x in xs]
    counts = scan_counts([h.offsets, (1,)], xs, window)
    sss = singular_series(h, cutoff).value
    rows = []
    for j, x in enumerate(xs):
        rep = CorrelationReport(h, x, int(counts[0, j]), int(counts[1, j]), sss)
        rows.append(TableRow(x, rep.count, rep.expected_count, rep.ratio))
    return rows


@lru_cache(maxsize=1 << 20)
def _sss_normalized(offsets: tuple[int, ...], cutoff: int):
    return singular_series(OffsetSet(offsets), cutoff)


def _sss(h: OffsetSet, cutoff: int):
    return _sss_normalized(h.normalized().offsets, cutoff)


def _check_scale(x: int, y: float, n_x: int, tol: float = 0.01) -> None:
    if abs(y * n_x / x - 1) > tol:
        raise ValueError(f"y R_1(x) = {y * n_x / x:.4f} is not within {tol:.0%} of 1")


def averaged_error(k: int, region: Region, with_zero: bool, x: int, y: float | None = None,
                   cutoff: int = DEFAULT_CUTOFF) -> tuple[float, float, float]:
    """|sum of E_{o ∪ h}(x)|, sum of S_{o ∪ h}, and their ratio over h in y*region."""
    if region.k != k:
        raise ValueError("region dimension does not match k")
    x = int(x)
    n_x = counting_function(x)
    y = default_y(x, n_x) if y is None else y
    _check_scale(x, y, n_x)
    sets = [OffsetSet(((0,) if with_zero else ()) + pt) for pt in lattice_points(region, y)]
    if not sets:
        return 0.0, 0.0, 0.0
    counts = scan_counts([s.offsets for s in sets], [x])[:, 0]
    r1 = n_x / x
    err, tot = [], []
    for s, c in zip(sets, counts):
        sss = _sss(s, cutoff).value
        err.append(c / x / r1**s.k - sss)
        tot.append(sss)
    lhs, rhs = abs(math.fsum(err)), math.fsum(tot)
    return lhs, rhs, lhs / rhs if rhs else math.nan


@dataclass(frozen=True)
class SpacingHistogram:
    start: int
    stop: int
    gaps: np.ndarray = field(repr=False)
    mean_gap: float
    edges: np.ndarray = field(repr=False)
    masses: np.ndarray = field(repr=False)
    reference: np.ndarray = field(repr=False)
    sup_distance: float
    sup_distance_continuous: float

    @property
    def rescaled(self) -> np.ndarray:
        return self.gaps / self.mean_gap

    def density(self) -> tuple[np.ndarray, np.ndarray]:
        """Bin centres and empirical density, for plotting against exp(-t)."""
        widths = np.diff(self.edges)
        return (self.edges[:-1] + self.edges[1:]) / 2, self.masses / widths


def _cdf_distances(t: np.ndarray) -> tuple[float, float]:
    """Sup |F_emp - (1 - e^-t)| at the atoms, and over all t (left limits too)."""
    values, counts = np.unique(t, return_counts=True)
    right = np.cumsum(counts) / t.size
    left = right - counts / t.size
    ref = -np.expm1(-values)
    at_atoms = float(np.max(np.abs(right - ref)))
    return at_atoms, max(at_atoms, float(np.max(np.abs(left - ref))))


def spacing_histogram(window: sieve.SieveWindow, bins: int = 50, t_max: float | None = None) -> SpacingHistogram:
    """Gaps between consecutive elements in the window, rescaled to mean one.

    ``sup_distance`` compares the empirical CDF with 1 - e^-t at the observed
    gap values.  Gaps are integers, so the distance that also includes the
    left limits is bounded below by roughly 1 - e^(-1/mean gap) however
    Poissonian the data; it is reported as ``sup_distance_continuous``.
    """
    pts = sieve.elements(window)
    if pts.size < 3:
        raise ValueError("window holds fewer than three elements")
    gaps = np.diff(pts)
    mean = float(gaps.mean())
    t = gaps / mean
    top = float(t.max()) if t_max is None else float(t_max)
    edges = np.linspace(0.0, top, bins + 1)
    hist, _ = np.histogram(np.minimum(t, top), bins=edges)
    masses = hist / t.size
    reference = np.exp(-edges[:-1]) - np.exp(-edges[1:])
    sup_atoms, sup_all = _cdf_distances(t)
    return SpacingHistogram(window.start, window.stop, gaps, mean, edges, masses, reference, sup_atoms, sup_all)


def _elements_with_followers(lo: int, x: int, r: int) -> np.ndarray:
    """Elements of S in [lo, x] followed by at least r further elements."""
    margin = 64
    while True:
        pts = sieve.elements(sieve.SieveWindow.from_bools(lo, sieve.membership(lo, x + margin + 1)))
        if np.count_nonzero(pts > x) >= r:
            return pts
        margin *= 2


def _gap_hits(pts: np.ndarray, last: int, r: int, lambdas: Sequence[float], y: float) -> int:
    """Number of s in pts with s <= last whose next r gaps satisfy gap_j <= lambda_j y."""
    idx = np.flatnonzero(pts <= last)
    ok = np.ones(idx.size, dtype=bool)
    for j, lam in enumerate(lambdas, start=1):
        gap = pts[idx + j] - pts[idx + j - 1]
        ok &= gap <= lam * y
    return int(np.count_nonzero(ok))


def joint_gap_statistic(r: int, lambdas: Sequence[float], x: int, y: float | None = None) -> float:
    """(1/N(x)) #{s_n <= x : s_{n+j} - s_{n+j-1} <= lambda_j y for j <= r}."""
    if len(lambdas) != r:
        raise ValueError("need one lambda per gap")
    x = int(x)
    pts = _elements_with_followers(1, x, r)
    n_x = int(np.count_nonzero(pts <= x))
    y = x / n_x if y is None else y
    return _gap_hits(pts, x, r, lambdas, y) / n_x


def poisson_gap_probability(lambdas: Sequence[float]) -> float:
    return math.prod(-math.expm1(-lam) for lam in lambdas)


def _interval_histogram(x: int, width: int, segment: int = sieve.SEGMENT) -> np.ndarray:
    """bincount over 0 <= n < x of #S ∩ (n, n + width]."""
    hist = np.zeros(width + 1, dtype=np.int64)
    for s, e in _segments(0, x, [], segment):
        bits = sieve.membership(s + 1, e + width)
        cs = np.zeros(bits.size + 1, dtype=np.int64)
        np.cumsum(bits, out=cs[1:])
        n = e - s
        counts = cs[width : width + n] - cs[:n]
        hist += np.bincount(counts, minlength=width + 1)[: width + 1]
    return hist


@dataclass(frozen=True)
class IntervalCounts:
    x: int
    lam: float
    y: float
    width: int
    empirical: np.ndarray
    poisson: np.ndarray


def interval_counts(x: int, lam: float, y: float | None = None, m_max: int | None = None) -> IntervalCounts:
    """Fraction of n (0 <= n < x) with exactly m elements of S in (n, n + lam y]."""
    x = int(x)
    y = default_y(x) if y is None else y
    width = math.floor(lam * y)
    hist = _interval_histogram(x, width)
    top = max(width, m_max or 0)
    emp = np.zeros(top + 1)
    emp[: hist.size] = hist / x
    m = np.arange(top + 1)
    pois = np.exp(-lam + m * math.log(lam) - np.array([math.lgamma(i + 1) for i in m])) if lam > 0 else (m == 0) * 1.0
    if m_max is not None:
        emp, pois = emp[: m_max + 1], pois[: m_max + 1]
    return IntervalCounts(x, lam, y, width, emp, pois)


def empirical_moment(ell: int, x: int, lam: float, y: float | None = None) -> float:
    """(1/x) sum over 0 <= n < x of (N(n + lam y) - N(n))^ell, computed exactly."""
    x = int(x)
    y = default_y(x) if y is None else y
    hist = _interval_histogram(x, math.floor(lam * y))
    total = sum(int(c) * m**ell for m, c in enumerate(hist))
    return float(Fraction(total, x))


def inclusion_exclusion_bounds(r: int, lambdas: Sequence[float], x: int, y: float | None = None,
                               ell: int = 0, max_tuples: int = 10**6) -> tuple[int, int, int]:
    """Truncated inclusion-exclusion sums bracketing the consecutive-gap count.

    Returns (lower, middle, upper) where middle counts n in S with
    0 <= n < x whose next r gaps satisfy gap_j <= lambda_j y, and the outer
    terms are alternating sums of correlation counts N({0} ∪ h; x) over
    lattice points of the chain regions with r blocks and k = r..r+2l+1
    (lower) or k = r..r+2l (upper) points.
    """
    if len(lambdas) != r:
        raise ValueError("need one lambda per gap")
    x = int(x)
    y = default_y(x) if y is None else y
    by_k: dict[int, list[tuple[int, ...]]] = {}
    for k in range(r, r + 2 * ell + 2):
        pts = []
        for blocks in compositions(k, r):
            pts.extend(lattice_points(Region(blocks, lambdas), y))
            if len(pts) > max_tuples:
                raise BudgetError("too many lattice points for the inclusion-exclusion sums")
        by_k[k] = pts
    tuples = [(0, *h) for k in by_k for h in by_k[k]]
    counts = iter(scan_counts(tuples, [x])[:, 0].tolist()) if tuples else iter(())
    level = {k: sum(next(counts) for _ in by_k[k]) for k in by_k}
    upper = sum((-1) ** (k - r) * level[k] for k in range(r, r + 2 * ell + 1))
    lower = upper + (-1) ** (2 * ell + 1) * level[r + 2 * ell + 1]
    pts = _elements_with_followers(0, x - 1, r)
    middle = _gap_hits(pts, x - 1, r, lambdas, y)
    return lower, middle, upper


@dataclass(frozen=True)
class AverageReport:
    total: float
    main_term: float
    relative_error: float
    points: int
    max_tail: float


def singular_series_average(k: int, region: Region, with_zero: bool, y: float,
                            tolerance: float = 1e-8) -> AverageReport:
    """Sum of S_{o ∪ h} over integer points h of y*region, against y^k vol."""
    if region.k != k:
        raise ValueError("region dimension does not match k")
    size = k + int(with_zero)
    cutoff = cutoff_for(size, tolerance)
    while True:
        vals, tails, n = [], 0.0, 0
        for pt in lattice_points(region, y):
            s = _sss(OffsetSet(((0,) if with_zero else ()) + pt), cutoff)
            vals.append(s.value)
            tails = max(tails, s.tail_bound)
            n += 1
        if tails <= tolerance:
            break
        cutoff *= 10
    total = math.fsum(vals)
    main = y**k * volume(region)
    return AverageReport(total, main, (total - main) / main, n, tails)
