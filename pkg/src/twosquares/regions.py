"""Chain regions in the open simplex 0 < x_1 < ... < x_k, and Poisson combinatorics.

A chain region is given by block sizes (i_1, ..., i_r) summing to k and
lengths (lambda_1, ..., lambda_r): the last coordinate of block j exceeds
the last coordinate of block j - 1 (or 0) by at most lambda_j.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools
import math
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Region:
    blocks: tuple[int, ...]
    lengths: tuple[float, ...]

    def __init__(self, blocks: Sequence[int], lengths: Sequence[float]):
        blocks, lengths = tuple(int(b) for b in blocks), tuple(float(l) for l in lengths)
        if len(blocks) != len(lengths) or not blocks:
            raise ValueError("need one length per block")
        if any(b < 1 for b in blocks):
            raise ValueError("block sizes must be positive")
        if any(l < 0 for l in lengths):
            raise ValueError("lengths must be nonnegative")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "lengths", lengths)

    @classmethod
    def box(cls, k: int, lam: float = 1.0) -> Region:
        """The region 0 < x_1 < ... < x_k <= lam."""
        return cls((k,), (lam,))

    @property
    def k(self) -> int:
        return sum(self.blocks)

    def __contains__(self, x: Sequence[float]) -> bool:
        if len(x) != self.k or x[0] <= 0 or any(b <= a for a, b in zip(x, x[1:])):
            return False
        prev, end = 0.0, 0
        for size, lam in zip(self.blocks, self.lengths):
            end += size
            if x[end - 1] - prev > lam:
                return False
            prev = x[end - 1]
        return True


def volume(region: Region) -> float:
    """Lebesgue volume: prod lambda_j^i_j / i_j!."""
    return math.prod(lam**i / math.factorial(i) for i, lam in zip(region.blocks, region.lengths))


def lattice_points(region: Region, y: float) -> Iterator[tuple[int, ...]]:
    """Integer points of the dilate y * region, in lexicographic order."""
    bounds = [math.floor(lam * y) for lam in region.lengths]

    def walk(block: int, prefix: tuple[int, ...], anchor: int) -> Iterator[tuple[int, ...]]:
        if block == len(region.blocks):
            yield prefix
            return
        size, top = region.blocks[block], anchor + bounds[block]
        low = prefix[-1] + 1 if prefix else 1
        for pts in itertools.combinations(range(low, top + 1), size):
            yield from walk(block + 1, prefix + pts, pts[-1])

    yield from walk(0, (), 0)


def count_lattice_points(region: Region, y: float) -> int:
    return sum(1 for _ in lattice_points(region, y))


def compositions(k: int, r: int) -> Iterator[tuple[int, ...]]:
    """All (i_1, ..., i_r) of positive integers with sum k."""
    for cuts in itertools.combinations(range(1, k), r - 1):
        edges = (0, *cuts, k)
        yield tuple(b - a for a, b in zip(edges, edges[1:]))


MAX_ELL = 20


def surjections(ell: int, k: int) -> int:
    """Number of maps from {1..ell} onto {1..k}."""
    if ell > MAX_ELL:
        raise OverflowError(f"ell = {ell} exceeds {MAX_ELL}")
    if k < 1 or k > ell:
        return 0
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** ell for j in range(k + 1))


def poisson_moment(ell: int, lam: float) -> float:
    """ell-th raw moment of a Poisson(lam) variable, via surjection counts."""
    if ell == 0:
        return 1.0
    return math.fsum(surjections(ell, k) * lam**k / math.factorial(k) for k in range(1, ell + 1))
