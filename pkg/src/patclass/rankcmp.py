"""Ranking comparators: Kendall's tau and Rank-Biased Overlap.

Tau applies to two strict rankings of the same id set; every pair of ids is
concordant (+1) or discordant (-1), and tau is their mean. RBO compares
possibly different id sets with exponentially decaying weight on deeper
ranks, normalized so identical prefixes score exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class RankCmpError(ValueError):
    pass


@dataclass(frozen=True)
class RankingPair:
    """Two rankings under comparison. Tau requires a shared universe; RBO
    accepts different id sets."""

    ranking_a: Sequence
    ranking_b: Sequence

    @property
    def shared_universe(self) -> bool:
        return set(_ids(self.ranking_a)) == set(_ids(self.ranking_b))

    def tau(self) -> float:
        return kendall_tau(self.ranking_a, self.ranking_b)

    def rbo(self, p: float = 0.9, depth: int | None = None) -> float:
        return rbo(self.ranking_a, self.ranking_b, p=p, depth=depth)


def _ids(ranking) -> list:
    # accept Ranking objects or plain ordered id sequences
    ids = list(getattr(ranking, "pattern_ids", ranking))
    if len(set(ids)) != len(ids):
        raise RankCmpError("ranking contains duplicate ids")
    return ids


def _count_inversions(values: list[int]) -> int:
    """Merge-sort inversion count, O(s log s)."""
    n = len(values)
    if n < 2:
        return 0
    buf = list(values)
    tmp = [0] * n
    total = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if buf[i] <= buf[j]:
                    tmp[k] = buf[i]
                    i += 1
                else:
                    tmp[k] = buf[j]
                    j += 1
                    total += mid - i
                k += 1
            tmp[k:hi] = buf[i:mid] if i < mid else buf[j:hi]
            buf[lo:hi] = tmp[lo:hi]
        width *= 2
    return total


def kendall_tau(ranking_a, ranking_b) -> float:
    """tau = mean over id pairs of sgn agreement between the two rankings.

    Both rankings must be strict orders over the same id set of size >= 2
    (ties are resolved upstream by the ranking step's id tie-break).
    """
    a = _ids(ranking_a)
    b = _ids(ranking_b)
    if set(a) != set(b):
        raise RankCmpError("tau requires identical id sets")
    s = len(a)
    if s < 2:
        raise RankCmpError("tau needs at least 2 items")
    pos_b = {p: i for i, p in enumerate(b)}
    seq = [pos_b[p] for p in a]
    inv = _count_inversions(seq)
    return 1.0 - 4.0 * inv / (s * (s - 1))


def rbo(ranking_a, ranking_b, p: float = 0.9, depth: int | None = None) -> float:
    """Truncated, normalized rank-biased overlap in [0, 1].

    RBO' = (1-p) * sum_{d=1..s} p^(d-1) * |A(d) & B(d)| / d, then divided by
    the identical-lists value of the same truncated sum, so two rankings with
    the same s-prefix score exactly 1. Id sets may differ.
    """
    if not (0.0 < p < 1.0):
        raise RankCmpError("p must be in (0, 1)")
    a = _ids(ranking_a)
    b = _ids(ranking_b)
    s = depth if depth is not None else max(len(a), len(b))
    if s < 1:
        raise RankCmpError("depth must be >= 1")
    seen_a: set = set()
    seen_b: set = set()
    overlap = 0
    raw = 0.0
    norm = 0.0
    weight = 1.0  # p^(d-1)
    for d in range(1, s + 1):
        fresh = set()
        if d <= len(a):
            seen_a.add(a[d - 1])
            fresh.add(a[d - 1])
        if d <= len(b):
            seen_b.add(b[d - 1])
            fresh.add(b[d - 1])
        for el in fresh:
            if el in seen_a and el in seen_b:
                overlap += 1
        raw += weight * overlap / d
        norm += weight
        weight *= p
    return raw / norm


def rbo_raw(ranking_a, ranking_b, p: float, depth: int) -> float:
    """Un-normalized truncated sum (1-p) * sum p^(d-1) * overlap/d."""
    if not (0.0 < p < 1.0):
        raise RankCmpError("p must be in (0, 1)")
    a = _ids(ranking_a)
    b = _ids(ranking_b)
    total = 0.0
    for d in range(1, depth + 1):
        over = len(set(a[:d]) & set(b[:d]))
        total += p ** (d - 1) * over / d
    return (1 - p) * total


def rbo_prefix_monotonicity_check(base, extension, p: float) -> bool:
    """True iff the un-normalized RBO' never decreases with depth when one
    ranking is a prefix of the other.

    RBO'(s+1) - RBO'(s) = (1-p) p^s overlap(s+1)/(s+1), accumulated
    incrementally; overlaps are non-negative, so any decrease is a bug.
    """
    b = _ids(base)
    e = _ids(extension)
    if e[:len(b)] != b:
        raise RankCmpError("extension must extend base")
    seen_b: set = set()
    seen_e: set = set()
    overlap = 0
    raw = 0.0
    prev = -1.0
    weight = 1.0
    for d in range(1, len(e) + 1):
        fresh = set()
        if d <= len(b):
            seen_b.add(b[d - 1])
            fresh.add(b[d - 1])
        seen_e.add(e[d - 1])
        fresh.add(e[d - 1])
        for el in fresh:
            if el in seen_b and el in seen_e:
                overlap += 1
        raw += (1 - p) * weight * overlap / d
        weight *= p
        if raw < prev - 1e-15:
            return False
        prev = raw
    return True
