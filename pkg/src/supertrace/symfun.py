"""Symmetric-group counts: partitions, hook dimensions, codimensions of
matrix invariants and d-good permutations."""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Partition:
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        rows = tuple(self.rows)
        if any(r <= 0 for r in rows) or any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"{rows} is not a partition")
        object.__setattr__(self, "rows", rows)

    @property
    def m(self) -> int:
        return sum(self.rows)

    @property
    def height(self) -> int:
        return len(self.rows)

    def conjugate(self) -> "Partition":
        if not self.rows:
            return self
        return Partition(tuple(sum(1 for r in self.rows if r > j) for j in range(self.rows[0])))

    def hooks(self) -> list[int]:
        cols = self.conjugate().rows
        return [
            (r - j - 1) + (cols[j] - i - 1) + 1
            for i, r in enumerate(self.rows)
            for j in range(r)
        ]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.rows)) + ")"


def partitions(m: int) -> Iterator[Partition]:
    """Partitions of ``m`` in reverse-lexicographic order, ``(m)`` first."""

    def rec(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for rows in rec(m, m):
        yield Partition(rows)


def hook_dimension(lam: Partition | Sequence[int]) -> int:
    if not isinstance(lam, Partition):
        lam = Partition(tuple(lam))
    return math.factorial(lam.m) // math.prod(lam.hooks())


@lru_cache(maxsize=None)
def codimension(m: int, n: int) -> int:
    """Sum of squared dimensions over partitions of ``m`` with at most ``n`` rows."""
    return sum(hook_dimension(p) ** 2 for p in partitions(m) if p.height <= n)


def antisymmetrizer_ideal_dim(m: int, n: int) -> int:
    """Dimension of the two-sided ideal of ``Q[S_m]`` generated by the
    antisymmetrizer on ``n+1`` letters."""
    return sum(hook_dimension(p) ** 2 for p in partitions(m) if p.height > n)


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def longest_decreasing(seq: Sequence[int]) -> int:
    """Length of the longest strictly decreasing subsequence (patience sorting
    on negated values)."""
    piles: list[int] = []
    for v in seq:
        k = bisect.bisect_left(piles, -v)
        if k == len(piles):
            piles.append(-v)
        else:
            piles[k] = -v
    return len(piles)


def is_d_good(sigma: Sequence[int], d: int) -> bool:
    """True when ``sigma`` (one-line notation) has no decreasing subsequence
    of length ``d``."""
    return longest_decreasing(sigma) < d


def count_d_good(m: int, d: int) -> int:
    return sum(1 for p in itertools.permutations(range(1, m + 1)) if is_d_good(p, d))


def codimension_table(m_max: int, n: int) -> list[dict]:
    return [
        {
            "m": m,
            "n": n,
            "codim": codimension(m, n),
            "kernel": antisymmetrizer_ideal_dim(m, n),
            "good": count_d_good(m, n + 1),
        }
        for m in range(1, m_max + 1)
    ]
