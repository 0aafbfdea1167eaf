"""Permutations, symbol strings and the two metrics on them.

Symbols are the integers ``1..n`` (or ``1..sigma`` for strings).  Positions
and alignment pairs are 0-based Python indices.
"""

from __future__ import annotations

import enum
from bisect import bisect_left
from collections import defaultdict
from typing import Iterable, Sequence


class DimensionMismatchError(ValueError):
    pass


class CapExceededError(ValueError):
    """A size cap guarding an exponential computation was exceeded."""


class Metric(enum.Enum):
    ULAM = "ulam"
    EDIT_INDEL = "edit"


class Permutation(tuple):
    """A bijection on ``{1..n}`` in one-line notation.

    >>> Permutation([3, 1, 2]).inverse()
    Permutation(2, 3, 1)
    """

    def __new__(cls, elems: Iterable[int] = ()) -> "Permutation":
        self = super().__new__(cls, (int(e) for e in elems))
        n = len(self)
        if n == 0:
            raise ValueError("empty permutation")
        if sorted(self) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {tuple(self)}")
        return self

    @property
    def n(self) -> int:
        return len(self)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    def positions(self) -> list[int]:
        """``pos[a]`` is the 0-based index of symbol ``a``; ``pos[0]`` is unused."""
        pos = [0] * (len(self) + 1)
        for i, a in enumerate(self):
            pos[a] = i
        return pos

    def inverse(self) -> "Permutation":
        return Permutation(p + 1 for p in self.positions()[1:])

    def __repr__(self) -> str:
        return f"Permutation{tuple(self)!r}"


class SymbolString(tuple):
    """A string over the alphabet ``{1..sigma}``; repeats allowed."""

    def __new__(cls, elems: Iterable[int] = (), sigma: int | None = None) -> "SymbolString":
        self = super().__new__(cls, (int(e) for e in elems))
        if sigma is None:
            sigma = max(self, default=1)
        if any(not 1 <= e <= sigma for e in self):
            raise ValueError(f"symbols must lie in 1..{sigma}")
        self.sigma = sigma
        return self

    def is_permutation(self) -> bool:
        return sorted(self) == list(range(1, len(self) + 1))

    def __repr__(self) -> str:
        return f"SymbolString({tuple(self)!r}, sigma={self.sigma})"


def _check_same_n(x: Sequence[int], y: Sequence[int]) -> None:
    if len(x) != len(y):
        raise DimensionMismatchError(f"dimension mismatch: {len(x)} != {len(y)}")


def lis_length(seq: Sequence[int]) -> int:
    """Length of the longest strictly increasing subsequence (patience sorting)."""
    tops: list[int] = []
    for v in seq:
        k = bisect_left(tops, v)
        if k == len(tops):
            tops.append(v)
        else:
            tops[k] = v
    return len(tops)


def ulam_distance(x: Sequence[int], y: Sequence[int]) -> int:
    """Minimum number of symbol moves turning ``x`` into ``y``.

    Relabels ``y`` by positions in ``x`` so the common subsequences become
    increasing subsequences; runs in O(n log n).
    """
    _check_same_n(x, y)
    pos = {a: i for i, a in enumerate(x)}
    return len(x) - lis_length([pos[b] for b in y])


def _suffix_lcs_table(x: Sequence[int], y: Sequence[int]) -> list[list[int]]:
    """``T[i][j]`` = LCS length of ``x[i:]`` and ``y[j:]``."""
    n1, n2 = len(x), len(y)
    T = [[0] * (n2 + 1) for _ in range(n1 + 1)]
    for i in range(n1 - 1, -1, -1):
        row, below = T[i], T[i + 1]
        xi = x[i]
        for j in range(n2 - 1, -1, -1):
            if xi == y[j]:
                row[j] = below[j + 1] + 1
            else:
                r, b = row[j + 1], below[j]
                row[j] = r if r > b else b
    return T


def lcs_length(x: Sequence[int], y: Sequence[int]) -> int:
    # single-row DP; the full table is only needed for witnesses
    prev = [0] * (len(y) + 1)
    for a in x:
        cur = [0]
        for j, b in enumerate(y):
            if a == b:
                cur.append(prev[j] + 1)
            else:
                cur.append(cur[j] if cur[j] > prev[j + 1] else prev[j + 1])
        prev = cur
    return prev[-1]


def lcs_alignment(x: Sequence[int], y: Sequence[int]) -> list[tuple[int, int]]:
    """Canonical maximum alignment between ``x`` and ``y``.

    Returns the lexicographically smallest list of ``(i, j)`` pairs among all
    longest common subsequence witnesses, so repeated calls and different
    platforms agree on which symbols are matched.

    >>> lcs_alignment([2, 1], [1, 2])
    [(0, 1)]
    """
    T = _suffix_lcs_table(x, y)
    occurrences: dict[int, list[int]] = defaultdict(list)
    for j, b in enumerate(y):
        occurrences[b].append(j)

    pairs: list[tuple[int, int]] = []
    i0, j0 = 0, 0
    remaining = T[0][0]
    while remaining:
        for i in range(i0, len(x)):
            occ = occurrences.get(x[i])
            if not occ:
                continue
            k = bisect_left(occ, j0)
            if k == len(occ):
                continue
            # the earliest occurrence dominates later ones for this i
            j = occ[k]
            if T[i + 1][j + 1] == remaining - 1:
                pairs.append((i, j))
                i0, j0 = i + 1, j + 1
                remaining -= 1
                break
    return pairs


def edit_distance_indel(s: Sequence[int], t: Sequence[int]) -> int:
    """Insertion/deletion edit distance ``|s| + |t| - 2 * LCS(s, t)``."""
    return len(s) + len(t) - 2 * lcs_length(s, t)


def distance(x: Sequence[int], y: Sequence[int], metric: Metric) -> int:
    if metric is Metric.ULAM:
        return ulam_distance(x, y)
    return edit_distance_indel(x, y)


def objective(S: Sequence[Sequence[int]], y: Sequence[int], metric: Metric = Metric.ULAM) -> int:
    """Sum of distances from ``y`` to every member of ``S``."""
    if metric is Metric.ULAM:
        for x in S:
            _check_same_n(x, y)
    return sum(distance(y, x, metric) for x in S)


def moved_set(reference: Sequence[int], x: Sequence[int]) -> set[int]:
    """Symbols of ``reference`` left unmatched by the canonical alignment with ``x``."""
    _check_same_n(reference, x)
    matched = {i for i, _ in lcs_alignment(reference, x)}
    return {a for i, a in enumerate(reference) if i not in matched}
