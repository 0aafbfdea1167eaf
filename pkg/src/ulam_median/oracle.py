"""Brute-force ground truth for small instances.

Nothing here shares code paths with the algorithms it certifies: permutation
objectives use a vectorised quadratic LIS rather than patience sorting, and
move distances come from a literal breadth-first search over single moves.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .perm_core import CapExceededError, Metric, edit_distance_indel, objective

PERMUTATION_CAP = 8
STRING_SPACE_CAP = 10**6
BFS_CAP = 5


@dataclass(frozen=True)
class Space:
    """Candidate space: all permutations of ``1..length`` or all of ``[sigma]^length``."""

    kind: str
    length: int
    sigma: int | None = None

    @classmethod
    def permutations(cls, n: int) -> "Space":
        return cls("permutations", n)

    @classmethod
    def strings(cls, sigma: int, length: int) -> "Space":
        return cls("strings", length, sigma)

    @property
    def size(self) -> int:
        if self.kind == "permutations":
            return math.factorial(self.length)
        return self.sigma**self.length


@dataclass
class OracleResult:
    optimum: tuple[int, ...]
    opt_value: int
    search_space_size: int
    elapsed: float


def _batch_lis(P: np.ndarray) -> np.ndarray:
    """LIS length of every row of ``P`` by the O(n^2) recurrence."""
    rows, n = P.shape
    L = np.ones((rows, n), dtype=np.int16)
    for k in range(1, n):
        best = np.zeros(rows, dtype=np.int16)
        for j in range(k):
            cand = np.where(P[:, j] < P[:, k], L[:, j], 0)
            np.maximum(best, cand, out=best)
        L[:, k] = best + 1
    return L.max(axis=1)


def _permutation_objectives(S: Sequence[Sequence[int]], Y: np.ndarray) -> np.ndarray:
    n = Y.shape[1]
    total = np.zeros(len(Y), dtype=np.int64)
    for x in S:
        pos = np.empty(n + 1, dtype=np.int64)
        pos[list(x)] = np.arange(n)
        total += n - _batch_lis(pos[Y])
    return total


def brute_force_median(
    S: Sequence[Sequence[int]],
    metric: Metric = Metric.ULAM,
    space: Space | None = None,
    cap: int | None = None,
) -> OracleResult:
    """Exhaustive minimiser of the summed distance; lexicographically smallest argmin."""
    start = time.perf_counter()
    if space is None:
        space = Space.permutations(len(S[0]))
    if space.kind == "permutations":
        limit = PERMUTATION_CAP if cap is None else cap
        if space.length > limit:
            raise CapExceededError(
                f"search space too large: n={space.length} > {limit} ({space.size} permutations)"
            )
    else:
        limit = STRING_SPACE_CAP if cap is None else cap
        if space.size > limit:
            raise CapExceededError(f"search space too large: {space.size} strings > {limit}")

    if space.kind == "permutations" and metric is Metric.ULAM:
        Y = np.array(list(itertools.permutations(range(1, space.length + 1))), dtype=np.int64)
        values = _permutation_objectives(S, Y)
        k = int(np.argmin(values))
        best, best_value = tuple(int(v) for v in Y[k]), int(values[k])
    else:
        if space.kind == "permutations":
            candidates = itertools.permutations(range(1, space.length + 1))
        else:
            candidates = itertools.product(range(1, space.sigma + 1), repeat=space.length)
        best, best_value = None, None
        for y in candidates:
            value = sum(edit_distance_indel(y, x) for x in S)
            if best_value is None or value < best_value:
                best, best_value = y, value
                if value == 0:
                    break
    return OracleResult(
        optimum=tuple(best),
        opt_value=best_value,
        search_space_size=space.size,
        elapsed=time.perf_counter() - start,
    )


def move_neighbours(x: tuple[int, ...]):
    n = len(x)
    for i in range(n):
        rest = x[:i] + x[i + 1:]
        for j in range(n):
            if j != i:
                yield rest[:j] + (x[i],) + rest[j:]


def bfs_move_distances(x: Sequence[int], cap: int = BFS_CAP) -> dict[tuple[int, ...], int]:
    """Move distance from ``x`` to everything reachable, by plain BFS."""
    x = tuple(x)
    if len(x) > cap:
        raise CapExceededError(f"BFS state space too large: n={len(x)} > {cap}")
    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w in move_neighbours(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def brute_force_ulam_bfs(x: Sequence[int], y: Sequence[int], cap: int = BFS_CAP) -> int:
    x, y = tuple(x), tuple(y)
    if len(x) > cap:
        raise CapExceededError(f"BFS state space too large: n={len(x)} > {cap}")
    if sorted(x) != sorted(y):
        raise ValueError("x and y must be permutations of the same symbols")
    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            return dist[u]
        for w in move_neighbours(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    raise AssertionError("unreachable")


@dataclass
class RatioReport:
    rows: list[dict] = field(default_factory=list)
    opt: int | None = None

    def to_json(self) -> str:
        return json.dumps({"opt": self.opt, "rows": self.rows}, indent=1)

    def to_text(self) -> str:
        header = ("label", "objective", "ratio")
        body = [
            (r["label"], str(r["objective"]), "" if r["ratio"] is None else f"{r['ratio']:.4f}")
            for r in self.rows
        ]
        widths = [max(len(c) for c in col) for col in zip(header, *body)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in [header, *body]]
        if self.opt is not None:
            lines.append(f"OPT = {self.opt}")
        return "\n".join(lines)


def ratio(value: int, opt: int) -> float:
    if opt == 0:
        return 1.0 if value == 0 else math.inf
    return value / opt


def ratio_report(
    S: Sequence[Sequence[int]],
    candidates: Sequence[tuple[str, Sequence[int]]],
    metric: Metric = Metric.ULAM,
    oracle: OracleResult | None = None,
) -> RatioReport:
    report = RatioReport(opt=None if oracle is None else oracle.opt_value)
    for label, y in candidates:
        value = objective(S, y, metric)
        report.rows.append({
            "label": label,
            "objective": value,
            "ratio": None if oracle is None else ratio(value, oracle.opt_value),
        })
    return report
