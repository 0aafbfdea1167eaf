"""Worst-case approximation algorithms for the Ulam median.

``best_from_input`` is the folklore ``(2 - 1/(m+1))`` approximation.
``relative_order`` builds the majority-precedence graph, strips short cycles
and reads a permutation off the surviving DAG.  ``ulam_median_approx`` runs
both and keeps the better candidate.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .perm_core import (
    DimensionMismatchError,
    Metric,
    Permutation,
    SymbolString,
    distance,
)

DEFAULT_ALPHA = Fraction(1, 10)


class CycleStrategy(enum.Enum):
    GLOBAL_MIN = "global-min"
    PER_VERTEX = "per-vertex"


@dataclass(frozen=True)
class MedianResult:
    median: tuple[int, ...]
    objective: int
    algorithm: str
    metric: Metric = Metric.ULAM
    source_index: int | None = None

    def as_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "median": list(self.median),
            "objective": self.objective,
            "metric": self.metric.value,
            "source_index": self.source_index,
        }


def as_alpha(alpha) -> Fraction:
    """Exact rational form of ``alpha``; floats go through their decimal repr."""
    if isinstance(alpha, float):
        alpha = Fraction(repr(alpha))
    alpha = Fraction(alpha)
    if not 0 < alpha <= Fraction(1, 10):
        raise ValueError(f"alpha must lie in (0, 1/10], got {alpha}")
    return alpha


def _homogeneous(S: Sequence[Sequence[int]], metric: Metric) -> None:
    if not S:
        raise ValueError("empty input set")
    if metric is Metric.ULAM:
        n = len(S[0])
        if any(len(x) != n for x in S):
            raise DimensionMismatchError("dimension mismatch within input set")


def pairwise_distances(S: Sequence[Sequence[int]], metric: Metric = Metric.ULAM) -> np.ndarray:
    m = len(S)
    D = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(i + 1, m):
            D[i, j] = D[j, i] = distance(S[i], S[j], metric)
    return D


def best_from_input(S: Sequence[Sequence[int]], metric: Metric = Metric.ULAM) -> MedianResult:
    """Input element with the smallest objective; ties go to the lowest index."""
    _homogeneous(S, metric)
    totals = pairwise_distances(S, metric).sum(axis=1)
    k = int(np.argmin(totals))
    wrap = Permutation if metric is Metric.ULAM else SymbolString
    return MedianResult(
        median=wrap(S[k]),
        objective=int(totals[k]),
        algorithm="best",
        metric=metric,
        source_index=k,
    )


@dataclass
class MajorityGraph:
    """Edge ``a -> b`` iff ``a`` precedes ``b`` in at least ``(1 - 2 alpha) m`` inputs.

    ``adj`` is indexed by symbol - 1.  ``counts[a-1, b-1]`` holds the raw
    precedence count the edges were derived from.
    """

    n: int
    m: int
    alpha: Fraction
    adj: np.ndarray
    counts: np.ndarray = field(repr=False)

    @property
    def threshold_count(self) -> int:
        need = (1 - 2 * self.alpha) * self.m
        return -((-need.numerator) // need.denominator)

    def edges(self) -> set[tuple[int, int]]:
        return {(int(a) + 1, int(b) + 1) for a, b in zip(*np.nonzero(self.adj))}

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.adj[a - 1, b - 1])


def precedence_counts(S: Sequence[Sequence[int]]) -> np.ndarray:
    """``C[a-1, b-1]`` = number of inputs in which ``a`` appears before ``b``."""
    n = len(S[0])
    C = np.zeros((n, n), dtype=np.int32)
    for x in S:
        pos = np.empty(n, dtype=np.int64)
        pos[np.asarray(x, dtype=np.int64) - 1] = np.arange(n)
        C += pos[:, None] < pos[None, :]
    return C


def build_majority_graph(S: Sequence[Sequence[int]], alpha=DEFAULT_ALPHA) -> MajorityGraph:
    alpha = as_alpha(alpha)
    _homogeneous(S, Metric.ULAM)
    m = len(S)
    C = precedence_counts(S)
    # count >= (1 - 2 alpha) m, cross-multiplied to stay in integers
    keep = 1 - 2 * alpha
    adj = C.astype(np.int64) * keep.denominator >= keep.numerator * m
    np.fill_diagonal(adj, False)
    return MajorityGraph(n=len(S[0]), m=m, alpha=alpha, adj=adj, counts=C)


def shortest_cycle_through(adj: np.ndarray, alive: np.ndarray, v: int) -> list[int] | None:
    """Vertices (0-based) of a shortest directed cycle through ``v``, or ``None``.

    Level-synchronous BFS from ``v`` restricted to ``alive``.  A newly reached
    vertex takes the smallest-id frontier vertex pointing to it as parent; the
    cycle closes at the smallest-id vertex of the first level with an edge
    back to ``v``.
    """
    if not alive[v]:
        return None
    parent = {v: -1}
    visited = np.zeros(len(alive), dtype=bool)
    visited[v] = True
    frontier = np.array([v])
    while frontier.size:
        back = frontier[adj[frontier, v]]
        if back.size:
            u = int(back.min())
            cycle = [u]
            while parent[cycle[-1]] != -1:
                cycle.append(parent[cycle[-1]])
            return cycle[::-1]
        reach = adj[frontier] & alive & ~visited
        nxt = np.flatnonzero(reach.any(axis=0))
        if not nxt.size:
            return None
        # frontier is ascending, so argmax picks the smallest-id parent
        first = reach[:, nxt].argmax(axis=0)
        for w, k in zip(nxt.tolist(), first.tolist()):
            parent[w] = int(frontier[k])
        visited[nxt] = True
        frontier = nxt
    return None


def _cyclic_components(adj: np.ndarray, alive: np.ndarray) -> tuple[list[int], np.ndarray]:
    """Alive vertices in a strongly connected component of size > 1, plus labels.

    ``labels`` is -1 for dead vertices; cycles never leave a component.
    """
    labels = np.full(len(alive), -1)
    idx = np.flatnonzero(alive)
    if idx.size == 0:
        return [], labels
    sub = adj[np.ix_(idx, idx)]
    _, comp = connected_components(csr_matrix(sub), directed=True, connection="strong")
    labels[idx] = comp
    sizes = np.bincount(comp)
    return idx[sizes[comp] > 1].tolist(), labels


def cycle_deletion_stages(graph: MajorityGraph, strategy: CycleStrategy = CycleStrategy.PER_VERTEX) -> Iterator[tuple[np.ndarray, list[int] | None]]:
    """Yield ``(alive, cycle)`` for every stage of the deletion loop.

    The first stage has ``cycle=None`` and the full vertex set; each later
    stage reports the cycle (symbols) just removed and the surviving mask.
    The final mask induces an acyclic graph.
    """
    adj = graph.adj
    alive = np.ones(graph.n, dtype=bool)
    yield alive.copy(), None

    if strategy is CycleStrategy.PER_VERTEX:
        candidates, labels = _cyclic_components(adj, alive)
        for v in candidates:
            if not alive[v]:
                continue
            cycle = shortest_cycle_through(adj, alive & (labels == labels[v]), v)
            if cycle is None:
                continue
            alive[cycle] = False
            yield alive.copy(), [c + 1 for c in cycle]
        return

    while True:
        best: list[int] | None = None
        candidates, labels = _cyclic_components(adj, alive)
        for v in candidates:
            cycle = shortest_cycle_through(adj, alive & (labels == labels[v]), v)
            # strict < keeps the smallest starting vertex among equal lengths
            if cycle is not None and (best is None or len(cycle) < len(best)):
                best = cycle
                if len(best) == 2:
                    break
        if best is None:
            return
        alive[best] = False
        yield alive.copy(), [c + 1 for c in best]


def topological_order(adj: np.ndarray, alive: np.ndarray) -> list[int]:
    """Kahn's algorithm over the alive vertices, smallest id first (0-based)."""
    idx = np.flatnonzero(alive)
    sub = adj[np.ix_(idx, idx)]
    indeg = sub.sum(axis=0).astype(int).tolist()
    heap = [k for k, d in enumerate(indeg) if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        k = heapq.heappop(heap)
        order.append(int(idx[k]))
        for t in np.flatnonzero(sub[k]).tolist():
            indeg[t] -= 1
            if indeg[t] == 0:
                heapq.heappush(heap, t)
    if len(order) != idx.size:
        raise RuntimeError("graph still has a cycle after deletion")
    return order


def relative_order(
    S: Sequence[Sequence[int]],
    alpha=DEFAULT_ALPHA,
    strategy: CycleStrategy = CycleStrategy.PER_VERTEX,
    graph: MajorityGraph | None = None,
) -> Permutation:
    if graph is None:
        graph = build_majority_graph(S, alpha)
    alive = None
    for alive, _ in cycle_deletion_stages(graph, strategy):
        pass
    order = topological_order(graph.adj, alive)
    removed = np.flatnonzero(~alive).tolist()
    return Permutation([v + 1 for v in order] + [v + 1 for v in removed])


def ulam_median_approx(
    S: Sequence[Sequence[int]],
    alpha=DEFAULT_ALPHA,
    strategy: CycleStrategy = CycleStrategy.PER_VERTEX,
) -> MedianResult:
    """Better of ``best_from_input`` and ``relative_order``; ties keep the former."""
    best = best_from_input(S)
    candidate = relative_order(S, alpha, strategy)
    value = sum(distance(candidate, x, Metric.ULAM) for x in S)
    if value < best.objective:
        return MedianResult(median=candidate, objective=value, algorithm="combined")
    return MedianResult(
        median=best.median,
        objective=best.objective,
        algorithm="combined",
        source_index=best.source_index,
    )


def relative_order_result(S, alpha=DEFAULT_ALPHA, strategy=CycleStrategy.PER_VERTEX) -> MedianResult:
    candidate = relative_order(S, alpha, strategy)
    return MedianResult(
        median=candidate,
        objective=sum(distance(candidate, x, Metric.ULAM) for x in S),
        algorithm="relorder",
    )

