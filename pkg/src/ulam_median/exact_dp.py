"""Exact median of three permutations and the 1.5-approximation for ``m``.

Step one is a DP over ``(i_1, ..., i_m, l)`` that finds a length-``n`` string
over ``[n]`` minimising the summed indel distance to the inputs.  Step two
repairs that string into a permutation: duplicates keep their best-matched
copy, and missing symbols are slotted in right after the matched
predecessor in the first input.

Transitions of the DP (unit insert/delete cost, substitution = 2):

* emit one output symbol matched against every string in a subset ``T``
  (all of whose current characters must agree); cost ``m - |T|``.  The empty
  subset emits a "free" symbol matching nothing.
* delete the current character of a single string; cost 1.

Multi-string deletions and substitutions decompose into these, so the
optimum is unchanged while each cell only looks at ``2**m + m`` parents.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .median_approx import MedianResult
from .perm_core import (
    CapExceededError,
    DimensionMismatchError,
    Metric,
    Permutation,
    SymbolString,
    edit_distance_indel,
    lcs_alignment,
    objective,
)

DEFAULT_M_CAP = 4
DEFAULT_N_CAPS = {2: 300, 3: 80, 4: 20}
_INF = np.iinfo(np.int32).max // 2


class RepairMode(enum.Enum):
    EXACT_THREE = "exact-three"
    APPROX_M = "approx-m"


@dataclass
class DPTable:
    """Cost and back-pointer tables, both shaped ``(n+1,) * (m+1)``; last axis is ``l``.

    ``backptr`` codes: ``1 + mask`` for an emit matched against the strings in
    ``mask`` (0 = free symbol), ``2**m + 1 + t`` for a deletion in string ``t``,
    and 0 for the origin.
    """

    cost: np.ndarray
    backptr: np.ndarray
    m: int
    n: int

    def delete_code(self, t: int) -> int:
        return (1 << self.m) + 1 + t


@dataclass
class LengthNMedian:
    string: SymbolString
    cost: int
    # alignments[t] pairs (index in S[t], index in string), increasing
    alignments: list[list[tuple[int, int]]]
    table: DPTable | None = None


def _check_caps(S: Sequence[Sequence[int]], n_cap: int | None, m_cap: int) -> tuple[int, int]:
    m = len(S)
    if m < 2:
        raise ValueError("need at least two permutations")
    n = len(S[0])
    if any(len(x) != n for x in S):
        raise DimensionMismatchError("dimension mismatch within input set")
    if m > m_cap:
        raise CapExceededError(f"DP size exceeds cap: m={m} > m_cap={m_cap}")
    if n_cap is None:
        n_cap = DEFAULT_N_CAPS.get(m, 8)
    if n > n_cap:
        cells = (n + 1) ** (m + 1)
        raise CapExceededError(
            f"DP memory exceeds cap: n={n} > n_cap={n_cap} ({cells:.3g} cells)"
        )
    return m, n


def _axis_view(arr: np.ndarray, m: int, t: int) -> np.ndarray:
    shape = [1] * m
    shape[t] = arr.size
    return arr.reshape(shape)


def fill_table(S: Sequence[Sequence[int]]) -> DPTable:
    m, n = len(S), len(S[0])
    size = n + 1
    cost = np.empty((size,) * (m + 1), dtype=np.int32)
    back = np.zeros((size,) * (m + 1), dtype=np.uint8)

    # chars[t][i] = S[t][i-1]; index 0 gets a sentinel unique per string
    chars = []
    for t, x in enumerate(S):
        c = np.empty(size, dtype=np.int64)
        c[0] = -(t + 1)
        c[1:] = x
        chars.append(_axis_view(c, m, t))

    emits = []
    for mask in range(1 << m):
        members = [t for t in range(m) if mask >> t & 1]
        if members:
            ok = np.ones((size,) * m, dtype=bool)
            for t in members[1:]:
                ok = ok & (chars[t] == chars[members[0]])
            for t in members:
                ok = ok & (_axis_view(np.arange(size), m, t) >= 1)
        else:
            ok = None
        src = tuple(slice(0, n) if t in members else slice(None) for t in range(m))
        dst = tuple(slice(1, None) if t in members else slice(None) for t in range(m))
        emits.append((mask, m - len(members), ok, src, dst))

    for ell in range(size):
        layer = np.full((size,) * m, _INF, dtype=np.int64)
        bl = np.zeros((size,) * m, dtype=np.uint8)
        if ell == 0:
            layer[(0,) * m] = 0
        else:
            prev = cost[..., ell - 1].astype(np.int64)
            for mask, w, ok, src, dst in emits:
                cand = np.full_like(layer, _INF)
                cand[dst] = prev[src] + w
                if ok is not None:
                    cand[~ok] = _INF
                better = cand < layer
                layer[better] = cand[better]
                bl[better] = 1 + mask
        # deletion closure, one axis at a time
        for t in range(m):
            code = (1 << m) + 1 + t
            for k in range(1, size):
                here = [slice(None)] * m
                there = [slice(None)] * m
                here[t], there[t] = k, k - 1
                here, there = tuple(here), tuple(there)
                cand = layer[there] + 1
                better = cand < layer[here]
                layer[here] = np.where(better, cand, layer[here])
                bl[here] = np.where(better, code, bl[here])
        cost[..., ell] = layer
        back[..., ell] = bl
    return DPTable(cost=cost, backptr=back, m=m, n=n)


def solve_length_n_median(
    S: Sequence[Sequence[int]],
    n_cap: int | None = None,
    m_cap: int = DEFAULT_M_CAP,
    keep_table: bool = False,
) -> LengthNMedian:
    m, n = _check_caps(S, n_cap, m_cap)
    table = fill_table(S)
    idx = [n] * m
    ell = n
    out: list[int | None] = [None] * n
    alignments: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    emit_limit = 1 << m
    while ell > 0 or any(idx):
        code = int(table.backptr[tuple(idx) + (ell,)])
        if code == 0:
            raise RuntimeError("broken back-pointer chain")
        if code <= emit_limit:
            mask = code - 1
            ell -= 1
            for t in range(m):
                if mask >> t & 1:
                    idx[t] -= 1
                    out[ell] = S[t][idx[t]]
                    alignments[t].append((idx[t], ell))
        else:
            idx[code - emit_limit - 1] -= 1
    # free slots match nothing, so any symbol works; use absent ones
    present = {a for a in out if a is not None}
    spare = iter(a for a in range(1, n + 1) if a not in present)
    string = SymbolString((a if a is not None else next(spare) for a in out), sigma=n)
    return LengthNMedian(
        string=string,
        cost=int(table.cost[(n,) * (m + 1)]),
        alignments=[a[::-1] for a in alignments],
        table=table if keep_table else None,
    )


def dp_length_n_median(S: Sequence[Sequence[int]], n_cap: int | None = None, m_cap: int = DEFAULT_M_CAP) -> SymbolString:
    return solve_length_n_median(S, n_cap, m_cap).string


def permutation_repair(
    x_prime: Sequence[int],
    S: Sequence[Sequence[int]],
    mode: RepairMode = RepairMode.APPROX_M,
    alignments: Sequence[Sequence[tuple[int, int]]] | None = None,
) -> Permutation:
    """Turn a length-``n`` string over ``[n]`` into a permutation.

    ``alignments[t]`` must be an optimal alignment of ``(S[t], x_prime)``;
    canonical LCS witnesses are computed when none are given.
    """
    n = len(S[0])
    if len(x_prime) != n or any(not 1 <= a <= n for a in x_prime):
        raise ValueError(f"x_prime must be a length-{n} string over 1..{n}")
    if mode is RepairMode.EXACT_THREE and len(S) != 3:
        raise ValueError("EXACT_THREE repair needs exactly three permutations")
    if sorted(x_prime) == list(range(1, n + 1)):
        return Permutation(x_prime)
    if alignments is None:
        alignments = [lcs_alignment(x, x_prime) for x in S]

    matches = [0] * n
    for A in alignments:
        for _, j in A:
            matches[j] += 1
    keep: dict[int, int] = {}
    for j, a in enumerate(x_prime):
        # strict > keeps the leftmost among equally matched copies
        if a not in keep or matches[j] > matches[keep[a]]:
            keep[a] = j
    kept = sorted(keep.values())
    new_pos = {j: k for k, j in enumerate(kept)}

    current = [x_prime[j] for j in kept]
    first = S[0]
    match1 = {i: new_pos[j] for i, j in alignments[0] if j in new_pos}
    present = set(current)
    for ell, s in enumerate(first):
        if s in present:
            continue
        prior = [i for i in match1 if i < ell]
        at = match1[max(prior)] + 1 if prior else 0
        current.insert(at, s)
        for i, k in match1.items():
            if k >= at:
                match1[i] = k + 1
        match1[ell] = at
        present.add(s)
    return Permutation(current)


def summed_indel(S: Sequence[Sequence[int]], y: Sequence[int]) -> int:
    return sum(edit_distance_indel(y, x) for x in S)


def exact_median_3(x1, x2, x3, n_cap: int | None = None) -> MedianResult:
    S = [tuple(x1), tuple(x2), tuple(x3)]
    sol = solve_length_n_median(S, n_cap=n_cap, m_cap=3)
    med = permutation_repair(sol.string, S, RepairMode.EXACT_THREE, sol.alignments)
    return MedianResult(median=med, objective=objective(S, med, Metric.ULAM), algorithm="exact3")


def median_m_dp(S: Sequence[Sequence[int]], n_cap: int | None = None, m_cap: int = DEFAULT_M_CAP) -> MedianResult:
    S = [tuple(x) for x in S]
    sol = solve_length_n_median(S, n_cap=n_cap, m_cap=m_cap)
    med = permutation_repair(sol.string, S, RepairMode.APPROX_M, sol.alignments)
    return MedianResult(median=med, objective=objective(S, med, Metric.ULAM), algorithm="dp-m")

