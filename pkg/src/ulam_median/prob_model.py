"""Noisy copies of a hidden permutation, and recovering it.

Each sample moves every symbol independently with probability ``epsilon`` to
sit right after a uniformly random symbol.  With many samples a majority
comparator plus merge sort recovers the source exactly; with few samples we
fall back to ``relative_order`` at ``alpha = 1/10 - epsilon``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .median_approx import CycleStrategy, relative_order
from .perm_core import Permutation

FORMAT = "ulam-sampleset-v1"
RNG_NAME = "numpy.PCG64 via SeedSequence(seed).spawn(m)"
MOVE_ORDER = "ascending-symbol"


@dataclass(frozen=True)
class ModelParams:
    epsilon: float
    m: int
    seed: int

    def __post_init__(self):
        if not 0 <= self.epsilon < 1:
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.m < 1:
            raise ValueError("m must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class PerturbationRecord:
    sigma: tuple[int, ...]
    destinations: dict[int, int]
    application_order: list[tuple[int, int]] = field(default_factory=list)

    def replay(self, x: Sequence[int]) -> Permutation:
        return apply_moves(x, self.application_order)


@dataclass
class SampleSet:
    source: Permutation
    params: ModelParams
    samples: list[Permutation]
    records: list[PerturbationRecord]

    @property
    def n(self) -> int:
        return self.source.n

    def to_json(self) -> str:
        doc = {
            "format": FORMAT,
            "n": self.n,
            "epsilon": self.params.epsilon,
            "m": self.params.m,
            "seed": self.params.seed,
            "source": list(self.source),
            "samples": [list(x) for x in self.samples],
            "records": [
                {"sigma": list(r.sigma), "moves": [list(mv) for mv in r.application_order]}
                for r in self.records
            ],
            "metadata": {
                "rng": RNG_NAME,
                "move_order": MOVE_ORDER,
                "log_base": 2,
            },
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SampleSet":
        doc = json.loads(text)
        if doc.get("format") != FORMAT:
            raise ValueError(f"unsupported sample set format: {doc.get('format')!r}")
        try:
            params = ModelParams(epsilon=doc["epsilon"], m=doc["m"], seed=doc["seed"])
            source = Permutation(doc["source"])
            samples = [Permutation(x) for x in doc["samples"]]
            records = []
            for r in doc["records"]:
                moves = [(int(a), int(b)) for a, b in r["moves"]]
                records.append(PerturbationRecord(tuple(r["sigma"]), dict(moves), moves))
        except KeyError as exc:
            raise ValueError(f"sample set is missing field {exc}") from None
        if len(samples) != params.m or len(records) != params.m:
            raise ValueError("sample count does not match m")
        if doc["n"] != source.n or any(x.n != source.n for x in samples):
            raise ValueError("dimension mismatch in sample set")
        return cls(source, params, samples, records)


def apply_moves(x: Sequence[int], moves: Sequence[tuple[int, int]]) -> Permutation:
    """Move each ``a`` to sit right after the current position of ``b``."""
    seq = list(x)
    for a, b in moves:
        if a == b:
            continue
        seq.remove(a)
        seq.insert(seq.index(b) + 1, a)
    return Permutation(seq)


def perturb(x: Permutation, epsilon: float, rng: np.random.Generator) -> tuple[Permutation, PerturbationRecord]:
    n = x.n
    chosen = np.flatnonzero(rng.random(n) < epsilon) + 1
    dest = rng.integers(1, n + 1, size=chosen.size)
    moves = [(int(a), int(b)) for a, b in zip(chosen, dest)]
    record = PerturbationRecord(tuple(int(a) for a in chosen), dict(moves), moves)
    return apply_moves(x, moves), record


def generate(x: Sequence[int], params: ModelParams) -> SampleSet:
    x = Permutation(x)
    streams = np.random.SeedSequence(params.seed).spawn(params.m)
    samples, records = [], []
    for ss in streams:
        xi, rec = perturb(x, params.epsilon, np.random.default_rng(ss))
        samples.append(xi)
        records.append(rec)
    return SampleSet(x, params, samples, records)


def majority_precedes(S: Sequence[Sequence[int]], a: int, b: int) -> bool:
    """``a`` comes before ``b`` in at least half of ``S`` (exactly half counts)."""
    if a == b:
        raise ValueError("symbols must differ")
    count = sum(1 for x in S if x.index(a) < x.index(b))
    return 2 * count >= len(S)


def log2_threshold(n: int) -> int:
    return math.ceil(32 * math.log2(n)) if n > 1 else 0


def _merge_sort(items: list[int], precedes) -> list[int]:
    # the comparator may be intransitive; merge sort still emits every item once
    if len(items) <= 1:
        return items
    mid = len(items) // 2
    left = _merge_sort(items[:mid], precedes)
    right = _merge_sort(items[mid:], precedes)
    out = []
    i = j = 0
    while i < len(left) and j < len(right):
        if precedes(left[i], right[j]):
            out.append(left[i])
            i += 1
        else:
            out.append(right[j])
            j += 1
    out.extend(left[i:])
    out.extend(right[j:])
    return out


def reconstruct_large_m(S: Sequence[Sequence[int]]) -> Permutation:
    if not S:
        raise ValueError("empty input set")
    n = len(S[0])
    subset = S[: max(1, min(len(S), log2_threshold(n)))]
    pos = np.empty((len(subset), n + 1), dtype=np.int64)
    for r, x in enumerate(subset):
        pos[r, list(x)] = np.arange(n)
    k = len(subset)

    def precedes(a: int, b: int) -> bool:
        return 2 * int(np.count_nonzero(pos[:, a] < pos[:, b])) >= k

    return Permutation(_merge_sort(list(range(1, n + 1)), precedes))


def small_m_alpha(epsilon) -> Fraction:
    eps = Fraction(repr(epsilon)) if isinstance(epsilon, float) else Fraction(epsilon)
    if not 0 <= eps < Fraction(1, 10):
        raise ValueError(f"epsilon must lie in [0, 1/10) for the small-m branch, got {epsilon}")
    return Fraction(1, 10) - eps


def reconstruct_small_m(S: Sequence[Sequence[int]], epsilon) -> Permutation:
    return relative_order(S, small_m_alpha(epsilon), CycleStrategy.PER_VERTEX)


def choose_branch(n: int, m: int) -> str:
    return "large-m" if m >= log2_threshold(n) else "small-m"


def reconstruct(S: Sequence[Sequence[int]], epsilon) -> Permutation:
    """Estimate the hidden permutation, picking the branch from ``n`` and ``m``."""
    if not S:
        raise ValueError("empty input set")
    if choose_branch(len(S[0]), len(S)) == "large-m":
        return reconstruct_large_m(S)
    return reconstruct_small_m(S, epsilon)
