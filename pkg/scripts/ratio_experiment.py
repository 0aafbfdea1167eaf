"""Empirical approximation ratios against the brute-force oracle.

    python scripts/ratio_experiment.py --n 7 --m 3 5 7 --instances 100 --seed 0
"""

import argparse
from dataclasses import dataclass, field

import numpy as np

from ulam_median import best_from_input, brute_force_median, relative_order, ulam_median_approx
from ulam_median.exact_dp import exact_median_3, median_m_dp
from ulam_median.perm_core import objective


@dataclass
class RatioConfig:
    n: int = 7
    ms: list = field(default_factory=lambda: [3, 5, 7])
    instances: int = 100
    seed: int = 0


def _algorithms(S):
    yield "best", best_from_input(S).median
    yield "relorder", relative_order(S)
    yield "combined", ulam_median_approx(S).median
    if len(S) == 3:
        yield "exact3", exact_median_3(*S).median
    if len(S) <= 4:
        yield "dp-m", median_m_dp(S).median


def run(cfg: RatioConfig):
    print(f"{'m':>3} {'algorithm':<10} {'mean':>8} {'max':>8}")
    for m in cfg.ms:
        rng = np.random.default_rng([cfg.seed, cfg.n, m])
        ratios = {}
        for _ in range(cfg.instances):
            S = [tuple(int(v) for v in rng.permutation(cfg.n) + 1) for _ in range(m)]
            opt = brute_force_median(S).opt_value
            for name, y in _algorithms(S):
                value = objective(S, y)
                ratios.setdefault(name, []).append(1.0 if value == opt else value / opt)
        for name, rs in ratios.items():
            print(f"{m:>3} {name:<10} {np.mean(rs):>8.4f} {max(rs):>8.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--m", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    run(RatioConfig(a.n, a.m, a.instances, a.seed))


if __name__ == "__main__":
    main()
