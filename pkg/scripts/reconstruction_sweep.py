"""Reconstruction error of the noisy-sample model over a grid of (n, eps, m).

    python scripts/reconstruction_sweep.py --n 256 1024 --eps 0.02 0.05 --m 10 40 --trials 10
"""

import argparse
import itertools
import time
from dataclasses import dataclass

import numpy as np

from ulam_median.perm_core import Permutation, ulam_distance
from ulam_median.prob_model import ModelParams, choose_branch, generate, reconstruct


@dataclass
class SweepConfig:
    ns: tuple = (256, 1024)
    epsilons: tuple = (0.02, 0.05)
    ms: tuple = (10, 40)
    trials: int = 10
    seed: int = 0


def run(cfg: SweepConfig):
    print(f"{'n':>6} {'eps':>6} {'m':>5} {'branch':<8} {'exact':>6} {'mean d':>8} {'max d':>6} {'sec':>6}")
    for n, eps, m in itertools.product(cfg.ns, cfg.epsilons, cfg.ms):
        start = time.perf_counter()
        ds = []
        for t in range(cfg.trials):
            x = Permutation(np.random.default_rng([cfg.seed, n, t]).permutation(n) + 1)
            ss = generate(x, ModelParams(eps, m, seed=cfg.seed * 1_000_003 + t))
            ds.append(ulam_distance(x, reconstruct(ss.samples, eps)))
        sec = time.perf_counter() - start
        print(f"{n:>6} {eps:>6} {m:>5} {choose_branch(n, m):<8} {ds.count(0):>6} "
              f"{np.mean(ds):>8.2f} {max(ds):>6} {sec:>6.1f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[256, 1024])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.02, 0.05])
    ap.add_argument("--m", type=int, nargs="+", default=[10, 40])
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    run(SweepConfig(tuple(a.n), tuple(a.eps), tuple(a.m), a.trials, a.seed))


if __name__ == "__main__":
    main()
