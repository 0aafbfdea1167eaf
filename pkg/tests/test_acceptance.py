"""Exit criteria, one test each; run with ``pytest tests/test_acceptance.py``.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from strategies import random_set
from ulam_median.cli import main
from ulam_median.exact_dp import (
    RepairMode,
    exact_median_3,
    median_m_dp,
    permutation_repair,
    solve_length_n_median,
    summed_indel,
)
from ulam_median.formats import format_sequences
from ulam_median.median_approx import (
    CycleStrategy,
    best_from_input,
    build_majority_graph,
    cycle_deletion_stages,
    shortest_cycle_through,
    ulam_median_approx,
)
from ulam_median.oracle import Space, bfs_move_distances, brute_force_median
from ulam_median.perm_core import Metric, Permutation, objective, ulam_distance
from ulam_median.prob_model import ModelParams, generate, reconstruct


def _exact3_instances():
    rng = np.random.default_rng(20261016)
    return [random_set(rng, 6, 3) for _ in range(200)] + [random_set(rng, 7, 3) for _ in range(50)]


def test_c01_distance_matches_bfs(criterion):
    start = time.perf_counter()
    pairs = mismatches = 0
    for n in range(1, 6):
        for x in itertools.permutations(range(1, n + 1)):
            for y, d in bfs_move_distances(x).items():
                pairs += 1
                mismatches += ulam_distance(x, y) != d
    elapsed = time.perf_counter() - start
    criterion("C1 distance == BFS oracle, n<=5", mismatches == 0 and elapsed < 60,
              f"{pairs} pairs, {mismatches} mismatches, {elapsed:.1f}s")


def test_c02_exact3_is_exact(criterion):
    start = time.perf_counter()
    bad = 0
    instances = _exact3_instances()
    for S in instances:
        r = exact_median_3(*S)
        ok = sorted(r.median) == list(range(1, len(S[0]) + 1))
        ok &= r.objective == objective(S, r.median) == brute_force_median(S).opt_value
        bad += not ok
    elapsed = time.perf_counter() - start
    criterion("C2 exact_median_3 == OPT (200 @ n=6, 50 @ n=7)", bad == 0 and elapsed < 300,
              f"{bad} violations, {elapsed:.1f}s")


def _folklore_instances():
    rng = np.random.default_rng(31)
    return [(m, random_set(rng, 7, m)) for m in (3, 5, 7) for _ in range(100)]


@pytest.fixture(scope="module")
def folklore_results():
    out = []
    for m, S in _folklore_instances():
        out.append((m, brute_force_median(S).opt_value, best_from_input(S).objective,
                    ulam_median_approx(S).objective))
    return out


def test_c03_folklore_bound(criterion, folklore_results):
    bad = sum(1 for m, opt, best, _ in folklore_results if best * (m + 1) > (2 * m + 1) * opt)
    worst = max(best / opt for _, opt, best, _ in folklore_results if opt)
    criterion("C3 best_from_input <= (2 - 1/(m+1)) OPT", bad == 0,
              f"{len(folklore_results)} instances, {bad} violations, max ratio {worst:.4f}")


def test_c04_combined_dominance(criterion, folklore_results):
    bad = sum(1 for _, opt, best, comb in folklore_results if not opt <= comb <= best)
    improved = sum(1 for _, _, best, comb in folklore_results if comb < best)
    criterion("C4 OPT <= combined <= best_from_input", bad == 0,
              f"{bad} violations, {improved} strict improvements")


def _rotations(rng, n):
    # majority graph at alpha=1/10 has odd cycles of length exactly 5
    base = rng.permutation(n) + 1
    return [tuple(int(v) for v in np.roll(base, -k)) for k in range(n)]


def test_c05_girth(criterion):
    rng = np.random.default_rng(5)
    configs = [(n, m) for n in (10, 20) for m in (5, 15)]
    instances = [random_set(rng, *configs[k % 4]) for k in range(100)]
    instances += [_rotations(rng, n) for n in (10, 20) for _ in range(5)]
    bad = cycles_seen = 0
    for S in instances:
        g = build_majority_graph(S, Fraction(1, 10))
        for strategy in CycleStrategy:
            for alive, _ in cycle_deletion_stages(g, strategy):
                for v in np.flatnonzero(alive):
                    c = shortest_cycle_through(g.adj, alive, int(v))
                    if c is not None:
                        cycles_seen += 1
                        bad += len(c) < 5
    criterion("C5 majority-graph girth >= 5 at alpha=1/10", bad == 0,
              f"{len(instances)} graphs, {bad} short cycles among {cycles_seen} shortest cycles")


def test_c06_dp_m_within_one_and_a_half(criterion):
    rng = np.random.default_rng(6)
    bad = 0
    worst = 1.0
    for _ in range(100):
        S = random_set(rng, 6, 4)
        opt = brute_force_median(S).opt_value
        value = median_m_dp(S).objective
        bad += not (opt <= value and 2 * value <= 3 * opt)
        if opt:
            worst = max(worst, value / opt)
    criterion("C6 OPT <= median_m_dp <= 1.5 OPT (n=6, m=4)", bad == 0,
              f"{bad} violations, max ratio {worst:.4f}")


def test_c07_exact_three_repair_preserves_cost(criterion):
    bad = repaired = 0
    for S in _exact3_instances():
        sol = solve_length_n_median(S)
        out = permutation_repair(sol.string, S, RepairMode.EXACT_THREE, sol.alignments)
        # also repair with canonical alignments, which exercises non-trivial repairs
        canon = permutation_repair(sol.string, S, RepairMode.EXACT_THREE)
        repaired += not sol.string.is_permutation()
        bad += summed_indel(S, out) != sol.cost or summed_indel(S, canon) != sol.cost
    criterion("C7 EXACT_THREE repair keeps summed indel cost", bad == 0,
              f"{bad} violations, {repaired} DP strings needed repair")


def test_c08_large_m_reconstruction(criterion):
    start = time.perf_counter()
    hits = 0
    for trial in range(50):
        x = Permutation(np.random.default_rng(800 + trial).permutation(64) + 1)
        ss = generate(x, ModelParams(0.05, 192, seed=trial))
        hits += reconstruct(ss.samples, 0.05) == x
    elapsed = time.perf_counter() - start
    criterion("C8 large-m exact recovery (n=64, m=192)", hits >= 45 and elapsed < 120,
              f"{hits}/50 exact, {elapsed:.1f}s")


def test_c09_small_m_distance_bound(criterion):
    start = time.perf_counter()
    n, m, eps = 2000, 80, 0.02
    bound = 5 / 3 * (math.exp(-m / 40) + 2 * math.sqrt(math.log(n) / n)) * n
    within, dists = 0, []
    for trial in range(20):
        x = Permutation(np.random.default_rng(900 + trial).permutation(n) + 1)
        ss = generate(x, ModelParams(eps, m, seed=trial))
        d = ulam_distance(x, reconstruct(ss.samples, eps))
        dists.append(d)
        within += d <= bound
    elapsed = time.perf_counter() - start
    criterion("C9 small-m distance bound (n=2000, m=80)", within >= 18 and elapsed < 300,
              f"{within}/20 within {bound:.1f}, max d {max(dists)}, {elapsed:.1f}s")


def test_c10_source_near_optimal(criterion):
    n, m, eps = 7, 20, 0.05
    factor = 1 + 20 / m + 3 / math.log2(n / eps)
    ok = 0
    for trial in range(100):
        x = Permutation(np.random.default_rng(1000 + trial).permutation(n) + 1)
        ss = generate(x, ModelParams(eps, m, seed=trial))
        opt = brute_force_median(ss.samples).opt_value
        ok += objective(ss.samples, x) <= factor * opt
    criterion("C10 Obj(S, source) <= (1 + 20/m + 3/log2(n/eps)) OPT", ok >= 95, f"{ok}/100")


def test_c11_edit_median_best_from_input(criterion):
    rng = np.random.default_rng(11)
    bad, worst = 0, 1.0
    for _ in range(50):
        S = [tuple(int(v) for v in rng.integers(1, 4, size=5)) for _ in range(4)]
        opt = brute_force_median(S, Metric.EDIT_INDEL, Space.strings(3, 5)).opt_value
        value = best_from_input(S, Metric.EDIT_INDEL).objective
        bad += value > 2 * opt
        if opt:
            worst = max(worst, value / opt)
    criterion("C11 edit best_from_input <= 2 OPT (sigma=3, L=5, m=4)", bad == 0,
              f"{bad} violations, empirical max ratio {worst:.4f}")


def test_c12_cli_determinism(criterion, tmp_path, capsys):
    rng = np.random.default_rng(12)
    pair = tmp_path / "pair.txt"
    pair.write_text(format_sequences(random_set(rng, 9, 2)))
    triple = tmp_path / "triple.txt"
    triple.write_text(format_sequences(random_set(rng, 6, 3)))
    four = tmp_path / "four.txt"
    four.write_text(format_sequences(random_set(rng, 6, 4)))
    cfg = tmp_path / "bench.yaml"
    cfg.write_text("grid: [{n: 6, m: 3}, {n: 7, m: 4}]\ninstances: 4\n"
                   "algorithms: [best, relorder, combined, exact3, dp-m]\n")
    gen_out = tmp_path / "ss.json"

    commands = [
        ["dist", pair],
        ["dist", pair, "--format", "json"],
        *[["median", four if algo == "dp-m" else triple, "--algo", algo]
          for algo in ("best", "relorder", "combined", "exact3", "dp-m", "brute")],
        ["median", triple, "--strategy", "global-min"],
        ["gen", "--n", 40, "--epsilon", 0.05, "--m", 6, "--seed", 5],
        ["gen", "--n", 40, "--epsilon", 0.05, "--m", 6, "--seed", 5, "--out", gen_out],
        ["reconstruct", gen_out],
        ["bench", cfg, "--seed", 3],
    ]
    differing = []
    for argv in commands:
        outputs = []
        for _ in range(2):
            assert main([str(a) for a in argv]) == 0
            text = capsys.readouterr().out
            if "--out" in argv:
                text += gen_out.read_text()
            outputs.append(text.encode())
        if outputs[0] != outputs[1]:
            differing.append(argv[0])
    criterion("C12 byte-identical CLI output on re-run", not differing,
              f"{len(commands)} commands, differing: {differing or 'none'}")
