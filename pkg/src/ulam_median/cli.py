"""``ulam-median`` command line.

Machine-readable output goes to stdout, human summaries to stderr.  Exit
codes: 0 ok, 2 usage or parse error, 3 size cap exceeded, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from . import exact_dp, median_approx, oracle, prob_model
from .formats import read_sequences
from .median_approx import CycleStrategy, MedianResult
from .perm_core import (
    CapExceededError,
    Metric,
    Permutation,
    SymbolString,
    distance,
    objective,
)

EXIT_USAGE, EXIT_CAP, EXIT_IO = 2, 3, 4
ALGORITHMS = ("best", "relorder", "combined", "exact3", "dp-m", "brute")
CSV_COLUMNS = ("instance_id", "n", "m", "algorithm", "objective", "opt", "ratio", "elapsed_ms")


class UsageError(ValueError):
    pass


def _dump(doc) -> None:
    sys.stdout.write(json.dumps(doc) + "\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _to_inputs(rows, metric: Metric):
    if metric is Metric.ULAM:
        return [Permutation(r) for r in rows]
    sigma = max(max(r) for r in rows)
    return [SymbolString(r, sigma=sigma) for r in rows]


def run_algorithm(algo: str, S, *, metric=Metric.ULAM, alpha=median_approx.DEFAULT_ALPHA,
                  strategy=CycleStrategy.PER_VERTEX, cap_n=None, cap_m=exact_dp.DEFAULT_M_CAP,
                  sigma=None) -> MedianResult:
    if metric is Metric.EDIT_INDEL and algo not in ("best", "brute"):
        raise UsageError(f"algorithm {algo!r} only supports the ulam metric")
    if algo == "best":
        return median_approx.best_from_input(S, metric)
    if algo == "relorder":
        return median_approx.relative_order_result(S, alpha, strategy)
    if algo == "combined":
        return median_approx.ulam_median_approx(S, alpha, strategy)
    if algo == "exact3":
        if len(S) != 3:
            raise UsageError(f"exact3 needs exactly 3 permutations, got {len(S)}")
        return exact_dp.exact_median_3(*S, n_cap=cap_n)
    if algo == "dp-m":
        return exact_dp.median_m_dp(S, n_cap=cap_n, m_cap=cap_m)
    if algo == "brute":
        if metric is Metric.ULAM:
            space = oracle.Space.permutations(len(S[0]))
        else:
            space = oracle.Space.strings(sigma or max(max(x) for x in S), len(S[0]))
        res = oracle.brute_force_median(S, metric, space, cap=cap_n)
        return MedianResult(median=res.optimum, objective=res.opt_value, algorithm="brute", metric=metric)
    raise UsageError(f"unknown algorithm {algo!r}")


def cmd_dist(args) -> int:
    metric = Metric(args.metric)
    rows = read_sequences(args.file)
    if len(rows) != 2:
        raise UsageError(f"expected exactly two sequences, found {len(rows)}")
    x, y = _to_inputs(rows, metric)
    d = distance(x, y, metric)
    if args.format == "json":
        _dump({"metric": metric.value, "distance": d})
    else:
        print(d)
    return 0


def cmd_median(args) -> int:
    metric = Metric(args.metric)
    rows = read_sequences(args.file)
    if not rows:
        raise UsageError("input file holds no sequences")
    S = _to_inputs(rows, metric)
    alpha = median_approx.as_alpha(args.alpha)
    start = time.perf_counter()
    result = run_algorithm(
        args.algo, S, metric=metric, alpha=alpha, strategy=CycleStrategy(args.strategy),
        cap_n=args.cap_n, cap_m=args.cap_m, sigma=args.sigma,
    )
    elapsed = (time.perf_counter() - start) * 1000
    # re-validate the reported objective independently of the algorithm
    assert objective(S, result.median, metric) == result.objective
    doc = {
        "algorithm": args.algo,
        "median": list(result.median),
        "objective": result.objective,
        "elapsed_ms": round(elapsed, 3) if args.timing else None,
        "params": {
            "metric": metric.value,
            "alpha": str(alpha),
            "strategy": args.strategy,
            "m": len(S),
            "n": len(S[0]),
        },
    }
    if args.format == "text":
        print(" ".join(map(str, result.median)))
        print(f"objective {result.objective}")
    else:
        _dump(doc)
    return 0


def cmd_gen(args) -> int:
    seed = args.seed
    if seed is None:
        seed = secrets.randbits(64)
        _note(f"seed {seed}")
    if args.source:
        rows = read_sequences(args.source)
        if len(rows) != 1:
            raise UsageError("source file must hold exactly one permutation")
        source = Permutation(rows[0])
    else:
        if args.n is None:
            raise UsageError("--n is required without --source")
        source = Permutation.identity(args.n)
    params = prob_model.ModelParams(epsilon=args.epsilon, m=args.m, seed=seed)
    sample_set = prob_model.generate(source, params)
    text = sample_set.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    sizes = [len(r.sigma) for r in sample_set.records]
    dists = [distance(source, x, Metric.ULAM) for x in sample_set.samples]
    _note(
        f"n={source.n} m={params.m} epsilon={params.epsilon} seed={seed} "
        f"mean|moved|={np.mean(sizes):.3f} mean d(x, x_i)={np.mean(dists):.3f}"
    )
    return 0


def cmd_reconstruct(args) -> int:
    sample_set = prob_model.SampleSet.from_json(Path(args.file).read_text())
    S = sample_set.samples
    branch = prob_model.choose_branch(sample_set.n, len(S))
    estimate = prob_model.reconstruct(S, sample_set.params.epsilon)
    doc = {
        "reconstruction": list(estimate),
        "branch": branch,
        "threshold_m": prob_model.log2_threshold(sample_set.n),
        "distance_to_source": distance(sample_set.source, estimate, Metric.ULAM),
        "objective": objective(S, estimate),
        "source_objective": objective(S, sample_set.source),
    }
    _dump(doc)
    _note(f"branch {branch}, d(x, estimate) = {doc['distance_to_source']}")
    return 0


def _instance(seed: int, n: int, m: int, instance_id: int, epsilon):
    rng = np.random.default_rng([seed, n, m, instance_id])
    if epsilon is None:
        return [Permutation(rng.permutation(n) + 1) for _ in range(m)]
    source = Permutation(rng.permutation(n) + 1)
    params = prob_model.ModelParams(epsilon, m, int(rng.integers(2**63)))
    return prob_model.generate(source, params).samples


def _bench_rows(task) -> list[list]:
    instance_id, n, m, cfg, seed, timing = task
    S = _instance(seed, n, m, instance_id, cfg["epsilon"])
    opt = None
    if n <= cfg["oracle_cap"]:
        opt = oracle.brute_force_median(S).opt_value
    rows = []
    for algo in cfg["algorithms"]:
        if algo == "exact3" and m != 3:
            continue
        start = time.perf_counter()
        result = run_algorithm(algo, S, alpha=cfg["alpha"], strategy=cfg["strategy"],
                               cap_n=cfg["cap_n"], cap_m=cfg["cap_m"])
        elapsed = (time.perf_counter() - start) * 1000
        r = "" if opt is None else f"{oracle.ratio(result.objective, opt):.6f}"
        rows.append([
            instance_id, n, m, algo, result.objective,
            "" if opt is None else opt, r,
            f"{elapsed:.3f}" if timing else "",
        ])
    return rows


def load_bench_config(path: str) -> dict:
    raw = yaml.safe_load(Path(path).read_text()) or {}
    if not isinstance(raw, dict):
        raise UsageError("bench config must be a mapping")
    if "grid" in raw:
        grid = [(int(g["n"]), int(g["m"])) for g in raw["grid"]]
    else:
        ns, ms = raw.get("n", []), raw.get("m", [])
        ns = ns if isinstance(ns, list) else [ns]
        ms = ms if isinstance(ms, list) else [ms]
        grid = [(int(n), int(m)) for n in ns for m in ms]
    algorithms = list(raw.get("algorithms", []))
    for a in algorithms:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r} in config")
    return {
        "grid": grid,
        "instances": int(raw.get("instances", 1)),
        "algorithms": algorithms,
        "epsilon": raw.get("epsilon"),
        "alpha": median_approx.as_alpha(raw.get("alpha", 0.1)),
        "strategy": CycleStrategy(raw.get("strategy", "per-vertex")),
        "oracle_cap": int(raw.get("oracle_cap", oracle.PERMUTATION_CAP)),
        "cap_n": raw.get("cap_n"),
        "cap_m": int(raw.get("cap_m", exact_dp.DEFAULT_M_CAP)),
    }


def cmd_bench(args) -> int:
    cfg = load_bench_config(args.config)
    tasks = []
    instance_id = 0
    for n, m in cfg["grid"]:
        for _ in range(cfg["instances"]):
            tasks.append((instance_id, n, m, cfg, args.seed, args.timing))
            instance_id += 1
    if not cfg["algorithms"]:
        tasks = []
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            chunks = list(pool.map(_bench_rows, tasks))
    else:
        chunks = [_bench_rows(t) for t in tasks]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for chunk in chunks:
        writer.writerows(chunk)
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    _note(f"{sum(len(c) for c in chunks)} rows from {len(tasks)} instances")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ulam-median", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="distance between the two sequences in FILE")
    d.add_argument("file")
    d.add_argument("--metric", choices=[m.value for m in Metric], default="ulam")
    d.add_argument("--format", choices=["text", "json"], default="text")
    d.set_defaults(func=cmd_dist)

    md = sub.add_parser("median", help="median of the sequences in FILE")
    md.add_argument("file")
    md.add_argument("--algo", choices=ALGORITHMS, default="combined")
    md.add_argument("--metric", choices=[m.value for m in Metric], default="ulam")
    md.add_argument("--alpha", default="1/10")
    md.add_argument("--strategy", choices=[s.value for s in CycleStrategy], default="per-vertex")
    md.add_argument("--cap-n", type=int, default=None)
    md.add_argument("--cap-m", type=int, default=exact_dp.DEFAULT_M_CAP)
    md.add_argument("--sigma", type=int, default=None, help="alphabet size for brute force over strings")
    md.add_argument("--format", choices=["json", "text"], default="json")
    md.add_argument("--timing", action="store_true", help="report wall-clock elapsed_ms")
    md.set_defaults(func=cmd_median)

    g = sub.add_parser("gen", help="sample noisy copies of a source permutation")
    g.add_argument("--n", type=int)
    g.add_argument("--epsilon", type=float, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--source", help="file holding the source permutation (default identity)")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reconstruct", help="estimate the source of a sample set")
    r.add_argument("file")
    r.set_defaults(func=cmd_reconstruct)

    b = sub.add_parser("bench", help="grid of instances x algorithms, CSV out")
    b.add_argument("config")
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--out")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--timing", action="store_true", help="fill the elapsed_ms column")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        _note(f"error: {exc}")
        return EXIT_CAP
    except OSError as exc:
        _note(f"error: {exc}")
        return EXIT_IO
    except (ValueError, KeyError, TypeError, yaml.YAMLError) as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
