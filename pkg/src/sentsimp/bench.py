"""Empirical scaling of the engine on right-branching synthetic trees."""
from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass

import numpy as np

from .rules import RuleSet
from .simplifier import EngineOptions, simplify
from .synth import right_branching_tree

DEFAULT_SIZES = (10, 20, 40, 80, 160, 320)


@dataclass(frozen=True)
class BenchRow:
    n: int
    outputs: int
    median_seconds: float


@dataclass(frozen=True)
class BenchReport:
    rows: tuple
    exponent: float  # slope of log(time) against log(n)
    nlogn_exponent: float  # the same fit applied to n log n itself
    total_seconds: float


def synthetic_corpus(sizes, seed: int, per_size: int = 3) -> dict[int, list]:
    rng = random.Random(seed)
    return {n: [right_branching_tree(n, rng) for _ in range(per_size)] for n in sizes}


def loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def run_bench(rules: RuleSet, sizes=DEFAULT_SIZES, seed: int = 0, repeats: int = 5,
              per_size: int = 3, opts: EngineOptions | None = None) -> BenchReport:
    """Median per-sentence wall time for each size, plus the fitted exponent."""
    sizes = sorted(set(int(n) for n in sizes))
    if len(sizes) < 2:
        raise ValueError("need at least two sizes to fit an exponent")
    opts = opts or EngineOptions(max_generated=10**6, max_steps=10**7)
    start = time.perf_counter()
    rows = []
    for n, trees in synthetic_corpus(sizes, seed, per_size).items():
        timings = []
        for tree in trees:
            for _ in range(repeats):
                t0 = time.perf_counter()
                result = simplify(tree, rules, opts)
                timings.append(time.perf_counter() - t0)
        rows.append(BenchRow(n, len(result.outputs), statistics.median(timings)))
    ns = [r.n for r in rows]
    return BenchReport(
        rows=tuple(rows),
        exponent=loglog_slope(ns, [max(r.median_seconds, 1e-9) for r in rows]),
        nlogn_exponent=loglog_slope(ns, [n * np.log(n) for n in ns]),
        total_seconds=time.perf_counter() - start,
    )


def format_report(report: BenchReport) -> str:
    lines = [f"{'n':>6} {'outputs':>8} {'median_s':>12}"]
    lines += [f"{r.n:>6} {r.outputs:>8} {r.median_seconds:>12.6f}" for r in report.rows]
    lines.append(f"fitted exponent: {report.exponent:.3f}")
    lines.append(f"n log n reference exponent over these sizes: {report.nlogn_exponent:.3f} (not gated)")
    return "\n".join(lines)
