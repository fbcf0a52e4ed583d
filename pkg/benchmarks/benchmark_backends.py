"""Compare the numba kernels against the pure-numpy fallback.

Times the two search engines end to end (the kernels dominate both) and
the three hottest kernels in isolation.  Run from a checkout:

    python benchmarks/benchmark_backends.py [--n 3] [--q 61] [--attempts 2]

The numba numbers include one warmup call so JIT compilation is not billed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from capsearch import kernels
from capsearch.engine import tracker_from_points
from capsearch.fop import fop_run
from capsearch.greedy import ExactScorer, GreedyParams, frame, greedy_attempts
from capsearch.space import ProjSpace


def time_call(fn, *args, repeat=1, **kwargs):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_backend(name: str, n: int, q: int, attempts: int, seed: int):
    kernels.set_backend(name)
    space = ProjSpace(n, q)
    results = {}

    if name == "numba":  # warm the JIT cache off the clock
        fop_run(ProjSpace(n, min(q, 7)))

    t, cap = time_call(fop_run, space)
    results["fop_run"] = (t, cap.size)

    params = GreedyParams(master_seed=seed, n_q=attempts)
    t, run = time_call(greedy_attempts, space, params, frame(space))
    results["greedy_attempts"] = (t, min(run.sizes))

    # isolated kernels on a frame tracker
    K = kernels.active()
    tracker = tracker_from_points(space, frame(space))
    idx = tracker.uncovered_indices0()
    scorer = ExactScorer(tracker)
    t, _ = time_call(scorer.scores_for, idx, repeat=3)
    results["score_all_uncovered"] = (t, idx.shape[0])

    t, _ = time_call(K.scan_uncovered, tracker.covered, 0, repeat=3)
    results["scan_uncovered"] = (t, space.point_count)

    bcoords = tracker.cap_coords()[0]
    lid = np.empty(space.point_count, dtype=np.uint32)
    u = np.zeros(space.lines_per_point + 1, dtype=np.int32)
    t, _ = time_call(
        K.build_line_table, bcoords, int(np.argmax(bcoords != 0)), tracker.covered,
        space.q, space._inv, space._starts, space._line_starts, lid, u, repeat=3,
    )
    results["build_line_table"] = (t, space.point_count)
    return results


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--q", type=int, default=61)
    ap.add_argument("--attempts", type=int, default=2)
    ap.add_argument("--seed", type=int, default=99)
    args = ap.parse_args()

    print(f"PG({args.n},{args.q}), {args.attempts} greedy attempts, seed {args.seed}")
    all_results = {}
    for name in ("numba", "numpy"):
        try:
            all_results[name] = bench_backend(name, args.n, args.q, args.attempts, args.seed)
        except ImportError as exc:
            print(f"{name}: unavailable ({exc})")
    if len(all_results) < 2:
        return
    print(f"{'kernel':24} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for key in all_results["numba"]:
        tb, size_b = all_results["numba"][key]
        tn, size_n = all_results["numpy"][key]
        assert size_b == size_n, f"{key}: backends disagree ({size_b} vs {size_n})"
        print(f"{key:24} {tb:9.3f}s {tn:9.3f}s {tn / tb:7.1f}x")
    print("(result columns verified identical across backends)")


if __name__ == "__main__":
    main()
