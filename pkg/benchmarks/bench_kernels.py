"""Compare the numba kernels against their pure-numpy fallbacks.

Runs each kernel pair on a fixed seeded workload and prints the median wall
time per call plus the numba speedup. Useful for checking that the compiled
path is worth shipping on a given machine.

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from benchvote import kernels


def rankings_matrix(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    return np.stack([rng.permutation(k) for _ in range(n)]).astype(np.int64)


def positions_from_sequences(seq: np.ndarray) -> np.ndarray:
    pos = np.empty_like(seq)
    rows = np.arange(seq.shape[0])[:, None]
    pos[rows, seq] = np.arange(seq.shape[1])[None, :]
    return pos


def median_seconds(fn, args, repeats: int) -> float:
    fn(*args)  # warm the JIT cache and page in the inputs
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--repeats", type=int, default=7, help="timed repetitions per kernel"
    )
    args = parser.parse_args()

    if not hasattr(kernels, "nb_pairwise_above_counts"):
        print("numba is not importable; nothing to compare")
        return 1

    rng = np.random.default_rng(42)
    pos = positions_from_sequences(rankings_matrix(rng, 200, 50))
    values = rng.integers(0, 1_000_000, size=100_000).astype(np.int64)
    axis_seq = rankings_matrix(rng, 5, 9)

    cases = [
        ("pairwise_above_counts (200 x 50)",
         kernels.np_pairwise_above_counts, kernels.nb_pairwise_above_counts, (pos,)),
        ("count_inversions (100k values)",
         kernels.np_count_inversions, kernels.nb_count_inversions, (values,)),
        ("enumerate_axes (9 models, 5 rankings)",
         kernels.np_enumerate_axes, kernels.nb_enumerate_axes, (axis_seq,)),
    ]

    width = max(len(name) for name, *_ in cases)
    print(f"{'kernel'.ljust(width)}  {'numpy':>12}  {'numba':>12}  {'speedup':>8}")
    for name, np_fn, nb_fn, call_args in cases:
        np_time = median_seconds(np_fn, call_args, args.repeats)
        nb_time = median_seconds(nb_fn, call_args, args.repeats)
        ratio = np_time / nb_time if nb_time > 0 else float("inf")
        print(
            f"{name.ljust(width)}  {np_time * 1e3:>10.3f}ms  "
            f"{nb_time * 1e3:>10.3f}ms  {ratio:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
