#!/usr/bin/env python
"""Benchmark the ROUGE kernels: numba @njit vs the pure-numpy fallback.

Example:
    python benchmarks/bench_kernels.py --pairs 200 --len 250 --vocab 600
"""

import argparse
import time

import numpy as np

from qfs_forge import _kernels


def make_pairs(n_pairs, length, vocab, seed):
    rng = np.random.default_rng(seed)
    return [
        (
            rng.integers(0, vocab, size=length).astype(np.int64),
            rng.integers(0, vocab, size=length).astype(np.int64),
        )
        for _ in range(n_pairs)
    ]


def time_fn(fn, pairs, repeats):
    # warmup (also triggers JIT compilation for the numba path)
    for a, b in pairs[: min(4, len(pairs))]:
        fn(a, b)
    start = time.perf_counter()
    for _ in range(repeats):
        for a, b in pairs:
            fn(a, b)
    elapsed = time.perf_counter() - start
    return elapsed / (repeats * len(pairs)) * 1e3  # ms per call


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=200, help="number of sequence pairs")
    parser.add_argument("--len", type=int, dest="length", default=250, help="tokens per sequence")
    parser.add_argument("--vocab", type=int, default=600, help="token id range")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not _kernels.HAS_NUMBA:
        print("numba not importable; only the numpy path can be timed")

    pairs = make_pairs(args.pairs, args.length, args.vocab, args.seed)
    print(
        f"{args.pairs} pairs x {args.length} tokens (vocab {args.vocab}), "
        f"{args.repeats} repeats"
    )

    rows = []
    for name, numba_fn, numpy_fn in (
        ("lcs_length", _kernels.lcs_length_numba, _kernels.lcs_length_numpy),
        ("clipped_overlap", _kernels.clipped_overlap_numba, _kernels.clipped_overlap_numpy),
    ):
        numpy_ms = time_fn(numpy_fn, pairs, args.repeats)
        if _kernels.HAS_NUMBA:
            a, b = pairs[0]
            assert int(numba_fn(a, b)) == int(numpy_fn(a, b)), f"{name}: path mismatch"
            numba_ms = time_fn(numba_fn, pairs, args.repeats)
            rows.append((name, numpy_ms, numba_ms, numpy_ms / numba_ms))
        else:
            rows.append((name, numpy_ms, float("nan"), float("nan")))

    print(f"{'kernel':<18}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, numpy_ms, numba_ms, speedup in rows:
        print(f"{name:<18}{numpy_ms:>10.4f}{numba_ms:>10.4f}{speedup:>8.1f}x")


if __name__ == "__main__":
    main()
