"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--quick]

Both backends are imported directly, so the NLGKIT_DISABLE_NUMBA flag does not
matter here. JIT compilation is triggered once before timing. Results are
checked for equality before anything is reported.
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from nlgkit._kernels import numba_backend, numpy_backend


def workloads(quick: bool):
    rng = np.random.default_rng(0)
    scale = 1 if quick else 4
    sent = [(rng.integers(0, 40, rng.integers(5, 30)), rng.integers(0, 40, rng.integers(5, 30)))
            for _ in range(250 * scale)]
    long_pair = (rng.integers(0, 200, 1500 * scale), rng.integers(0, 200, 1500 * scale))
    words = rng.integers(0, 5000, 200_000 * scale)
    n = 500
    x, y = rng.normal(size=n), rng.integers(1, 7, n).astype(float)
    idx = rng.integers(0, n, (250 * scale, n))

    return {
        "lcs (sentence pairs)": lambda b: [b.lcs_length(p, q) for p, q in sent],
        "lcs (one long pair)": lambda b: b.lcs_length(*long_pair),
        "levenshtein (sentence pairs)": lambda b: [b.levenshtein(p, q) for p, q in sent],
        "ter shift search (sentence pairs)": lambda b: [b.ter_shift_search(p, q, 50) for p, q in sent],
        "msttr segment counts": lambda b: b.segment_type_counts(words, 50),
        "bootstrap spearman (n=500)": lambda b: b.bootstrap_spearman(x, y, idx),
    }


def best_of(fn, backend, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(backend)
        times.append(time.perf_counter() - t)
    return min(times), statistics.median(times)


def same(a, b) -> bool:
    if isinstance(a, np.ndarray):
        return a.shape == b.shape and np.allclose(a, b, rtol=0, atol=1e-12, equal_nan=True)
    return a == b


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args()
    if numba_backend is None:
        raise SystemExit("numba backend unavailable (not installed, or NLGKIT_DISABLE_NUMBA is set)")

    print(f"{'kernel':36} {'numpy (ms)':>11} {'numba (ms)':>11} {'speedup':>8}")
    for name, fn in workloads(args.quick).items():
        ref, got = fn(numpy_backend), fn(numba_backend)  # also warms the JIT
        if not same(ref, got):
            raise SystemExit(f"{name}: backends disagree")
        t_np, _ = best_of(fn, numpy_backend, args.repeat)
        t_nb, _ = best_of(fn, numba_backend, args.repeat)
        print(f"{name:36} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
