"""Compare the jitted and pure-numpy kernel backends.

Run:  python benchmarks/bench_kernels.py [--repeats 5]

Each kernel gets one untimed warmup call per backend so jit
compilation never counts against the numba column.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fairinfluence.backend import HAS_NUMBA
from fairinfluence.kernels import adam_logistic_train, masked_mix_matrix, shift_pair_means


def _bench(fn, repeats: int) -> float:
    fn()  # warmup; also triggers jit compilation
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    X = rng.standard_normal((20_000, 8))
    y = (rng.random(20_000) < 0.5).astype(np.float64)
    row_vals = rng.standard_normal(8)
    base_vals = rng.standard_normal((4096, 8))
    masks = rng.random((256, 8)) < 0.5
    a = rng.standard_normal(4096)
    b = rng.standard_normal(4096)
    offsets = rng.standard_normal(2048)

    cases = {
        "adam_logistic (20k x 8, 200 epochs)": lambda be: adam_logistic_train(
            X, y, 0.05, 200, 0.9, 0.999, 1e-8, backend=be
        ),
        "masked_mix_matrix (4096 x 256)": lambda be: masked_mix_matrix(
            row_vals, base_vals, masks, 0.1, backend=be
        ),
        "shift_pair_means (4096 x 2048)": lambda be: shift_pair_means(
            a, b, offsets, 1.3, backend=be
        ),
    }

    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    print(f"numba available: {HAS_NUMBA}")
    print(f"{'kernel':<40} " + " ".join(f"{be:>12}" for be in backends))
    for name, call in cases.items():
        cells = []
        for be in backends:
            seconds = _bench(lambda: call(be), args.repeats)
            cells.append(f"{seconds * 1e3:>10.2f}ms")
        print(f"{name:<40} " + " ".join(cells))


if __name__ == "__main__":
    main()
