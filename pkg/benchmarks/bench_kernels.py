"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--m 3] [--repeat 3]

Each kernel is run once to warm the JIT, results are checked equal, then the
best of ``--repeat`` runs is reported.
"""

import argparse
import time

import numpy as np

from sqapn import kernels
from sqapn.family import _tables, family_create
from sqapn.gf import field_create


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    ctx = field_create(args.m)
    family_create(ctx, args.k, 1, 1, 0)
    mt, fr = _tables(ctx, args.k)
    m = args.m
    lut = kernels.family_table_np(mt, fr, m, 1, 1, 0)
    size = lut.shape[0]
    masks = np.arange(1, min(size, 257), dtype=np.int64)
    ys = np.arange(1, min(size, 1025), dtype=np.int64)

    cases = {
        "family_table": (kernels.family_table_nb, kernels.family_table_np, (mt, fr, m, 1, 1, 0)),
        "ddt_rows": (kernels.ddt_rows_nb, kernels.ddt_rows_np, (lut, 1, size, -1)),
        "walsh_rows": (kernels.walsh_rows_nb, kernels.walsh_rows_np, (lut, masks)),
        "kernel_sizes": (kernels.kernel_sizes_nb, kernels.kernel_sizes_np, (lut, ys)),
    }
    print(f"n = {3 * m} ({size} entries), best of {args.repeat}")
    print(f"{'kernel':<14}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for name, (nb, npf, fargs) in cases.items():
        nb(*fargs)  # compile
        t_nb, r_nb = best_of(lambda: nb(*fargs), args.repeat)
        t_np, r_np = best_of(lambda: npf(*fargs), args.repeat)
        if not same(r_nb, r_np):
            raise SystemExit(f"{name}: flavours disagree")
        print(f"{name:<14}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
