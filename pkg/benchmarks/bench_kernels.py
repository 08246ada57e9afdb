#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs each hot kernel on identical inputs through both backends and prints
a timing table plus the speedup.  The counts must agree exactly; any
disagreement is reported loudly.  Run after `pip install -e .`:

    python benchmarks/bench_kernels.py

Set ANTIPODES_NUMBA=0 to verify the package itself falls back cleanly.
"""

import time

import numpy as np

from antipodes import _kernels as K
from antipodes.generators import gen_circle, gen_polygon, gen_random_disk


def timeit(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def row(name, nb_fn, np_fn, args, fmt=lambda r: r):
    t_nb, r_nb = timeit(nb_fn, *args)
    t_np, r_np = timeit(np_fn, *args, repeat=1)
    agree = fmt(r_nb) == fmt(r_np)
    print(
        f"{name:<28} numba {t_nb * 1e3:9.2f} ms   numpy {t_np * 1e3:9.2f} ms   "
        f"x{t_np / t_nb:7.1f}   agree={agree}"
    )
    if not agree:
        print(f"  !! backend mismatch: {fmt(r_nb)} vs {fmt(r_np)}")
    return agree


def main():
    if not K.USING_NUMBA:
        print("numba backend unavailable or disabled; nothing to compare")
        return 1
    print(f"{'kernel':<28} {'numba':>16}   {'numpy':>16}   speedup")
    ok = True

    disk = gen_random_disk(4000, seed=1).coords
    eps = 1 / 32
    args = (disk, eps * eps, (1 - eps) ** 2)
    K._brute_counts_nb(*args)  # JIT warmup
    ok &= row("brute_counts n=4000", K._brute_counts_nb, K._brute_counts_np, args, tuple)

    circle = gen_circle(20_000).coords
    h = eps * (1 + 1e-9) + 1e-12
    order, uniq, starts = K.build_grid(circle, h)
    S = np.ascontiguousarray(circle[order])
    counts = np.diff(starts)
    offs = K.half_neighbor_offsets(2)
    near_args = (S, uniq, starts, offs, eps * eps)
    K._grid_near_nb(*near_args)
    ok &= row("grid_near circle n=20000", K._grid_near_nb, K._grid_near_np, near_args, int)
    far_args = (S, uniq, starts, counts, h, (1 - eps) ** 2)
    K._grid_far_nb(*far_args)
    ok &= row("grid_far circle n=20000", K._grid_far_nb, K._grid_far_np, far_args, int)

    big = gen_circle(50_000)
    hull = np.ascontiguousarray(big.coords)
    mask_args = (big.coords, hull, (1 / 64) ** 2)
    K._strip_mask_nb(*mask_args)
    ok &= row(
        "strip_mask n=h=50000",
        K._strip_mask_nb,
        K._strip_mask_np,
        mask_args,
        lambda m: int(m.sum()),
    )

    poly = gen_polygon(30_000, 52).coords
    eps9 = 2.0**-9
    cells = np.unique(np.floor(poly / (eps9 / 4)).astype(np.int64), axis=0)
    lo = np.ascontiguousarray(cells * (eps9 / 4))
    hi = np.ascontiguousarray((cells + 1) * (eps9 / 4))
    edge_args = (lo, hi, (1 - eps9) ** 2)
    K._box_edges_nb(*edge_args)
    ok &= row(
        f"box_edges k={len(cells)}",
        K._box_edges_nb,
        K._box_edges_np,
        edge_args,
        lambda e: (len(e[0]), e[0].sum(), e[1].sum()),
    )

    print("all kernels agree" if ok else "MISMATCH DETECTED")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
