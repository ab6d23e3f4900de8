#!/usr/bin/env python3
"""Time the numba kernels against their pure-numpy fallbacks.

Run with numba active (default) to get both columns; the dispatch flag
``RDCLAB_NO_NUMBA=1`` only affects which path the package itself uses, the
benchmark always calls both implementations directly.

Usage: python benchmarks/bench_kernels.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rdclab import _kernels
from rdclab.discrete_region import Channel, DiscreteSource, _enumeration_arrays


def _time(fn, *args, repeats=5):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_grid(repeats: int) -> None:
    args = (1.0, 1.4189385332046727, 0.49, 0.5, 2.0, 400, 400)
    if _kernels.USE_NUMBA:
        _kernels._grid_rate_scan_jit(*args)  # compile before timing
        t_nb, r_nb = _time(_kernels._grid_rate_scan_jit, *args, repeats=repeats)
    else:
        t_nb, r_nb = float("nan"), None
    t_np, r_np = _time(_kernels._grid_rate_scan_numpy, *args, repeats=repeats)
    if r_nb is not None:
        assert abs(r_nb[1] - r_np[1]) < 1e-12, "paths disagree"
    print(f"grid_rate_scan 400x400   numba {t_nb*1e3:8.2f} ms   numpy {t_np*1e3:8.2f} ms")


def bench_decoder_scan(repeats: int) -> None:
    src = DiscreteSource(
        x_values=np.array([-1.0, 1.0]),
        s_size=2,
        pmf=np.array([[0.5, 0.0], [0.0, 0.5]]),
    )
    encoder = Channel(np.array([[0.9, 0.1], [0.1, 0.9]]))
    vals = np.array([-1.0, -0.8, 0.8, 1.0])
    rows, row_d, b = _enumeration_arrays(src, encoder, 10, vals)
    total = rows.shape[0] ** encoder.n_out

    def run_jit():
        out_d = np.empty(total)
        out_c = np.empty(total)
        return _kernels._dc_scan_jit(rows, encoder.n_out, row_d, b, out_d, out_c)

    def run_np():
        out_d = np.empty(total)
        out_c = np.empty(total)
        return _kernels._dc_scan_numpy(rows, encoder.n_out, row_d, b, out_d, out_c)

    if _kernels.USE_NUMBA:
        run_jit()
        t_nb, r_nb = _time(run_jit, repeats=repeats)
    else:
        t_nb, r_nb = float("nan"), None
    t_np, r_np = _time(run_np, repeats=repeats)
    if r_nb is not None:
        assert np.allclose(r_nb[1], r_np[1], atol=1e-12), "paths disagree"
    print(
        f"dc_scan {total} decoders  numba {t_nb*1e3:8.2f} ms   numpy {t_np*1e3:8.2f} ms"
    )


def bench_w2(repeats: int) -> None:
    rng = np.random.default_rng(0)
    xv = np.sort(rng.normal(size=64))
    yv = np.sort(rng.normal(size=64))
    xp = rng.dirichlet(np.ones(64))
    yp = rng.dirichlet(np.ones(64))

    def run(fn, loops=2000):
        acc = 0.0
        for _ in range(loops):
            acc += fn(xv, xp, yv, yp)
        return acc

    if _kernels.USE_NUMBA:
        _kernels._w2_quantile_jit(xv, xp, yv, yp)
        t_nb, r_nb = _time(run, _kernels._w2_quantile_jit, repeats=repeats)
    else:
        t_nb, r_nb = float("nan"), None
    t_np, r_np = _time(run, _kernels._w2_quantile_py, repeats=repeats)
    if r_nb is not None:
        assert abs(r_nb - r_np) < 1e-9
    print(f"w2_quantile x2000        numba {t_nb*1e3:8.2f} ms   numpy {t_np*1e3:8.2f} ms")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    print(f"numba available on this run: {_kernels.USE_NUMBA}")
    bench_grid(args.repeats)
    bench_decoder_scan(args.repeats)
    bench_w2(args.repeats)


if __name__ == "__main__":
    main()
