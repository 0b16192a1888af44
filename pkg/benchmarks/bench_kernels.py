#!/usr/bin/env python3
"""Benchmark the numba kernels against the numpy fallback.

Times the individual hot kernels and a full solver step at a production
grid size.  The fallback path is what you get with MHDLAB_NUMBA=0.

    python benchmarks/bench_kernels.py [--npts 512] [--reps 20]
"""

import argparse
import time

import numpy as np

from mhdlab import _kernels
from mhdlab.families import FamilyParams, make_family
from mhdlab.solver import SolveConfig, Stepper
from mhdlab.spectral import Grid


def timeit(fn, reps):
    fn()  # warm-up / JIT
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def bench_kernels(npts, reps):
    rng = np.random.default_rng(0)
    shape = (npts, npts)
    cplx = lambda: rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    real = lambda: np.abs(rng.standard_normal(shape))
    c, w = cplx(), real()
    u0, u1, b0, b1 = cplx(), cplx(), cplx(), cplx()
    k1 = np.arange(npts, dtype=float).reshape(-1, 1)
    k2 = np.arange(npts, dtype=float).reshape(1, -1)
    ksq = k1**2 + k2**2
    inv = np.where(ksq == 0, 0.0, 1.0 / np.where(ksq == 0, 1.0, ksq))
    mask = (ksq < (npts / 3.0) ** 2).astype(float)
    zu, zb, zw = cplx(), cplx(), cplx()
    f1, f2, psi = real(), real(), real()
    g1, g2 = cplx(), cplx()
    decay = np.exp(-real())

    cases = {
        "weighted_sumsq": lambda impl: impl(c, w),
        "pack_curl_2d": lambda impl: impl(u0, u1, b0, b1, k1, k2, zu, zb, zw),
        "rot_products_2d": lambda impl: impl(zu, zb, zw, f1, f2, psi),
        "project_mask_curl_2d": lambda impl: impl(
            np.array(u0), np.array(u1), np.array(b0), k1, k2, inv, mask, g1, g2),
        "heun_combine": lambda impl: impl(zu, decay, u0, 0.01, b0, b1),
        "dissipation_increment": lambda impl: impl(
            u0, u1, b0, b1, decay, w, w, w),
    }
    print(f"kernel timings at {npts}^2 ({reps} reps), numpy vs numba:")
    for name, runner in cases.items():
        t_np = timeit(lambda: runner(_kernels.get_impl(name, numba_ok=False)), reps)
        if _kernels.HAVE_NUMBA:
            t_nb = timeit(lambda: runner(_kernels.get_impl(name, numba_ok=True)), reps)
            print(f"  {name:24s} {t_np * 1e3:8.2f} ms   {t_nb * 1e3:8.2f} ms "
                  f"  x{t_np / t_nb:4.1f}")
        else:
            print(f"  {name:24s} {t_np * 1e3:8.2f} ms   (numba unavailable)")


def bench_step(npts, reps):
    grid = Grid(2, npts, 8.0)
    fam = make_family(FamilyParams(d=2, n=8, omega=1), grid)
    st = Stepper(fam.u0, fam.b0, SolveConfig(dt=2e-3, t_end=1.0))
    t = timeit(st.step, reps)
    mode = "numba" if _kernels.USE_NUMBA else "numpy"
    print(f"full solver step at {npts}^2 [{mode} kernels]: {t * 1e3:.1f} ms")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--npts", type=int, default=512)
    ap.add_argument("--reps", type=int, default=20)
    args = ap.parse_args()
    bench_kernels(args.npts, args.reps)
    bench_step(args.npts, args.reps)


if __name__ == "__main__":
    main()
