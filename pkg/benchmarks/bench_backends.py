"""Benchmark the compiled Jacobi kernel against the pure-Python twin.

Run:  python benchmarks/bench_backends.py [--sizes 4,8,12,16,32] [--reps 200]

Reports per-solve time for both kernels on random Hermitian matrices, their
agreement, and an end-to-end fuzz-trial comparison (the eigensolver dominates
a trial, so the speedup carries through).
"""

import argparse
import time

import numpy as np

from schatten_lab import _jacobi_py

try:
    from schatten_lab import _jacobi as _compiled
except ImportError:
    _compiled = None


def _hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2.0


def time_kernel(kernel, mats, reps):
    t0 = time.perf_counter()
    for _ in range(reps):
        for m in mats:
            kernel.jacobi_eigh(m)
    return (time.perf_counter() - t0) / (reps * len(mats))


def bench_kernels(sizes, reps):
    rng = np.random.default_rng(2024)
    print(f"{'n':>4} {'python (us)':>14} {'cython (us)':>14} "
          f"{'speedup':>9} {'max |dw|':>12}")
    for n in sizes:
        mats = [_hermitian(rng, n) for _ in range(8)]
        t_py = time_kernel(_jacobi_py, mats, max(1, reps // 10))
        if _compiled is None:
            print(f"{n:>4} {t_py * 1e6:>14.1f} {'(not built)':>14}")
            continue
        t_cy = time_kernel(_compiled, mats, reps)
        dw = 0.0
        for m in mats:
            w_py = np.sort(_jacobi_py.jacobi_eigh(m)[0])
            w_cy = np.sort(_compiled.jacobi_eigh(m)[0])
            dw = max(dw, float(np.max(np.abs(w_py - w_cy))))
        print(f"{n:>4} {t_py * 1e6:>14.1f} {t_cy * 1e6:>14.1f} "
              f"{t_py / t_cy:>8.1f}x {dw:>12.2e}")


def bench_fuzz_trial():
    """End-to-end: one positive-block trial across the default p-grid."""
    import importlib
    import os

    import schatten_lab.backend as backend_mod
    from schatten_lab import inequality_lab

    results = {}
    for name in ("python", "cython"):
        if name == "cython" and _compiled is None:
            continue
        # schatten_core resolves backend.jacobi_eigh at call time, so
        # reloading the selector swaps the kernel for the whole package
        os.environ["SCHATTEN_LAB_BACKEND"] = name
        importlib.reload(backend_mod)
        t0 = time.perf_counter()
        for idx in range(40):
            inequality_lab.run_trial(
                "thm1", 2 + idx % 5, inequality_lab.DEFAULT_P_GRID,
                "mixed", inequality_lab.trial_seed(7, idx))
        results[name] = (time.perf_counter() - t0) / 40
    os.environ.pop("SCHATTEN_LAB_BACKEND", None)
    importlib.reload(backend_mod)
    print("\nfull fuzz trial (sampling + checks over the default p-grid):")
    for name, dt in results.items():
        print(f"  {name:>7}: {dt * 1e3:8.2f} ms/trial")
    if len(results) == 2:
        print(f"  speedup: {results['python'] / results['cython']:.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="4,8,12,16,32",
                        help="comma-separated matrix sizes")
    parser.add_argument("--reps", type=int, default=200)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    if _compiled is None:
        print("note: compiled kernel not built; showing python timings only")
    bench_kernels(sizes, args.reps)
    bench_fuzz_trial()


if __name__ == "__main__":
    main()
