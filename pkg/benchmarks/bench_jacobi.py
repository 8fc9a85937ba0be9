"""Time the compiled and pure-Python Jacobi kernels on random symmetric matrices.

    python3 benchmarks/bench_jacobi.py --sizes 6 12 20 40 64 --repeat 5
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from mindistinct._kernels import compiled_jacobi_sweeps, python_jacobi_sweeps
from mindistinct.spectra import JACOBI_MAX_SWEEPS, JACOBI_TOL


def time_kernel(kernel, a: np.ndarray, repeat: int) -> tuple[float, int]:
    best, sweeps = float("inf"), 0
    for _ in range(repeat):
        work = a.copy()
        v = np.eye(len(a))
        tol = JACOBI_TOL * np.linalg.norm(a)
        start = time.perf_counter()
        sweeps = kernel(work, v, tol, JACOBI_MAX_SWEEPS)
        best = min(best, time.perf_counter() - start)
    return best, sweeps


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[6, 12, 20, 40, 64])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>4} {'sweeps':>6} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for n in args.sizes:
        x = rng.standard_normal((n, n))
        a = np.ascontiguousarray((x + x.T) / 2)
        t_py, sweeps = time_kernel(python_jacobi_sweeps, a, args.repeat)
        if compiled_jacobi_sweeps is None:
            print(f"{n:>4} {sweeps:>6} {t_py * 1e3:>10.3f} {'n/a':>12} {'':>8}")
            continue
        t_c, _ = time_kernel(compiled_jacobi_sweeps, a, args.repeat)
        print(f"{n:>4} {sweeps:>6} {t_py * 1e3:>10.3f} {t_c * 1e3:>12.3f} {t_py / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
