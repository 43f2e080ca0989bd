"""Compiled versus numpy sector kernel on the same quadratures.

    python3 benchmarks/bench_kernel.py [--repeat 3]

Both kernels are loaded side by side and swapped into the quadrature module,
so each case runs the identical node set; the table reports wall time and
the relative difference of the two results.
"""
import argparse
import time

from selberg import quadrature
from selberg._kernel_py import sector_sum as numpy_sum
from selberg.functionals import GenericParams, LaurentPoly, SymmetricParams

try:
    from selberg._kernel import sector_sum as cython_sum
except ImportError:
    cython_sum = None

CASES = [
    ("N=1 (0,1,0)", (0, 1, 0), SymmetricParams(-0.3, 0.4, 0.0).generic(1), None),
    ("N=2 (0,2,0)", (0, 2, 0), SymmetricParams(-0.3, 0.4, 0.35).generic(2), None),
    ("N=2 (1,1,0)", (1, 1, 0), GenericParams.make([-0.6, 0.3], [-0.9, 0.2], 0.15), None),
    ("N=3 (0,3,0)", (0, 3, 0), SymmetricParams(0.2, 0.1, 0.3).generic(3),
     quadrature.QuadSettings(max_level=4, target_rel=1e-6)),
]


def run(kernel, shape, p, s, repeat):
    quadrature._sector_sum = kernel
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        r = quadrature.selberg_quad(shape, LaurentPoly.constant(p.N), p, s)
        best = min(best, time.perf_counter() - t)
    return r.value, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    saved = quadrature._sector_sum
    if cython_sum is None:
        print("compiled kernel not built; only the numpy kernel is timed")
    print(f"{'case':<14} {'numpy s':>10} {'cython s':>10} {'speedup':>8} {'rel diff':>10}")
    try:
        for name, shape, p, s in CASES:
            v_np, t_np = run(numpy_sum, shape, p, s, args.repeat)
            if cython_sum is None:
                print(f"{name:<14} {t_np:10.4f}")
                continue
            v_cy, t_cy = run(cython_sum, shape, p, s, args.repeat)
            diff = abs(v_np - v_cy) / abs(v_cy)
            print(f"{name:<14} {t_np:10.4f} {t_cy:10.4f} {t_np / t_cy:8.2f} {diff:10.2e}")
    finally:
        quadrature._sector_sum = saved


if __name__ == "__main__":
    main()
