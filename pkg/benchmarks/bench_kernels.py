"""Compare the compiled and pure-Python lattice-point kernels on the package's own instances.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from polymut import kernels
from polymut.lie import gt_polytope_A, gt_polytope_C, sl4_no_body
from polymut.polytope import _integer_system, dilate, dual_at


def instances():
    yield "GT A3 (2rho)", gt_polytope_A(3, (2, 2, 2))
    yield "GT A3 (2rho) x3", dilate(gt_polytope_A(3, (2, 2, 2)), 3)
    yield "GT C3 (2rho)", gt_polytope_C(3, (2, 2, 2))
    yield "NO fixture dual x2", dilate(dual_at(sl4_no_body((2, 2, 2)), (0, 0, 0, 1, 1, 1)), 2)


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.BACKEND != "compiled":
        print("compiled extension not available; build it with `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'instance':<22}{'points':>10}{'python s':>12}{'compiled s':>12}{'speedup':>9}")
    for name, P in instances():
        A, b, lo, hi = _integer_system(P, strict=False)
        n_py = kernels.count_points(A, b, lo, hi, backend="python")
        n_c = kernels.count_points(A, b, lo, hi, backend="compiled")
        if n_py != n_c:
            raise SystemExit(f"{name}: backends disagree ({n_py} vs {n_c})")
        t_py = _time(lambda: kernels.enumerate_points(A, b, lo, hi, backend="python"), args.repeat)
        t_c = _time(lambda: kernels.enumerate_points(A, b, lo, hi, backend="compiled"), args.repeat)
        print(f"{name:<22}{n_py:>10}{t_py:>12.4f}{t_c:>12.4f}{t_py / t_c:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
