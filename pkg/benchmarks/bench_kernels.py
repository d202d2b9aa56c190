"""Compare the compiled and pure-Python orbit kernels.

Times ``classify_params`` on a parameter-plane patch and ``classify_dynamical``
on a dynamical-plane patch, checks that both backends agree element for
element, and prints one line per workload.

    python3 benchmarks/bench_kernels.py --n 60 --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from blaschke_tongues import _backend
from blaschke_tongues.config import DEFAULT
from blaschke_tongues.render import ScanSpec


def param_workload(kern, spec: ScanSpec):
    ar, ai = spec.points()
    code = np.zeros(ar.size, np.int32)
    aux = np.zeros(ar.size, np.int64)
    kern.classify_params(ar, ai, spec.max_iters, spec.max_period, spec.lam,
                         spec.zero_radius, spec.conv_tol, spec.circle_tol,
                         code, aux, 0, ar.size)
    return code, aux


def dyn_workload(kern, spec: ScanSpec):
    a = complex(spec.a)
    zr, zi = spec.points()
    code = np.zeros(zr.size, np.int32)
    aux = np.zeros(zr.size, np.int64)
    # the parabolic fixed point of the a = 3 tip as the only basin target
    tr, ti, tl = np.array([1.0]), np.array([0.0]), np.array([3], np.int32)
    kern.classify_dynamical(a.real, a.imag, zr, zi, spec.max_iters, 2.0 * (abs(a) + 1),
                            spec.zero_radius, tr, ti, tl, 1e-2, code, aux, 0, zr.size)
    return code, aux


def best_time(fn, repeat: int) -> tuple[float, object]:
    best, out = np.inf, None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=60, help="pixels per side")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    try:
        compiled = _backend.get("cython")
    except ImportError:
        print("compiled kernels not built; nothing to compare")
        return 1
    fallback = _backend.get("python")

    n = args.n
    workloads = {
        "parameter plane |a|<=3.5": (
            param_workload, ScanSpec(center=0, width=7, height=7, nx=n, ny=n)),
        "parameter plane near tip": (
            param_workload, ScanSpec(center=2.82 + 0.035j, width=0.4, height=0.2, nx=n, ny=n)),
        "dynamical plane a=3": (
            dyn_workload, ScanSpec(center=0, width=4, height=4, nx=n, ny=n, plane="dynamical",
                                   a=3, max_iters=2000)),
    }
    print(f"{'workload':28s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s} agree")
    for name, (fn, spec) in workloads.items():
        tc, oc = best_time(lambda: fn(compiled, spec), args.repeat)
        tp, op = best_time(lambda: fn(fallback, spec), 1)
        agree = all(np.array_equal(x, y) for x, y in zip(oc, op))
        print(f"{name:28s} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f} {agree}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
