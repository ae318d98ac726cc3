"""Compiled vs pure-Python FISTA kernel.

Times the raw kernel on the sine-dictionary Gram systems used by the
regularised fit, then a full warm-started Pareto sweep with each backend.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from fourier_lcu import _kernels_py, kernels, regularized_fit
from fourier_lcu.fourier_extension import eta_for_m

try:
    from fourier_lcu import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_case(m, iters, repeat):
    eta = eta_for_m(m)
    d = regularized_fit._design(m, eta, regularized_fit.RegularizedProblem(m, eta, 0.0).quad_order)
    thr = 1e-6 * d.l1_weight
    x0 = np.zeros(m)
    args = (d.gram, d.rhs, x0, thr, d.lipschitz, iters, 0.0)
    row = {"m": m, "python": best_of(lambda: _kernels_py.fista_gram(*args), repeat)}
    if compiled is not None:
        row["cython"] = best_of(lambda: compiled.fista_gram(*args), repeat)
        xp = _kernels_py.fista_gram(*args)[0]
        xc = compiled.fista_gram(*args)[0]
        row["max_diff"] = float(np.max(np.abs(xp - xc)))
    return row


def sweep_case(m, backend):
    saved = kernels.fista_gram
    kernels.fista_gram = backend.fista_gram
    regularized_fit._design.cache_clear()
    try:
        t0 = time.perf_counter()
        front = regularized_fit.pareto_sweep(m, eta_for_m(m))
        return time.perf_counter() - t0, front.points[-1].alpha
    finally:
        kernels.fista_gram = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--iters", type=int, default=2000)
    args = parser.parse_args()

    print(f"compiled extension: {'available' if compiled else 'missing'}")
    print(f"\nkernel, {args.iters} iterations (best of {args.repeat})")
    print(f"{'m':>4} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8} {'max diff':>9}")
    for m in (8, 16, 32, 64):
        r = kernel_case(m, args.iters, args.repeat)
        if compiled is None:
            print(f"{m:>4} {1e3 * r['python']:>12.2f}")
            continue
        print(
            f"{m:>4} {1e3 * r['python']:>12.2f} {1e3 * r['cython']:>12.2f}"
            f" {r['python'] / r['cython']:>8.1f} {r['max_diff']:>9.1e}"
        )

    print("\nfull 40-point Pareto sweep")
    print(f"{'m':>4} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}")
    for m in (16, 64):
        tp, ap = sweep_case(m, _kernels_py)
        if compiled is None:
            print(f"{m:>4} {tp:>11.2f}")
            continue
        tc, ac = sweep_case(m, compiled)
        assert abs(ap - ac) < 1e-9, (ap, ac)
        print(f"{m:>4} {tp:>11.2f} {tc:>11.2f} {tp / tc:>8.1f}")


if __name__ == "__main__":
    main()
