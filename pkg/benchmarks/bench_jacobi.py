"""Compare the compiled and pure-Python Jacobi kernels.

    python benchmarks/bench_jacobi.py [--repeat N] [--sizes 3,4,8,16,32]

Prints per-decomposition time for each backend and the speed-up, plus the
cost of a full ``diagnose`` call on the bundled data with each kernel.
"""
import argparse
import time

import numpy as np

from collindiag import _backend, build_design, diagnose, load_theil, numerics


def _time(fn, repeat):
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    kernels = {"python": _backend.jacobi_py}
    if _backend.jacobi_ext is not None:
        kernels["cython"] = _backend.jacobi_ext
    print(f"{'k':>4}  " + "  ".join(f"{name:>12}" for name in kernels) + "     speed-up")
    for k in sizes:
        a = rng.standard_normal((k, k))
        s = (a + a.T) / 2
        times = {
            name: _time(lambda kern=kern: numerics.sym_eigen(s, kernel=kern), repeat)
            for name, kern in kernels.items()
        }
        row = "  ".join(f"{times[n] * 1e6:10.1f}us" for n in kernels)
        ratio = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{k:>4}  {row}  {ratio:10.1f}x")


def bench_diagnose(repeat):
    ds, y = load_theil()
    x = build_design(ds.select(["income", "relprice", "twentys"]))
    saved = _backend.jacobi
    try:
        for name, kern in (("python", _backend.jacobi_py), ("cython", _backend.jacobi_ext)):
            if kern is None:
                continue
            _backend.jacobi = kern
            t = _time(lambda: diagnose(x, y), repeat)
            print(f"diagnose(theil) with {name:>6} kernel: {t * 1e3:.3f} ms")
    finally:
        _backend.jacobi = saved


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=200)
    p.add_argument("--sizes", default="3,4,8,16,32")
    args = p.parse_args()
    if _backend.jacobi_ext is None:
        print("compiled kernel not built; showing the pure-Python fallback only")
    bench_kernels([int(s) for s in args.sizes.split(",")], args.repeat)
    bench_diagnose(max(1, args.repeat // 4))


if __name__ == "__main__":
    main()
