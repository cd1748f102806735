"""Compare the numba and numpy bodies of the audit kernels.

    python3 benchmarks/bench_kernels.py [--sizes 1000 10000 100000] [--repeat 5]

Each size is a number of triangles with 10 barycentric samples apiece, the
shape produced by an audit of a 2-dimensional complex. The first numba
call of each kernel compiles it and is excluded from the timings.
"""

import argparse
import json
import time

import numpy as np

from rootres import kernels


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def run(sizes, repeat, samples=10, n=3, seed=0):
    rng = np.random.default_rng(seed)
    rows = []
    for S in sizes:
        L = rng.normal(size=(S, 3)) + 1j * rng.normal(size=(S, 3))
        T = rng.dirichlet(np.ones(3), size=(S, samples))
        G = kernels.affine(L, T, use_numba=False)
        F = kernels.exp_affine(L, T, use_numba=False)
        cases = {
            "exp_affine": lambda nb: kernels.exp_affine(L, T, use_numba=nb),
            "affine": lambda nb: kernels.affine(L, T, use_numba=nb),
            "power_residual": lambda nb: kernels.power_residual(G, F, n, use_numba=nb),
        }
        for name, call in cases.items():
            row = {"kernel": name, "simplices": S,
                   "numpy_s": _best(lambda: call(False), repeat)}
            if kernels.HAVE_NUMBA:
                call(True)  # compile
                row["numba_s"] = _best(lambda: call(True), repeat)
                row["speedup"] = row["numpy_s"] / row["numba_s"]
                row["max_abs_diff"] = float(np.max(np.abs(call(True) - call(False))))
            rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="print rows as JSON")
    args = ap.parse_args()
    rows = run(args.sizes, args.repeat)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    if not kernels.HAVE_NUMBA:
        print("numba unavailable or disabled by ROOTRES_DISABLE_NUMBA; numpy timings only")
    print(f"{'kernel':<16}{'simplices':>10}{'numpy ms':>12}{'numba ms':>12}{'speedup':>9}{'max diff':>11}")
    for r in rows:
        nb = r.get("numba_s")
        print(f"{r['kernel']:<16}{r['simplices']:>10}{1e3 * r['numpy_s']:>12.3f}"
              + (f"{1e3 * nb:>12.3f}{r['speedup']:>9.2f}{r['max_abs_diff']:>11.1e}" if nb else ""))


if __name__ == "__main__":
    main()
