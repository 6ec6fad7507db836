"""Benchmark the compiled kernel core against the pure numpy fallback.

Run:  python bench/bench_kernels.py
Each kernel is timed on a representative workload and the two backends'
results are checked for exact equality.
"""

import time

import numpy as np

from quadlab._kernels import backends

PHI = (1 + np.sqrt(5.0)) / 2.0


def timed(fn, *args, repeat=3):
    best, result = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def workloads():
    A3 = np.ascontiguousarray(np.diag([1.0, 1.0, -np.sqrt(2.0)]))
    t = 60.0
    zbox = (np.full(3, -60, dtype=np.int64), np.full(3, 60, dtype=np.int64))
    yield ("count ternary t=60", "count_quadratic",
           (A3, np.array([1 / 3, 1 / 7, 1 / 11]), 1.0, np.zeros(3),
            *zbox, -0.25, 0.25, True, True, 1, t))

    Ag = np.ascontiguousarray(np.diag([1.0, -PHI * PHI]))
    yield ("golden min shell [1, 2048)", "min_abs_quadratic",
           (Ag, np.zeros(2), 1, 2048, True))

    yield ("family min shell [64, 128)", "min_abs_power_family",
           (2, 1.0, 0.7, np.array([0.5, 0.0, 0.0]), 64, 128, False))

    ms = np.arange(24, 49, dtype=float)
    a = (ms + 0.0) ** 0.5
    b = np.sqrt(2.0) * (ms ** 0.5)
    yield ("four-term M=24", "four_term_pair_count", (a, b, 0.1 * 24 ** 0.5))

    basis = np.ascontiguousarray(np.eye(2))
    yield ("disk points R=400", "points_in_disk",
           (basis, np.zeros(2), np.zeros(2), 400.0, -401, 401, -401, 401))


def main():
    impls = backends()
    if "native" not in impls:
        print("compiled backend unavailable; nothing to compare")
        return 1
    print(f"{'workload':<28} {'native':>10} {'python':>10} {'speedup':>8}")
    for label, fn_name, args in workloads():
        rows = {}
        rows["native"], native_out = timed(getattr(impls["native"], fn_name), *args)
        rows["python"], py_out = timed(getattr(impls["python"], fn_name), *args)
        if isinstance(native_out, np.ndarray):
            same = np.array_equal(native_out, py_out)
        elif isinstance(native_out, tuple):
            same = (native_out[0] == py_out[0]
                    and np.array_equal(native_out[1], py_out[1]))
        else:
            same = native_out == py_out
        assert same, f"backend mismatch on {label}"
        print(f"{label:<28} {rows['native']*1e3:>8.2f}ms {rows['python']*1e3:>8.2f}ms "
              f"{rows['python']/rows['native']:>7.1f}x")
    print("results identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
