"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Both backends are checked for identical output before timing.
"""
import argparse
import time

import numpy as np

from muwm import kernels
from muwm.constructions import load_dataset
from muwm.kernels import pack_pm_rows
from muwm.search import dephased_rows


def best_of(fn, repeat):
    fn()  # warm-up (includes numba compilation)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba unavailable; nothing to compare")

    cases = []
    for n, p, m in [(4, 3, 6), (5, 4, 6), (6, 4, 6), (7, 4, 2)]:
        R = dephased_rows(n, p, m)
        cases.append((f"norm_classes rows({n},{p},{m}) {len(R)}x{len(R)}",
                      lambda R=R, m=m, p=p: kernels.norm_classes_numba(R, R, m, p),
                      lambda R=R, m=m, p=p: kernels.norm_classes_numpy(R, R, m, p)))
    rows = load_dataset("H32").rows()
    X = pack_pm_rows(rows)
    cases.append((f"pm_gram H32 {len(rows)}x{len(rows)}",
                  lambda: kernels.pm_gram_numba(X, X, 32),
                  lambda: kernels.pm_gram_numpy(X, X, 32)))

    print(f"{'kernel':48s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, fast, ref in cases:
        assert np.array_equal(fast(), ref()), name
        tf, tr = best_of(fast, args.repeat), best_of(ref, args.repeat)
        print(f"{name:48s} {tf:10.4f} {tr:10.4f} {tr / tf:8.1f}")


if __name__ == "__main__":
    main()
