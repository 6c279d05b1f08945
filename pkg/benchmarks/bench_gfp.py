"""Compare the compiled row-reduction kernel against the numpy fallback.

Run:  python3 benchmarks/bench_gfp.py
"""

import time

import numpy as np

from hallq import _gfp_py

try:
    from hallq import _gfp_cy
except ImportError:
    _gfp_cy = None


def bench(backend, name, sizes=(8, 16, 32, 64), p=5, reps=200, seed=7):
    rng = np.random.default_rng(seed)
    print(f"-- {name} --")
    for n in sizes:
        mats = rng.integers(0, p, size=(reps, n, n)).astype(np.int64)
        start = time.perf_counter()
        for m in mats:
            backend.rref_inplace(np.ascontiguousarray(m), p)
        per = (time.perf_counter() - start) / reps
        print(f"  rref {n:3d}x{n:<3d}: {per * 1e6:9.1f} us/matrix")
    batch = rng.integers(0, p, size=(4096, 6, 6)).astype(np.int64)
    start = time.perf_counter()
    backend.batch_rank(batch, p)
    dt = time.perf_counter() - start
    print(f"  batch_rank 4096x6x6: {dt * 1e3:8.2f} ms")


def main():
    bench(_gfp_py, "pure python (numpy)")
    if _gfp_cy is None:
        print("compiled kernel not built; skipping")
    else:
        bench(_gfp_cy, "compiled kernel")


if __name__ == "__main__":
    main()
