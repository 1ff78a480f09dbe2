"""Time the compiled kernels against the numpy fallback.

The Orlicz kernels win on the small laws the package works with; on thousands
of atoms numpy's vectorized passes overtake the scalar loop.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

import argparse
import timeit

import numpy as np

from tangentri import _pykernels as py

try:
    from tangentri import _ckernels as cy
except ImportError:  # extension not built
    cy = None


def cases(depth):
    rng = np.random.default_rng(0)
    tables = [rng.integers(-3, 4, size=1 << k).astype(float) for k in range(1, depth + 1)]
    flat = np.concatenate(tables)
    off = np.concatenate([[0], np.cumsum([t.size for t in tables])]).astype(np.int64)
    small = rng.standard_normal(16)
    ps = np.full(small.size, 1.0 / small.size)
    v = rng.standard_normal(4096)
    p = np.full(v.size, 1.0 / v.size)
    c = np.array([1.0, 3.0])
    k = np.array([0, 1], dtype=np.int64)
    a = np.array([2.0, 0.5])
    return {
        f"path_stats(depth={depth + 8})": lambda m: m.path_stats(
            *_deep(rng, depth + 8), depth + 8),
        f"pair_stats(depth={depth})": lambda m: m.pair_stats(flat, off, depth),
        "expect_terms(16 atoms)": lambda m: m.expect_terms(small, ps, c, k, a, 1.3),
        "orlicz_bisect(16 atoms)": lambda m: m.orlicz_bisect(small, ps, c, k, a, 1e-3, 1e3, 1e-10, 200),
        "expect_terms(4096 atoms)": lambda m: m.expect_terms(v, p, c, k, a, 1.3),
        "orlicz_bisect(4096 atoms)": lambda m: m.orlicz_bisect(v, p, c, k, a, 1e-3, 1e3, 1e-10, 200),
    }


_cache = {}


def _deep(rng, depth):
    if depth not in _cache:
        tables = [rng.integers(-3, 4, size=1 << k).astype(float) for k in range(1, depth + 1)]
        off = np.concatenate([[0], np.cumsum([t.size for t in tables])]).astype(np.int64)
        _cache[depth] = (np.concatenate(tables), off)
    return _cache[depth]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--depth", type=int, default=8)
    args = ap.parse_args()
    print(f"{'kernel':32s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in cases(args.depth).items():
        fn(py)
        tp = min(timeit.repeat(lambda: fn(py), number=20, repeat=args.repeat)) / 20 * 1e3
        if cy is None:
            print(f"{name:32s} {tp:10.3f} {'n/a':>10s} {'n/a':>8s}")
            continue
        fn(cy)
        tc = min(timeit.repeat(lambda: fn(cy), number=20, repeat=args.repeat)) / 20 * 1e3
        print(f"{name:32s} {tp:10.3f} {tc:10.3f} {tp / tc:8.2f}")


if __name__ == "__main__":
    main()
