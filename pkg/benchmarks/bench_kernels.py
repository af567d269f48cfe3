"""Compare the numba and numpy backends of the graph kernels.

Graphs are "hairy cycles": a sparse random core plus pendant trees, which is
what peeling sees on pullbacks of large products.  ``bushy`` trees attach each
vertex to a random earlier one (shallow, a few numpy rounds); ``chains`` hang
long paths (one numpy round per layer, the vectorized worst case).

    python3 benchmarks/bench_kernels.py --sizes 1000 10000 100000 --repeat 5
"""

import argparse
import time

import numpy as np

from freeprod import _kernels


def hairy_graph(n: int, seed: int = 0, shape: str = "bushy"):
    rng = np.random.default_rng(seed)
    core = max(n // 10, 2)
    # random 3-regular-ish core on the first `core` vertices
    cu = rng.integers(0, core, size=core * 3 // 2)
    cv = rng.integers(0, core, size=core * 3 // 2)
    # pendant trees hanging off earlier vertices
    if shape == "bushy":
        tu = np.array([rng.integers(0, v) for v in range(core, n)], dtype=np.int64)
    else:
        # chains of length ~sqrt(n) starting at random core vertices
        length = max(int(np.sqrt(n)), 1)
        tu = np.array(
            [v - 1 if (v - core) % length else rng.integers(0, core) for v in range(core, n)],
            dtype=np.int64,
        )
    tv = np.arange(core, n, dtype=np.int64)
    return n, np.concatenate([cu, tu]), np.concatenate([cv, tv])


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _kernels.njit is None:
        print("numba unavailable (or FREEPROD_NUMBA=0): only the numpy backend is timed")
        backends = ["numpy"]
    else:
        backends = ["numba", "numpy"]
        # compile outside the timings
        n, eu, ev = hairy_graph(50)
        _kernels.peel(n, eu, ev, backend="numba")
        _kernels.components(n, eu, ev, backend="numba")

    print(f"{'shape':>7} {'vertices':>10} {'kernel':>11} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for shape, size in [(s, n) for s in ("bushy", "chains") for n in args.sizes]:
        n, eu, ev = hairy_graph(size, shape=shape)
        results = {}
        for kernel in ("peel", "components"):
            fn = getattr(_kernels, kernel)
            outs = {b: fn(n, eu, ev, backend=b) for b in backends}
            ref = outs[backends[0]]
            for b in backends[1:]:
                same = all(np.array_equal(x, y) for x, y in zip(ref, outs[b])) if kernel == "peel" \
                    else np.array_equal(ref, outs[b])
                assert same, f"{kernel}: backends disagree on {shape} n={n}"
            results[kernel] = {b: best_of(lambda b=b: fn(n, eu, ev, backend=b), args.repeat) for b in backends}
            row = " ".join(f"{results[kernel][b] * 1e3:>8.2f}ms" for b in backends)
            speed = f"{results[kernel]['numpy'] / results[kernel]['numba']:8.1f}x" if len(backends) == 2 else ""
            print(f"{shape:>7} {n:>10} {kernel:>11} {row} {speed}")


if __name__ == "__main__":
    main()
