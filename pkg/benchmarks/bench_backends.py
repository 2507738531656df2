"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_backends.py [--size 256] [--repeat 3]

Each row reports the best of ``--repeat`` runs per backend, after one
untimed call so JIT compilation is excluded.
"""
import argparse
import time

import numpy as np

from mcsf import (
    FIR,
    RECURSIVE,
    ConvolutionEngine,
    Image,
    McsfParams,
    SpatialKernel,
    diagonalize,
    direct_bilateral,
    mcsf_filter,
    use_backend,
)
from mcsf._backend import HAVE_NUMBA


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--trials", type=int, default=50)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n = args.size
    img = Image(rng.uniform(0, 255, size=(3, n, n)))
    planes = rng.uniform(0, 255, size=(8, n, n))
    cov = diagonalize(np.eye(3) * 80.0**2)
    k = SpatialKernel.gaussian(5.0)
    fir = ConvolutionEngine(FIR, k)
    rec = ConvolutionEngine(RECURSIVE, k)
    params = McsfParams.from_cov(cov, 10, args.trials, 0)
    small = Image(img.data[:, : n // 4, : n // 4])

    cases = [
        ("fir, 8 planes, sigma 5", lambda: fir.apply(planes)),
        ("recursive, 8 planes, sigma 5", lambda: rec.apply(planes)),
        (f"mcsf recursive, T={args.trials}", lambda: mcsf_filter(img, k, cov, params, engine=rec)),
        (f"direct, {n // 4}x{n // 4}, sigma 5", lambda: direct_bilateral(small, k, cov)),
    ]
    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    print(f"{n}x{n}, best of {args.repeat}")
    print(f"{'case':34s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in cases:
        row = []
        for b in backends:
            with use_backend(b):
                row.append(best_of(fn, args.repeat))
        line = f"{name:34s}" + "".join(f"{t * 1e3:10.1f}ms" for t in row)
        if len(row) == 2:
            line += f"{row[1] / row[0]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
