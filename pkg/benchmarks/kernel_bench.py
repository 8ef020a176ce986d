#!/usr/bin/env python3
"""Compare the compiled kernel against the numpy fallback on the hot ops.

Run after building the extension (pip install -e . or
python setup.py build_ext --inplace):

    python benchmarks/kernel_bench.py
"""
from __future__ import annotations

import math
import time

import numpy as np

from cgascene.kernel import pure

try:
    from cgascene.kernel import _core as ext
except ImportError:
    ext = None


def bench(fn, args_stream, seconds=0.5):
    # warmup
    for args in args_stream[:100]:
        fn(*args)
    n = 0
    started = time.perf_counter()
    deadline = started + seconds
    while time.perf_counter() < deadline:
        for args in args_stream:
            fn(*args)
        n += len(args_stream)
    elapsed = time.perf_counter() - started
    return n / elapsed


def sandwich_points(backend, motors, points):
    """End-to-end motor sandwich via a given kernel backend."""
    rev = backend.reverse
    gp = backend.gp
    out = []
    for m, p in zip(motors, points):
        out.append(gp(gp(m, p), rev(m)))
    return out


def main() -> None:
    rng = np.random.default_rng(0)
    pairs = [(rng.uniform(-2, 2, 32), rng.uniform(-2, 2, 32)) for _ in range(512)]
    singles = [(a,) for a, _ in pairs]

    backends = [("pure (numpy)", pure)]
    if ext is not None:
        backends.append(("ext (compiled)", ext))
    else:
        print("compiled kernel not built; showing fallback only")

    results = {}
    for name, backend in backends:
        gp_rate = bench(backend.gp, pairs)
        outer_rate = bench(backend.outer, pairs)
        rev_rate = bench(backend.reverse, singles)
        results[name] = (gp_rate, outer_rate, rev_rate)
        print(f"{name:>16}: gp {gp_rate:>10.0f}/s  outer {outer_rate:>10.0f}/s  "
              f"reverse {rev_rate:>10.0f}/s")

    if ext is not None:
        dense_motors = [rng.uniform(-1, 1, 32) for _ in range(256)]
        dense_points = [rng.uniform(-1, 1, 32) for _ in range(256)]
        for name, backend in backends:
            started = time.perf_counter()
            for _ in range(50):
                sandwich_points(backend, dense_motors, dense_points)
            elapsed = time.perf_counter() - started
            print(f"{name:>16}: sandwich chain  {50 * 256 / elapsed:>10.0f} points/s")
        speedup = results["ext (compiled)"][0] / results["pure (numpy)"][0]
        print(f"geometric-product speedup (ext vs pure): {speedup:.2f}x")

        # Backends must agree bit-for-bit up to accumulation order.
        worst = 0.0
        for a, b in pairs[:64]:
            worst = max(worst, float(np.max(np.abs(ext.gp(a, b) - pure.gp(a, b)))))
        print(f"max |ext - pure| over 64 products: {worst:.3e}")
        assert worst < 1e-12


if __name__ == "__main__":
    main()
