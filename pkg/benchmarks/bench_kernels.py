"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each hot kernel on a ladder of front sizes and reports per-call times
for both backends side by side. The pure backend is loaded by importing the
fallback module directly, so no reinstall or environment flag is needed.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import importlib
import sys
import time

import numpy as np

from mopls import _kernels_py


def load_backends():
    backends = {"python": _kernels_py}
    try:
        backends["compiled"] = importlib.import_module("mopls._kernels")
    except ImportError:
        print("compiled extension not available; benchmarking fallback only")
    return backends


def timeit(fn, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(repeat: int) -> None:
    rng = np.random.default_rng(0)
    backends = load_backends()
    ref = np.array([1.5, 1.5])

    cases = []
    for n in (100, 1_000, 10_000):
        Y = rng.random((n, 2))
        cases.append((f"nondominated_mask n={n:>6}", {
            name: (lambda mod=mod, Y=Y: mod.nondominated_mask(Y))
            for name, mod in backends.items()
        }))
    for n in (100, 1_000, 10_000):
        Y = rng.random((n, 2))
        cases.append((f"hv2d              n={n:>6}", {
            name: (lambda mod=mod, Y=Y: mod.hv2d(Y, ref))
            for name, mod in backends.items()
        }))
    front = rng.random((64, 2))
    front = front[_kernels_py.nondominated_mask(front)]
    for n in (1_000, 4_000, 16_000):
        C = rng.random((n, 2)) * 1.2
        cases.append((f"hv2d_improvements m={n:>6}", {
            name: (lambda mod=mod, C=C: mod.hv2d_improvements(front, ref, C))
            for name, mod in backends.items()
        }))

    names = list(backends)
    header = f"{'kernel':<28}" + "".join(f"{n:>14}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, fns in cases:
        times = [timeit(fns[n], repeat) for n in names]
        row = f"{label:<28}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="best-of repetitions")
    args = parser.parse_args(argv)
    bench(args.repeat)
    return 0


if __name__ == "__main__":
    sys.exit(main())
