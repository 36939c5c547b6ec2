"""Time the compiled kernels against the numpy fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--level 20] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from haarlab._kernels import _pykernels as py
from haarlab.grid import G6_NODES, G6_WEIGHTS

try:
    from haarlab._kernels import _ckernels as cy
except ImportError:
    cy = None


def cases(level, rng):
    n = 1 << level
    v = rng.standard_normal(n)
    z = v + 1j * rng.standard_normal(n)
    nodes, weights = (np.ascontiguousarray(a, dtype=float) for a in (G6_NODES, G6_WEIGHTS))
    blocks = [(j, 0, np.abs(rng.standard_normal(1 << max(j, 0)))) for j in range(-1, level - 6)]
    return {
        "linear_cell_integrals": lambda k: k.linear_cell_integrals(v, 2.0 ** -level),
        "haar_pyramid": lambda k: k.haar_pyramid(v, level),
        "haar_pyramid (complex)": lambda k: k.haar_pyramid(z, level),
        "second_difference": lambda k: k.second_difference(v, 3),
        "lp_power_linear p=1.5": lambda k: k.lp_power_linear(v, 2.0 ** -level, 1.5, nodes, weights),
        "lp_power_constant p=3": lambda k: k.lp_power_constant(v, 2.0 ** -level, 3.0),
        "tl_integrand q=2": lambda k: k.tl_integrand(blocks, level - 7, 0, 1 << (level - 7), 0.5, 2.0),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--level", type=int, default=20, help="input size 2**level")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"n = 2^{args.level}; best of {args.repeat}")
    print(f"{'kernel':<26}{'python [ms]':>12}{'cython [ms]':>12}{'speedup':>9}")
    for name, fn in cases(args.level, rng).items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:<26}{tp:>12.2f}{'n/a':>12}{'':>9}")
            continue
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<26}{tp:>12.2f}{tc:>12.2f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
