"""Compare the compiled sweep kernel against the pure-Python fallback.

Runs the same repairs through both backends on synthetic datasets of growing
size and prints a table of wall times plus the speedup. Usage:

    python benchmarks/compare_backends.py [--sizes 1000,10000,100000] [--repairs 5]
"""

import argparse
import random
import time
from fractions import Fraction

from fairselect.backend import HAVE_COMPILED
from fairselect.model import FairnessSpec
from fairselect.oracle import gen_random_instance
from fairselect.runner import sample_simplex_grid, spec_for_k, BenchConfig
from fairselect.sweep2d import find_fair_2d


def time_backend(ds, spec, windows, backend):
    start = time.perf_counter()
    verdicts = []
    for lb, ub in windows:
        out = find_fair_2d(ds, spec, lb, ub, backend=backend)
        verdicts.append((out.status, out.t))
    return time.perf_counter() - start, verdicts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repairs", type=int, default=5)
    ap.add_argument("--k", type=int, default=50)
    ap.add_argument("--eps", default="0.1")
    args = ap.parse_args()

    if not HAVE_COMPILED:
        print("compiled backend not built; nothing to compare")
        return

    eps = Fraction(args.eps)
    print(f"{'n':>8} {'k':>4} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        k = min(args.k, n - 1)
        ds = gen_random_instance(seed=5, n=n, d=2, grid="0.001", p_g1=0.5)
        spec = spec_for_k(BenchConfig((k,), (args.eps,), ("sweep2d",)), k)
        rng = random.Random(17)
        windows = []
        for _ in range(args.repairs):
            w0 = sample_simplex_grid(rng, 2, ds.grid_decimals)
            c = w0.as_fractions()[0]
            windows.append((max(Fraction(0), c - eps), min(Fraction(1), c + eps)))
        t_pure, v_pure = time_backend(ds, spec, windows, "pure")
        t_fast, v_fast = time_backend(ds, spec, windows, "compiled")
        assert v_pure == v_fast, "backends disagree"
        print(f"{n:>8} {k:>4} {t_pure:>10.3f} {t_fast:>13.3f} {t_pure / t_fast:>8.1f}x")


if __name__ == "__main__":
    main()
