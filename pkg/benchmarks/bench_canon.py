"""Benchmark: compiled vs pure-Python canonical labeling kernel.

Times ``canonical_order`` on random transitively closed labelled strict
orders of growing size and reports per-call timings plus the speedup.
Results are also cross-checked for agreement on every sampled input.

Usage::

    python benchmarks/bench_canon.py [--sizes 4,6,8,10,12] [--repeat 200]
"""

import argparse
import random
import statistics
import time

from pomcheck import _canon_py

try:
    from pomcheck import _canon_cy
except ImportError:
    _canon_cy = None


def random_input(rng, n, n_labels=2, edge_prob=0.3):
    """(labels, above) for a random transitively closed strict order."""
    perm = list(range(n))
    rng.shuffle(perm)
    above = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                above[perm[i]] |= 1 << perm[j]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            m, extra, j = above[i], 0, 0
            while m:
                if m & 1:
                    extra |= above[j]
                m >>= 1
                j += 1
            if extra & ~above[i]:
                above[i] |= extra
                changed = True
    labels = tuple(rng.randrange(n_labels) for _ in range(n))
    return labels, tuple(above)


def bench(kernel, inputs):
    times = []
    for labels, above in inputs:
        t0 = time.perf_counter()
        kernel.canonical_order(labels, above)
        times.append(time.perf_counter() - t0)
    return times


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,6,8,10,12",
                    help="comma-separated event counts")
    ap.add_argument("--repeat", type=int, default=200,
                    help="inputs per size")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _canon_cy is None:
        print("compiled kernel not available; nothing to compare")
        return

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = random.Random(args.seed)
    print(f"{'n':>4} {'python (us)':>14} {'cython (us)':>14} {'speedup':>9}")
    for n in sizes:
        inputs = [random_input(rng, n) for _ in range(args.repeat)]
        for labels, above in inputs:
            got_py = _canon_py.canonical_order(labels, above)
            got_cy = _canon_cy.canonical_order(labels, above)
            if got_py != got_cy:
                raise SystemExit(f"backend disagreement on n={n}: "
                                 f"{got_py} vs {got_cy}")
        t_py = statistics.median(bench(_canon_py, inputs)) * 1e6
        t_cy = statistics.median(bench(_canon_cy, inputs)) * 1e6
        print(f"{n:>4} {t_py:>14.1f} {t_cy:>14.1f} {t_py / t_cy:>8.2f}x")


if __name__ == "__main__":
    main()
