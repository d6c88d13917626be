"""Compare the numba and numpy backends on the hot kernels.

    python benchmarks/bench_kernels.py [N]
"""

import sys
import timeit

import numpy as np

from pisot import _kernels
from pisot.balanced import balanced_prefix_lengths
from pisot.words import Substitution, periodic_point

TRIB1 = Substitution.from_rules({"a": "ab", "b": "ac", "c": "a"})
TRIB2 = Substitution.from_rules({"a": "ba", "b": "ca", "c": "a"})


def best(fn, repeat=5):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(N=1_000_000):
    u = periodic_point(TRIB1).codes(N)
    v = periodic_point(TRIB2).codes(N)
    rng = np.random.default_rng(0)
    rows = rng.integers(0, 800, N)
    cols = rng.integers(0, 800, N)
    labels = rng.integers(0, 3, N)
    colors = np.array([[255, 0, 0], [0, 255, 0], [0, 0, 255]], dtype=np.uint8)
    blank = np.full((800, 800, 3), 255, dtype=np.uint8)

    cases = {
        "prefix_counts": (
            lambda: _kernels.prefix_counts_numpy(u, 3),
            lambda: _kernels.prefix_counts_numba(u, 3),
        ),
        "balanced_positions": (
            lambda: _kernels.balanced_positions_numpy(u, v, 3),
            lambda: _kernels.balanced_positions_numba(u, v, 3),
        ),
        "paint": (
            lambda: _kernels.paint_numpy(blank.copy(), rows, cols, labels, colors),
            lambda: _kernels.paint_numba(blank.copy(), rows, cols, labels, colors),
        ),
    }
    print(f"N = {N}, numba available: {_kernels.HAS_NUMBA}")
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, (np_fn, nb_fn) in cases.items():
        t_np = best(np_fn) * 1e3
        if _kernels.HAS_NUMBA:
            nb_fn()  # compile / load cache
            t_nb = best(nb_fn) * 1e3
            print(f"{name:<20}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<20}{t_np:>12.2f}{'-':>12}{'-':>10}")
    t = best(lambda: balanced_prefix_lengths(TRIB1, TRIB2, N), repeat=3) * 1e3
    print(f"end-to-end balanced_prefix_lengths ({_kernels.BACKEND}): {t:.1f} ms")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000)
