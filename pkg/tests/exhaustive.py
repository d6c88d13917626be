"""Exhaustive sweep: greedy balanced cuts vs. brute-force minimal-block decompositions.

Every pair (top, bottom) of words of length n over d letters with equal
letter counts is visited. The greedy side is the shipped kernel; the oracle
counts *all* ways to cut the pair into pieces that satisfy the minimal
balanced block definition, and must find exactly one, equal to the greedy cuts.
"""

import numpy as np
from numba import njit

from pisot._kernels import _balanced_positions_jit


@njit(cache=True)
def _next_permutation(a):
    n = a.shape[0]
    i = n - 2
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while a[j] <= a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    a[i + 1:] = a[i + 1:][::-1]
    return True


@njit(cache=True)
def oracle_decompositions(top, bot, d, P, ways, nxt):
    """Number of decompositions into minimal balanced pieces; nxt holds one of them."""
    n = top.shape[0]
    for c in range(d):
        P[0, c] = 0
    for k in range(n):
        for c in range(d):
            P[k + 1, c] = P[k, c]
        P[k + 1, top[k]] += 1
        P[k + 1, bot[k]] -= 1
    ways[n] = 1
    for i in range(n - 1, -1, -1):
        total = 0
        seen_interior = False
        nxt[i] = -1
        for j in range(i + 1, n + 1):
            same = True
            for c in range(d):
                if P[j, c] != P[i, c]:
                    same = False
                    break
            if same:
                # piece [i, j) is balanced; minimal iff no balanced strict prefix
                if not seen_interior:
                    total += ways[j]
                    if ways[j] > 0:
                        nxt[i] = j
                seen_interior = True
        ways[i] = total
    return ways[0]


@njit(cache=True)
def sweep(n, d):
    """Returns (pairs checked, mismatches) over all balanced pairs of length n."""
    comp = np.zeros(d, np.int64)
    P = np.zeros((n + 1, d), np.int64)
    ways = np.zeros(n + 1, np.int64)
    nxt = np.zeros(n + 1, np.int64)
    pairs = 0
    bad = 0
    total = 1
    for _ in range(d):
        total *= n + 1
    for code in range(total):
        s = 0
        x = code
        for c in range(d):
            comp[c] = x % (n + 1)
            x //= n + 1
            s += comp[c]
        if s != n:
            continue
        base = np.empty(n, np.int64)
        p = 0
        for c in range(d):
            for _ in range(comp[c]):
                base[p] = c
                p += 1
        top = base.copy()
        while True:
            bot = base.copy()
            while True:
                pairs += 1
                greedy = _balanced_positions_jit(top, bot, d, -1)
                if oracle_decompositions(top, bot, d, P, ways, nxt) != 1:
                    bad += 1
                else:
                    # walk the unique decomposition and compare with greedy cuts 1..
                    i = 0
                    q = 1
                    ok = True
                    while i < n:
                        i = nxt[i]
                        if q >= greedy.shape[0] or greedy[q] != i:
                            ok = False
                            break
                        q += 1
                    if not ok or q != greedy.shape[0]:
                        bad += 1
                if not _next_permutation(bot):
                    break
            if not _next_permutation(top):
                break
    return pairs, bad


if __name__ == "__main__":
    import sys
    import time

    max_len = int(sys.argv[1]) if len(sys.argv) > 1 else 12
    for d in (2, 3):
        for n in range(1, max_len + 1):
            t0 = time.perf_counter()
            pairs, bad = sweep(n, d)
            print(f"d={d} n={n} pairs={pairs} mismatches={bad} {time.perf_counter() - t0:.1f}s", flush=True)
