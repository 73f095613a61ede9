"""Independent brute-force references used by the test suite.

Everything here is deliberately naive (enumeration, two-pass summation,
direct pair counting) and shares no code with the package internals.
"""

from itertools import combinations

import numpy as np


def two_pass_ssq(seg):
    seg = np.asarray(seg, dtype=float)
    mu = seg.sum() / seg.size
    return float(((seg - mu) ** 2).sum())


def contiguous_partitions(n, k):
    """All 1-based start tuples of contiguous partitions of n points."""
    for cuts in combinations(range(2, n + 1), k - 1):
        yield (1,) + cuts


def brute_force_kmeans(x, k, delta=0.0, normalized=False):
    """Exhaustive search over contiguous partitions with barycenter centers.

    Returns (objective, starts) of the best partition whose adjacent center
    gaps are all >= delta, or None when no partition is feasible.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    best = None
    for starts in contiguous_partitions(n, k):
        ends = list(starts[1:]) + [n + 1]
        means = []
        total = 0.0
        for s, e in zip(starts, ends):
            seg = x[s - 1 : e - 1]
            means.append(seg.sum() / seg.size)
            ssq = two_pass_ssq(seg)
            total += ssq / seg.size if normalized else ssq
        if all(means[i + 1] - means[i] >= delta for i in range(k - 1)):
            if best is None or total < best[0]:
                best = (total, starts)
    return best


def brute_force_rand_index(a, b):
    """Pair-by-pair agreement count between two labelings."""
    a = np.asarray(a)
    b = np.asarray(b)
    n = a.size
    agree = 0
    pairs = 0
    for i in range(n):
        for j in range(i + 1, n):
            pairs += 1
            if (a[i] == a[j]) == (b[i] == b[j]):
                agree += 1
    return agree / pairs
