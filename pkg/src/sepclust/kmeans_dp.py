"""Exact 1D K-means by dynamic programming, with an optional minimum
separation between adjacent cluster centers.

The solvers operate on contiguous partitions of a sorted sample: clusters are
runs of consecutive order statistics and each center is the barycenter of its
run. ``kmeans_1d`` returns the unconstrained optimum; ``kmeans_1d_sep``
returns the optimum over partitions whose adjacent barycenters are at least
``delta`` apart, or an infeasible result when no such partition exists.

The constrained recursion cannot reuse the plain prefix recursion because the
optimal prefix grouping may change once a separation requirement on the next
cluster appears. It therefore tracks, per (prefix length, cluster count):

* the optimal objective (``cost``),
* the first index of the last cluster in the optimal grouping (``opt_start``),
* the smallest feasible first index of the last cluster (``low_start``),
* and, per (last-cluster start, end), the best objective of the preceding
  prefix conditioned on that last cluster (the conditional prefix table).

Worst case time is O(n^3 k) and transient memory O(n^2); in practice the scan
between ``opt_start`` and ``low_start`` terminates after a few steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit
from numba import types as nb_types
from numba.typed import Dict as NumbaDict

from .prefix_stats import PrefixStats

# Above this size the constrained solver refuses to run without force=True:
# its worst case is cubic in n and the conditional-prefix slices are O(n^2).
MAX_CONSTRAINED_N = 5000

# Conditional prefix costs are collected into a dict only up to this size.
COLLECT_COND_COST_MAX_N = 200

_COND_KEY_TYPE = nb_types.UniTuple(nb_types.int64, 3)
_COND_VALUE_TYPE = nb_types.float64


@dataclass(frozen=True)
class DpTables:
    """Tables produced by the constrained forward pass.

    ``cost[i, m]`` is the optimal objective for grouping the first ``i``
    points into ``m`` clusters under the separation constraint, or
    ``sentinel`` when no feasible grouping exists.  ``opt_start`` and
    ``low_start`` hold the optimal and the smallest feasible first index of
    the last cluster (0 in infeasible cells).  ``cond_cost`` maps
    ``(start, end, m)`` to the best objective of the points before ``start``
    grouped into ``m - 1`` clusters, conditioned on cluster ``m`` spanning
    ``start..end``; it is collected only for small inputs.
    """

    cost: np.ndarray
    opt_start: np.ndarray
    low_start: np.ndarray
    sentinel: float
    delta: float
    n_clusters: int
    cond_cost: Optional[dict]


@dataclass(frozen=True)
class KmeansSolution:
    """A clustering of a sorted sample into contiguous groups.

    ``boundaries[k]`` is the 1-based rank of the first point of cluster
    ``k + 1``; ``labels`` are 1-based cluster ids reported in the original
    input order. Infeasible results carry no payload.
    """

    n_clusters: int
    feasible: bool
    objective: float
    boundaries: Optional[np.ndarray]
    centers: Optional[np.ndarray]
    labels: Optional[np.ndarray]


@njit(cache=True, inline="always")
def _mean_nb(csum, shift, r1, r2):
    return shift + (csum[r2] - csum[r1 - 1]) / (r2 - r1 + 1)


@njit(cache=True, inline="always")
def _ssq_nb(csum, cssq, r1, r2):
    if r1 == r2:
        return 0.0
    m = r2 - r1 + 1
    s = csum[r2] - csum[r1 - 1]
    q = cssq[r2] - cssq[r1 - 1]
    v = q - s * s / m
    return v if v > 0.0 else 0.0


@njit(cache=True)
def _unconstrained_tables(csum, cssq, shift, n, k):
    """Plain prefix recursion; ties prefer the larger last-cluster start."""
    cost = np.full((n + 1, k + 1), np.inf)
    start = np.zeros((n + 1, k + 1), np.int64)
    for i in range(1, n + 1):
        cost[i, 1] = _ssq_nb(csum, cssq, 1, i)
        start[i, 1] = 1
    for m in range(2, k + 1):
        for i in range(m, n + 1):
            best = np.inf
            best_j = 0
            for j in range(i, m - 1, -1):
                v = cost[j - 1, m - 1] + _ssq_nb(csum, cssq, j, i)
                if v < best:
                    best = v
                    best_j = j
            cost[i, m] = best
            start[i, m] = best_j
    return cost, start


@njit(cache=True)
def _constrained_tables(csum, cssq, shift, n, k, delta, collect):
    sentinel = _ssq_nb(csum, cssq, 1, n) + 1.0
    cost = np.full((n + 1, k + 1), sentinel)
    opt_start = np.zeros((n + 1, k + 1), np.int64)
    low_start = np.zeros((n + 1, k + 1), np.int64)
    cond = NumbaDict.empty(_COND_KEY_TYPE, _COND_VALUE_TYPE)

    for i in range(1, n + 1):
        cost[i, 1] = _ssq_nb(csum, cssq, 1, i)
        opt_start[i, 1] = 1
        low_start[i, 1] = 1
    if k == 1:
        return cost, opt_start, low_start, sentinel, cond

    # Rolling slices of the conditional prefix table: u_prev[t, r] is the
    # best objective of grouping the points before t into m - 2 clusters,
    # conditioned on cluster m - 1 spanning t..r. Stage 1 has no preceding
    # cluster, so its slice is zero wherever defined.
    u_prev = np.full((n + 2, n + 2), sentinel)
    u_cur = np.full((n + 2, n + 2), sentinel)
    for t in range(1, n + 1):
        for r in range(t, n + 1):
            u_prev[t, r] = 0.0
            if collect:
                cond[(t, r, 1)] = 0.0

    for m in range(2, k + 1):
        u_cur[:, :] = sentinel
        for i in range(m, n + 1):
            if cost[i - 1, m - 1] >= sentinel:
                # No feasible grouping of any shorter prefix either, since
                # feasibility is monotone in the prefix length.
                continue
            best = sentinel
            best_j = 0
            low_j = 0
            for j in range(m, i + 1):
                if low_start[j - 1, m - 1] == 0:
                    continue
                cji = _mean_nb(csum, shift, j, i)
                val = sentinel
                if cji - _mean_nb(csum, shift, opt_start[j - 1, m - 1], j - 1) >= delta:
                    # The optimal prefix grouping already clears the gap.
                    val = cost[j - 1, m - 1] + _ssq_nb(csum, cssq, j, i)
                    u_cur[j, i] = cost[j - 1, m - 1]
                else:
                    # Walk the previous cluster's start away from the optimum
                    # toward the smallest feasible start; the gap only widens
                    # in that direction. Stop at the first start that clears.
                    for t in range(opt_start[j - 1, m - 1], low_start[j - 1, m - 1] - 1, -1):
                        if cji - _mean_nb(csum, shift, t, j - 1) >= delta:
                            prefix = u_prev[t, j - 1] + _ssq_nb(csum, cssq, t, j - 1)
                            val = prefix + _ssq_nb(csum, cssq, j, i)
                            u_cur[j, i] = prefix
                            break
                if val < best:
                    best = val
                    best_j = j
                if val < sentinel and low_j == 0:
                    low_j = j
                if collect and u_cur[j, i] < sentinel:
                    cond[(j, i, m)] = u_cur[j, i]
            if best < sentinel:
                cost[i, m] = best
                opt_start[i, m] = best_j
                low_start[i, m] = low_j
        u_prev, u_cur = u_cur, u_prev

    return cost, opt_start, low_start, sentinel, cond


def _validate_k(n: int, n_clusters: int) -> None:
    if not 1 <= n_clusters <= n:
        raise ValueError(f"n_clusters must be in [1, {n}], got {n_clusters}")


def build_tables(
    stats: PrefixStats, n_clusters: int, delta: float, force: bool = False
) -> DpTables:
    """Run the constrained forward pass and return its tables."""
    _validate_k(stats.n, n_clusters)
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if stats.n > MAX_CONSTRAINED_N and not force:
        raise ValueError(
            f"n={stats.n} exceeds {MAX_CONSTRAINED_N}; the constrained solver "
            "is O(n^3 k) in the worst case. Pass force=True to run anyway."
        )
    collect = stats.n <= COLLECT_COND_COST_MAX_N
    cost, opt_start, low_start, sentinel, cond = _constrained_tables(
        stats.csum, stats.cssq, stats.shift, stats.n, n_clusters, float(delta), collect
    )
    return DpTables(
        cost=cost,
        opt_start=opt_start,
        low_start=low_start,
        sentinel=sentinel,
        delta=float(delta),
        n_clusters=n_clusters,
        cond_cost=dict(cond) if collect else None,
    )


def backtrack(
    tables: DpTables, stats: PrefixStats, n_clusters: int, delta: float
) -> np.ndarray:
    """Recover the optimal cluster boundaries from constrained tables.

    Boundaries are placed right to left. At each level the candidate starts
    run from the recorded optimum toward the smallest feasible start, and the
    first one whose center clears the gap to the already-fixed cluster on the
    right is taken.
    """
    n = stats.n
    k = n_clusters
    if tables.cost[n, k] >= tables.sentinel:
        raise ValueError("backtrack invoked on infeasible tables")
    bounds = np.zeros(k + 1, dtype=np.int64)
    bounds[k] = tables.opt_start[n, k]
    if k == 1:
        return bounds[1:]
    left_end = bounds[k] - 1
    right_end = n
    for level in range(k - 1, 0, -1):
        right_mean = stats.cluster_mean(left_end + 1, right_end)
        placed = False
        for j in range(tables.opt_start[left_end, level], tables.low_start[left_end, level] - 1, -1):
            if right_mean - stats.cluster_mean(j, left_end) >= delta:
                bounds[level] = j
                placed = True
                break
        if not placed:
            raise RuntimeError(
                "backtracking found no feasible boundary; tables are inconsistent"
            )
        right_end = left_end
        left_end = bounds[level] - 1
    return bounds[1:]


def _cluster_ends(bounds: np.ndarray, n: int) -> np.ndarray:
    return np.append(bounds[1:] - 1, n)


def expand_boundaries(bounds: np.ndarray, n: int) -> np.ndarray:
    """1-based cluster ids for each rank, from 1-based cluster starts."""
    labels = np.empty(n, dtype=np.int64)
    for cid, (s, e) in enumerate(zip(bounds, _cluster_ends(bounds, n)), start=1):
        labels[s - 1 : e] = cid
    return labels


def _solution_from_bounds(
    stats: PrefixStats, n_clusters: int, bounds: np.ndarray
) -> KmeansSolution:
    ends = _cluster_ends(bounds, stats.n)
    centers = np.array(
        [stats.cluster_mean(s, e) for s, e in zip(bounds, ends)]
    )
    objective = 0.0
    for s, e in zip(bounds, ends):
        objective += stats.cluster_ssq(s, e)
    labels = stats.sample.to_input_order(expand_boundaries(bounds, stats.n))
    return KmeansSolution(
        n_clusters=n_clusters,
        feasible=True,
        objective=objective,
        boundaries=bounds,
        centers=centers,
        labels=labels,
    )


def kmeans_1d(stats: PrefixStats, n_clusters: int) -> KmeansSolution:
    """Globally optimal unconstrained 1D K-means on a sorted sample."""
    _validate_k(stats.n, n_clusters)
    cost, start = _unconstrained_tables(
        stats.csum, stats.cssq, stats.shift, stats.n, n_clusters
    )
    bounds = np.zeros(n_clusters + 1, dtype=np.int64)
    i = stats.n
    for m in range(n_clusters, 0, -1):
        bounds[m] = start[i, m]
        i = bounds[m] - 1
    return _solution_from_bounds(stats, n_clusters, bounds[1:])


def kmeans_1d_sep(
    stats: PrefixStats, n_clusters: int, delta: float, force: bool = False
) -> KmeansSolution:
    """Optimal 1D K-means subject to adjacent centers being >= delta apart.

    Returns an infeasible solution (no payload) when no contiguous partition
    satisfies the separation constraint.
    """
    tables = build_tables(stats, n_clusters, delta, force=force)
    if tables.cost[stats.n, n_clusters] >= tables.sentinel:
        return KmeansSolution(
            n_clusters=n_clusters,
            feasible=False,
            objective=np.inf,
            boundaries=None,
            centers=None,
            labels=None,
        )
    bounds = backtrack(tables, stats, n_clusters, tables.delta)
    return _solution_from_bounds(stats, n_clusters, bounds)


def labels_of(solution: KmeansSolution) -> np.ndarray:
    """Cluster ids of a feasible solution, in the original input order."""
    if not solution.feasible:
        raise ValueError("infeasible solution has no labels")
    return solution.labels
