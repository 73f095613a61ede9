"""Sorted samples and O(1) interval statistics.

All interval queries use 1-based inclusive endpoints (r1, r2), matching the
convention for order statistics of a sorted sample: the interval (r1, r2)
covers the r1-th through r2-th smallest observations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SortedSample:
    """A validated, nondecreasing vector of real observations.

    Unsorted input is accepted and sorted internally; the sort permutation is
    retained so per-point results (labels) can be mapped back to the original
    input order.

    Attributes
    ----------
    values : ndarray
        Observations in nondecreasing order.
    order : ndarray
        Permutation such that ``values == original[order]``.
    """

    values: np.ndarray
    order: np.ndarray

    @classmethod
    def from_values(cls, values) -> "SortedSample":
        x = np.asarray(values, dtype=np.float64).ravel()
        if x.size < 1:
            raise ValueError("sample must contain at least one observation")
        if not np.all(np.isfinite(x)):
            raise ValueError("sample contains non-finite values")
        order = np.argsort(x, kind="stable")
        return cls(values=x[order], order=order)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def to_input_order(self, per_point: np.ndarray) -> np.ndarray:
        """Map a per-point vector from sorted order back to input order."""
        per_point = np.asarray(per_point)
        out = np.empty_like(per_point)
        out[self.order] = per_point
        return out


@dataclass(frozen=True)
class PrefixStats:
    """Prefix sums of a sorted sample, centered at the grand mean.

    Centering keeps interval sums of squares accurate for data with a large
    offset, where raw sum-of-squares prefixes cancel catastrophically.
    Construction is O(n); ``cluster_mean`` and ``cluster_ssq`` are O(1).
    Immutable after construction, so instances may be shared freely.
    """

    sample: SortedSample
    shift: float
    csum: np.ndarray  # csum[i] = sum_{l<=i} (x_l - shift), csum[0] = 0
    cssq: np.ndarray  # cssq[i] = sum_{l<=i} (x_l - shift)^2

    @classmethod
    def build(cls, sample: SortedSample) -> "PrefixStats":
        x = sample.values
        shift = float(np.mean(x))
        d = x - shift
        csum = np.concatenate(([0.0], np.cumsum(d)))
        cssq = np.concatenate(([0.0], np.cumsum(d * d)))
        return cls(sample=sample, shift=shift, csum=csum, cssq=cssq)

    @property
    def values(self) -> np.ndarray:
        return self.sample.values

    @property
    def n(self) -> int:
        return self.sample.n

    def _check(self, r1: int, r2: int) -> None:
        if not (1 <= r1 <= r2 <= self.n):
            raise IndexError(f"interval ({r1}, {r2}) out of range for n={self.n}")

    def cluster_mean(self, r1: int, r2: int) -> float:
        """Mean of the observations with ranks r1..r2 (1-based, inclusive)."""
        self._check(r1, r2)
        m = r2 - r1 + 1
        return self.shift + (self.csum[r2] - self.csum[r1 - 1]) / m

    def cluster_ssq(self, r1: int, r2: int) -> float:
        """Sum of squared deviations from the interval mean over ranks r1..r2.

        Unnormalized: singletons give exactly 0, and the value is additive in
        the sense that splitting an interval never increases the total.
        """
        self._check(r1, r2)
        if r1 == r2:
            return 0.0
        m = r2 - r1 + 1
        s = self.csum[r2] - self.csum[r1 - 1]
        q = self.cssq[r2] - self.cssq[r1 - 1]
        return max(q - s * s / m, 0.0)
