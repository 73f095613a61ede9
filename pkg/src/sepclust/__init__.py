"""Separation-constrained 1D clustering: exact K-means and Gaussian mixtures."""

from .prefix_stats import PrefixStats, SortedSample
from .kmeans_dp import (
    DpTables,
    KmeansSolution,
    backtrack,
    build_tables,
    kmeans_1d,
    kmeans_1d_sep,
    labels_of,
)

__all__ = [
    "PrefixStats",
    "SortedSample",
    "DpTables",
    "KmeansSolution",
    "backtrack",
    "build_tables",
    "kmeans_1d",
    "kmeans_1d_sep",
    "labels_of",
]

__version__ = "0.1.0"
