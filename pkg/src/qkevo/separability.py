"""Data-separability indexes: SI, HMI and the KS/distance-based DSI.

All indexes use Euclidean distances.  SI and DSI are computed on the
coordinates they are given; HMI first rescales every feature to [0, 1]
(so it is invariant under per-feature affine changes of units).  The
:func:`compute_indexes` helper applies the same [0, 1] scaling before all
three, which is the convention used by the command-line reports.
"""
from __future__ import annotations

import numpy as np


def _scale01(X: np.ndarray) -> np.ndarray:
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    span = np.where(span > 0, span, 1.0)  # constant features collapse to 0
    return (X - lo) / span


def _pairwise_distances(X: np.ndarray) -> np.ndarray:
    sq = np.sum(X ** 2, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (X @ X.T), 0.0)
    return np.sqrt(d2)


def _as_labeled(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be 2-D with one label per row")
    return X, y


def separability_index(X, y) -> float:
    """Fraction of instances whose nearest neighbour shares their label.

    Self is excluded; distance ties resolve to the lowest index.
    """
    X, y = _as_labeled(X, y)
    if X.shape[0] < 2:
        raise ValueError("separability index needs at least 2 instances")
    dist = _pairwise_distances(X)
    np.fill_diagonal(dist, np.inf)
    nearest = dist.argmin(axis=1)
    return float(np.mean(y[nearest] == y))


def hypothesis_margin_index(X, y, mode: str = "sum") -> float:
    """Aggregate hypothesis margin 1/2 * (|x - nearmiss| - |x - nearhit|).

    Features are min-max scaled to [0, 1] first.  ``mode`` selects the
    aggregation: "sum" (default) or "mean" over instances.
    """
    if mode not in ("sum", "mean"):
        raise ValueError(f"mode must be 'sum' or 'mean', got {mode!r}")
    X, y = _as_labeled(X, y)
    classes, counts = np.unique(y, return_counts=True)
    if classes.size < 2:
        raise ValueError("hypothesis margin needs at least 2 classes")
    if counts.min() < 2:
        raise ValueError("every class needs at least 2 members for a near-hit")
    dist = _pairwise_distances(_scale01(X))
    np.fill_diagonal(dist, np.inf)
    same = y[:, None] == y[None, :]
    near_hit = np.where(same, dist, np.inf).min(axis=1)
    near_miss = np.where(same, np.inf, dist).min(axis=1)
    theta = 0.5 * (near_miss - near_hit)
    return float(theta.sum() if mode == "sum" else theta.mean())


def ks_statistic(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov distance, exact via the merged sweep."""
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("KS statistic needs two non-empty samples")
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / a.size
    cdf_b = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def _intra_distances(points: np.ndarray) -> np.ndarray:
    dist = _pairwise_distances(points)
    iu = np.triu_indices(points.shape[0], k=1)
    return dist[iu]


def _cross_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    sq_a = np.sum(a ** 2, axis=1)[:, None]
    sq_b = np.sum(b ** 2, axis=1)[None, :]
    d2 = np.maximum(sq_a + sq_b - 2.0 * (a @ b.T), 0.0)
    return np.sqrt(d2).ravel()


def dsi_two_class(x_points, y_points) -> float:
    """Mean KS distance between each class's intra-class distance set and
    the between-class distance set."""
    x_points = np.atleast_2d(np.asarray(x_points, dtype=float))
    y_points = np.atleast_2d(np.asarray(y_points, dtype=float))
    if x_points.shape[0] < 2 or y_points.shape[0] < 2:
        raise ValueError("each class needs at least 2 points")
    bcd = _cross_distances(x_points, y_points)
    s_x = ks_statistic(_intra_distances(x_points), bcd)
    s_y = ks_statistic(_intra_distances(y_points), bcd)
    return 0.5 * (s_x + s_y)


def dsi(X, y) -> float:
    """Multiclass distance-based separability: mean of the one-vs-rest
    two-class values over the classes."""
    X, y = _as_labeled(X, y)
    classes = np.unique(y)
    if classes.size < 2:
        raise ValueError("DSI needs at least 2 classes")
    values = [dsi_two_class(X[y == c], X[y != c]) for c in classes]
    return float(np.mean(values))


def compute_indexes(X, y, hmi_mode: str = "sum") -> tuple[float, float, float]:
    """(SI, HMI, DSI) on features min-max scaled to [0, 1]."""
    X, y = _as_labeled(X, y)
    scaled = _scale01(X)
    return (separability_index(scaled, y),
            hypothesis_margin_index(scaled, y, mode=hmi_mode),
            dsi(scaled, y))
