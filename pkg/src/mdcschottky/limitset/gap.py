"""Separation diagnostic for sampled limit sets."""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from ..errors import TooFewPoints


def _finite_unique(cloud) -> np.ndarray:
    pts = cloud.finite() if hasattr(cloud, "finite") else np.asarray(cloud, dtype=np.complex128)
    pts = np.unique(np.asarray(pts, dtype=np.complex128))
    if len(pts) < 2:
        raise TooFewPoints(f"need at least two distinct finite points, got {len(pts)}")
    return pts


def nearest_gaps(cloud) -> np.ndarray:
    pts = _finite_unique(cloud)
    xy = np.column_stack([pts.real, pts.imag])
    dist, _ = cKDTree(xy).query(xy, k=2)
    return dist[:, 1]


def gap_statistic(cloud) -> float:
    """Largest distance from a point to its nearest distinct neighbour."""
    return float(nearest_gaps(cloud).max())


def gap_statistic_bruteforce(cloud) -> float:
    pts = _finite_unique(cloud)
    d = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min(axis=1).max())
