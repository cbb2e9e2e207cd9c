"""Limit-set sampling, rendering and the gap diagnostic."""
from .cloud import DEDUP_EPS, DEFAULT_CAP, OrbitCloud, orbit_cloud, seed_points, word_count_bound
from .gap import gap_statistic, gap_statistic_bruteforce, nearest_gaps
from .kernels import backend_name, use_numba
from .render import RasterImage, Viewport, render

__all__ = [
    "DEDUP_EPS",
    "DEFAULT_CAP",
    "OrbitCloud",
    "orbit_cloud",
    "seed_points",
    "word_count_bound",
    "gap_statistic",
    "gap_statistic_bruteforce",
    "nearest_gaps",
    "backend_name",
    "use_numba",
    "RasterImage",
    "Viewport",
    "render",
]
