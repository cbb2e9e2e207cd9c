"""Compare the numba and numpy kernel paths.

    python benchmarks/bench_kernels.py [--depth 8] [--repeat 3]

Each path is timed on the same inputs: one full orbit expansion of the
genus-two example and one 400x400 rasterization of the resulting cloud.  The
numba path is warmed up first so compilation is not counted.
"""
import argparse
import os
import time

import numpy as np

from mdcschottky.assembly import ejemplo1_generators
from mdcschottky.limitset import kernels, orbit_cloud, render


def _generators():
    K = ejemplo1_generators()
    A, B, F = K["A"], K["B"], K["F"]
    return [A, B, F @ A @ F, F @ B @ F]


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def _level_inputs(gens, depth):
    """Frontier arrays one level below depth, to time expand_level on its own."""
    cloud = orbit_cloud(gens, depth - 1)
    pts = cloud.finite()
    n = len(pts)
    rng = np.random.default_rng(0)
    last = rng.integers(0, 2 * len(gens), n)
    mats = kernels.pack_matrices([tuple(complex(x) for x in g.to_float().entries) for h in gens for g in (h, h.inverse())])
    inv = np.array([i ^ 1 for i in range(2 * len(gens))])
    return pts.real.copy(), pts.imag.copy(), np.zeros(n, dtype=bool), last, mats, inv, cloud


def bench(depth=8, repeat=3):
    gens = _generators()
    xr, xi, inf, last, mats, inv, cloud = _level_inputs(gens, depth)
    view = (-0.6, -0.6, 0.6, 0.6)
    results = {}
    for label, flag in (("numba", "0"), ("numpy", "1")):
        os.environ["MDC_NO_NUMBA"] = flag
        kernels.expand_level(xr[:10], xi[:10], inf[:10], last[:10], mats, inv)
        kernels.rasterize(xr[:10], xi[:10], view, 8, 8)
        t_expand, out = _best(lambda: kernels.expand_level(xr, xi, inf, last, mats, inv), repeat)
        t_raster, img = _best(lambda: kernels.rasterize(xr, xi, view, 400, 400), repeat)
        t_cloud, full = _best(lambda: orbit_cloud(gens, depth), 1)
        results[label] = {
            "expand_level": t_expand,
            "rasterize": t_raster,
            "orbit_cloud": t_cloud,
            "sha": render(full, view, 400, 400).sha256(),
            "out": out,
            "img": img,
        }
    os.environ.pop("MDC_NO_NUMBA", None)
    a, b = results["numba"], results["numpy"]
    same = all(np.array_equal(x, y) for x, y in zip(a["out"], b["out"])) and np.array_equal(a["img"], b["img"]) and a["sha"] == b["sha"]
    return len(xr), results, same


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    n, results, same = bench(args.depth, args.repeat)
    print(f"frontier of {n} points, depth {args.depth}")
    print(f"{'stage':<14}{'numba (s)':>12}{'numpy (s)':>12}{'ratio':>8}")
    for stage in ("expand_level", "rasterize", "orbit_cloud"):
        x, y = results["numba"][stage], results["numpy"][stage]
        print(f"{stage:<14}{x:>12.4f}{y:>12.4f}{y / x:>8.2f}")
    print("outputs identical:", same)


if __name__ == "__main__":
    main()
