import hashlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdcschottky.assembly import ejemplo1_generators
from mdcschottky.errors import BadViewport, DepthOverflow, EmptyGenerators, TooFewPoints
from mdcschottky.limitset import (
    Viewport,
    gap_statistic,
    gap_statistic_bruteforce,
    orbit_cloud,
    render,
    seed_points,
    word_count_bound,
)
from mdcschottky.limitset import kernels
from mdcschottky.moebius import INFINITY, MoebiusMap
from mdcschottky.numerics import ONE, TAU6, ZERO

K = ejemplo1_generators()
A, B, F = K["A"], K["B"], K["F"]
G = [A, B, F @ A @ F, F @ B @ F]
VIEW = (-0.6, -0.6, 0.6, 0.6)

# frozen from the first run at depth 8 (identical under both kernel paths)
GOLDEN_DEPTH8_POINTS = 1203365
GOLDEN_DEPTH8_GAP = 0.9375
GOLDEN_DEPTH8_SHA = "8fbebf9cc9ded644d9a17b331a01a1a2d7be2f01989af623d99a531d42d5ce27"


@pytest.fixture(scope="module")
def depth8():
    return orbit_cloud(G, 8)


def test_lattice_cloud_is_infinity():
    c = orbit_cloud([A, B], 4)
    assert c.has_infinity
    assert len(c.finite()) == 0
    assert len(c) == 1


def test_ejemplo1_seeds():
    seeds = seed_points(G)
    assert seeds[0] is INFINITY
    assert len(seeds) == 2 and abs(seeds[1]) < 1e-15
    c = orbit_cloud(G, 1)
    assert c.has_infinity
    assert np.any(np.abs(c.finite()) < 1e-15)


def test_identity_only():
    with pytest.raises(EmptyGenerators):
        orbit_cloud([MoebiusMap.identity()], 3)


def test_finite_group_has_empty_cloud():
    E = MoebiusMap(TAU6, ZERO, ZERO, ONE)
    c = orbit_cloud([E], 3)
    assert len(c) == 0


def test_depth_overflow():
    with pytest.raises(DepthOverflow):
        orbit_cloud(G, 8, cap=1000)


def test_bad_depth():
    with pytest.raises(ValueError):
        orbit_cloud(G, 0)


def test_size_bound():
    for d in range(1, 6):
        c = orbit_cloud(G, d)
        assert len(c) <= len(c.seeds) * (1 + word_count_bound(4, d))


def test_render_empty():
    img = render(np.array([], dtype=complex), VIEW, 16, 8)
    assert img.count() == 0
    ppm = img.to_ppm()
    assert ppm.startswith(b"P6\n16 8\n255\n")
    assert set(ppm[len(b"P6\n16 8\n255\n"):]) == {255}


def test_render_center_pixel():
    img = render(np.array([0j]), (-1, -1, 1, 1), 10, 6)
    assert img.count() == 1
    rows, cols = np.nonzero(img.pixels)
    assert (cols[0], rows[0]) == (5, 3)


def test_render_half_open_bins():
    img = render(np.array([-1 - 1j, 1 + 1j, -1 + 1j]), (-1, -1, 1, 1), 4, 4)
    # x = x1 and y = y0 fall outside; (-1, 1) is the top-left pixel
    assert img.count() == 1
    assert img.pixels[0, 0] == 1


def test_render_ignores_infinity():
    c = orbit_cloud([A, B], 2)
    assert render(c, VIEW, 8, 8).count() == 0


@pytest.mark.parametrize("vp", [(0, 0, 0, 1), (1, 0, 0, 1), (0, 0, 1, float("nan"))])
def test_bad_viewport(vp):
    with pytest.raises(BadViewport):
        render(np.array([0j]), vp, 4, 4)


def test_viewport_parse():
    assert Viewport.parse("-1,-2,3,4").as_tuple() == (-1, -2, 3, 4)
    with pytest.raises(BadViewport):
        Viewport.parse("1,2,3")


def test_gap_examples():
    assert gap_statistic(np.array([0, 1], dtype=complex)) == 1
    assert gap_statistic(np.array([0, 0.5, 1], dtype=complex)) == 0.5
    assert gap_statistic(np.array([0, 0, 1], dtype=complex)) == 1
    with pytest.raises(TooFewPoints):
        gap_statistic(np.array([2j, 2j]))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=100, allow_nan=False), min_size=2, max_size=60, unique=True))
def test_gap_matches_bruteforce(pts):
    pts = np.array(pts, dtype=complex)
    if len(np.unique(pts)) < 2:
        return
    assert gap_statistic(pts) == pytest.approx(gap_statistic_bruteforce(pts), rel=1e-12, abs=1e-300)


def test_monotone_from_four_to_five():
    c4, c5 = orbit_cloud(G, 4), orbit_cloud(G, 5)
    assert c4.keys() <= c5.keys()
    assert len(c5) > len(c4)
    # representatives are kept in discovery order, so the depth 4 points are a prefix
    assert np.array_equal(c5.finite()[: len(c4.finite())], c4.finite())


def _chordal_to_cloud(w, cloud):
    """Chordal distance on the sphere from w to the nearest cloud point."""
    P = cloud.finite()
    to_inf = 2 / np.sqrt(1 + abs(w) ** 2) if w is not INFINITY else 0.0
    if w is INFINITY:
        best = np.min(2 / np.sqrt(1 + np.abs(P) ** 2)) if len(P) else np.inf
        return 0.0 if cloud.has_infinity else best
    d = 2 * np.abs(P - w) / np.sqrt((1 + np.abs(P) ** 2) * (1 + abs(w) ** 2))
    best = np.min(d) if len(P) else np.inf
    return min(best, to_inf) if cloud.has_infinity else best


def test_equivariance_at_sampling_level():
    c3, c4 = orbit_cloud(G, 3), orbit_cloud(G, 4)
    for g in G + [x.inverse() for x in G]:
        f = g.to_float()
        for z in c3.finite():
            assert _chordal_to_cloud(f(complex(z)), c4) <= 1e-6
        if c3.has_infinity:
            assert _chordal_to_cloud(f(INFINITY), c4) <= 1e-6


def test_determinism(depth8):
    again = orbit_cloud(G, 8)
    a = render(depth8, VIEW, 400, 400)
    b = render(again, VIEW, 400, 400)
    assert a.sha256() == b.sha256()
    assert a.to_ppm() == b.to_ppm()


def test_depth8_golden(depth8):
    assert len(depth8) == GOLDEN_DEPTH8_POINTS
    assert gap_statistic(depth8) == GOLDEN_DEPTH8_GAP
    img = render(depth8, VIEW, 400, 400)
    assert img.count() > 0
    assert img.sha256() == GOLDEN_DEPTH8_SHA


def test_depth8_points_cluster_on_the_disk(depth8):
    pts = depth8.finite()
    inside = pts[(np.abs(pts.real) < 0.6) & (np.abs(pts.imag) < 0.6)]
    assert len(inside) > 0
    # every point in the window other than the lattice point 0 lives in the closed disk |z| <= 1/4
    assert np.all(np.abs(inside) <= 0.25 + 1e-9)


def _cloud_digest(c):
    return hashlib.sha256(c.points.tobytes()).hexdigest(), c.has_infinity


def test_numba_and_numpy_paths_agree(monkeypatch):
    if kernels.numba is None:
        pytest.skip("numba not installed")
    monkeypatch.delenv("MDC_NO_NUMBA", raising=False)
    assert kernels.backend_name() == "numba"
    fast = orbit_cloud(G, 5)
    img_fast = render(fast, VIEW, 200, 200)
    monkeypatch.setenv("MDC_NO_NUMBA", "1")
    assert kernels.backend_name() == "numpy"
    slow = orbit_cloud(G, 5)
    img_slow = render(slow, VIEW, 200, 200)
    assert _cloud_digest(fast) == _cloud_digest(slow)
    assert img_fast.to_ppm() == img_slow.to_ppm()


def test_flag_zero_keeps_numba(monkeypatch):
    monkeypatch.setenv("MDC_NO_NUMBA", "0")
    assert kernels.use_numba() == (kernels.numba is not None)


def test_expand_level_handles_poles(no_numba):
    mats = kernels.pack_matrices([(0, 1, 1, 0), (0, 1, 1, 0)])
    xr, xi, inf, last = kernels.expand_level(
        np.array([0.0, 0.0]), np.array([0.0, 0.0]), np.array([False, True]), np.array([-1, -1]), mats, np.array([1, 0])
    )
    assert list(inf[:2]) == [True, False]
    assert xr[1] == 0.0 and xi[1] == 0.0


def test_benchmark_paths_agree():
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    n, results, same = mod.bench(depth=4, repeat=1)
    assert n > 0 and same
    assert set(results) == {"numba", "numpy"}
