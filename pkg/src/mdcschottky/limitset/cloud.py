"""Approximate limit sets by orbits of generator fixed points."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DepthOverflow, EmptyGenerators
from ..moebius import INFINITY, MoebiusMap, classify, fixed_points
from . import kernels

DEDUP_EPS = 1e-7
DEFAULT_CAP = 10**7


def word_count_bound(n_generators: int, depth: int) -> int:
    """Number of nonempty reduced words of length <= depth in n free generators."""
    if n_generators == 0:
        return 0
    m = 2 * n_generators
    return sum(m * (m - 1) ** (k - 1) for k in range(1, depth + 1))


def _sphere_keys(xr, xi, inf, eps):
    """Integer keys on a two-chart cover of the sphere: z when |z| <= 1, else 1/z."""
    r2 = xr * xr + xi * xi
    big = (r2 > 1.0) | inf
    with np.errstate(divide="ignore", invalid="ignore"):
        wr = np.where(big, xr / r2, xr)
        wi = np.where(big, -xi / r2, xi)
    wr = np.where(inf, 0.0, wr)
    wi = np.where(inf, 0.0, wi)
    return np.stack([big.astype(np.int64), np.rint(wr / eps).astype(np.int64), np.rint(wi / eps).astype(np.int64)], axis=1)


def _void(width):
    return np.dtype((np.void, 8 * width))


def _first_unseen(keys, seen):
    """Indices (ascending) of first occurrences of keys not yet in the sorted array seen."""
    v = np.ascontiguousarray(keys, dtype=np.int64).view(_void(keys.shape[1])).ravel()
    uniq, first = np.unique(v, return_index=True)
    if len(seen):
        pos = np.minimum(np.searchsorted(seen, uniq), len(seen) - 1)
        new = seen[pos] != uniq
        uniq, first = uniq[new], first[new]
    merged = np.sort(np.concatenate([seen, uniq]))
    return np.sort(first), merged


@dataclass
class OrbitCloud:
    points: np.ndarray                    # finite points, complex128, discovery order
    has_infinity: bool
    depth: int
    seeds: list = field(default_factory=list)
    n_generators: int = 0
    eps: float = DEDUP_EPS
    backend: str = "numpy"

    def __len__(self):
        return len(self.points) + int(self.has_infinity)

    def finite(self) -> np.ndarray:
        return self.points

    def keys(self) -> set:
        pts = self.points
        k = _sphere_keys(pts.real, pts.imag, np.zeros(len(pts), dtype=bool), self.eps)
        out = set(map(tuple, k.tolist()))
        if self.has_infinity:
            out.add((1, 0, 0))
        return out

    def as_dict(self):
        return {
            "depth": self.depth,
            "points": len(self),
            "finite_points": len(self.points),
            "has_infinity": self.has_infinity,
            "seeds": [("inf" if s is INFINITY else [s.real, s.imag]) for s in self.seeds],
            "backend": self.backend,
        }


def _float_entries(g: MoebiusMap):
    return tuple(complex(x) for x in g.to_float().entries)


def seed_points(gens) -> list:
    """Fixed points of the non-elliptic generators (elliptic fixed points are not limit points)."""
    seeds = []
    for g in gens:
        f = g.to_float()
        kind = classify(f)
        if kind.kind in ("Identity", "Elliptic"):
            continue
        for p in fixed_points(f):
            p = p if p is INFINITY else complex(p)
            if not any(_close(p, q) for q in seeds):
                seeds.append(p)
    return seeds


def _close(p, q, eps=DEDUP_EPS):
    if p is INFINITY or q is INFINITY:
        return p is q
    return abs(p - q) <= eps * max(1.0, abs(p))


def orbit_cloud(gens, depth: int, eps: float = DEDUP_EPS, cap: int = DEFAULT_CAP) -> OrbitCloud:
    if isinstance(gens, dict):
        gens = list(gens.values())
    if depth < 1:
        raise ValueError("depth must be at least 1")
    gens = [g for g in gens if not g.is_identity()]
    if not gens:
        raise EmptyGenerators("no non-identity generators")

    letters = []
    for g in gens:
        letters += [_float_entries(g), _float_entries(g.inverse())]
    mats = kernels.pack_matrices(letters)
    inv = np.array([i ^ 1 for i in range(len(letters))], dtype=np.int64)

    seeds = seed_points(gens)
    inf = np.array([s is INFINITY for s in seeds], dtype=bool)
    vals = np.array([0j if s is INFINITY else s for s in seeds], dtype=np.complex128)
    xr, xi = vals.real.copy(), vals.imag.copy()
    last = np.full(len(seeds), -1, dtype=np.int64)

    point_seen = np.empty(0, dtype=_void(3))
    frontier_seen = np.empty(0, dtype=_void(4))
    found_r, found_i, found_inf = [], [], False

    def admit(xr, xi, inf, last):
        nonlocal point_seen, frontier_seen, found_inf
        keys = _sphere_keys(xr, xi, inf, eps)
        fresh, point_seen = _first_unseen(keys, point_seen)
        found_inf = found_inf or bool(inf[fresh].any())
        finite = fresh[~inf[fresh]]
        found_r.append(xr[finite])
        found_i.append(xi[finite])
        keep, frontier_seen = _first_unseen(np.concatenate([keys, last[:, None]], axis=1), frontier_seen)
        return xr[keep], xi[keep], inf[keep], last[keep]

    xr, xi, inf, last = admit(xr, xi, inf, last)
    branching = len(letters) - 1
    for _ in range(depth):
        if len(xr) == 0:
            break
        predicted = len(point_seen) + len(xr) * (branching + 1)
        if predicted > cap:
            raise DepthOverflow(f"predicted {predicted} points exceeds the cap {cap}")
        xr, xi, inf, last = admit(*kernels.expand_level(xr, xi, inf, last, mats, inv))

    pts = np.concatenate(found_r) + 1j * np.concatenate(found_i)
    return OrbitCloud(
        points=pts.astype(np.complex128),
        has_infinity=found_inf,
        depth=depth,
        seeds=seeds,
        n_generators=len(gens),
        eps=eps,
        backend=kernels.backend_name(),
    )
