"""The rank-one extension catalog K1, K2, K22, K3, K4, K6 and exact wallpaper
decomposition (point group, translation lattice, cone points)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonDiscrete, NonOrbifold, SymbolicObstruction, TauConstraintViolation
from .moebius import AffineMap
from .numerics import I, OMEGA3, ONE, TAU6, CycloNumber, Symbolic, TauScalar, root_of_unity_order
from .orbifold import OrbifoldSignature

RANK_ONE_NAMES = ("K1", "K2", "K22", "K3", "K4", "K6")
FORCED_TAU = {"K3": OMEGA3, "K4": I, "K6": TAU6}
# elliptic orders available for amalgamation (1 = free product)
AMALGAM_ORDERS = {"K1": (1,), "K2": (1, 2), "K22": (1, 2), "K3": (1, 3), "K4": (1, 2, 4), "K6": (1, 2, 3, 6)}
POINT_GROUP_ORDER = {"K1": 1, "K2": 2, "K22": 2, "K3": 3, "K4": 4, "K6": 6}
PRINTED_SIGNATURES = {
    "K1": OrbifoldSignature(1, ()),
    "K2": OrbifoldSignature(0, (2, 2, 2, 2)),
    "K22": OrbifoldSignature(0, (2, 2, 2, 2)),
    "K3": OrbifoldSignature(0, (3, 3, 3)),
    "K4": OrbifoldSignature(0, (2, 4, 4)),
    "K6": OrbifoldSignature(0, (2, 3, 6)),
}


@dataclass(frozen=True)
class RankOneKind:
    name: str
    tau: CycloNumber | None = None   # None: indeterminate tau (K1, K2, K22 only)

    def __post_init__(self):
        if self.name not in RANK_ONE_NAMES:
            raise ValueError(f"unknown rank-one kind {self.name!r}")
        forced = FORCED_TAU.get(self.name)
        if forced is not None:
            if self.tau is None:
                object.__setattr__(self, "tau", forced)
            elif self.tau != forced:
                raise TauConstraintViolation(f"{self.name} requires tau = {forced}, got {self.tau}")
        elif self.tau is not None and self.tau.to_complex().imag <= 0:
            raise TauConstraintViolation("tau must lie in the upper half plane")

    @property
    def symbolic(self) -> bool:
        return self.tau is None

    def tau_value(self) -> TauScalar:
        return Symbolic(0, 1) if self.tau is None else self.tau


def build_catalog_group(kind: RankOneKind | str) -> list[AffineMap]:
    """Generators exactly as normalized in the catalog."""
    if isinstance(kind, str):
        kind = RankOneKind(kind)
    t = kind.tau_value()
    one = Symbolic(1, 0) if kind.symbolic else ONE
    zero = Symbolic() if kind.symbolic else CycloNumber()
    name = kind.name
    if name == "K1":
        return [AffineMap(ONE, one + t), AffineMap(ONE, one)]
    if name == "K2":
        return [AffineMap(-ONE, one + t), AffineMap(-ONE, one), AffineMap(ONE, one)]
    if name == "K3":
        return [AffineMap(OMEGA3, zero), AffineMap(ONE, one)]
    if name == "K4":
        return [AffineMap(I, zero), AffineMap(-ONE, one)]
    if name == "K6":
        return [AffineMap(TAU6, zero), AffineMap(-ONE, one)]
    half_tau = t * Fraction(1, 2)
    return [
        AffineMap(-ONE, one + t),
        AffineMap(-ONE, one),
        AffineMap(-ONE, half_tau),
        AffineMap(-ONE, half_tau + 2),
    ]


# ---------------------------------------------------------------------------
# coordinates relative to {1, tau}

Vec = tuple[Fraction, Fraction]


def to_coords(x: TauScalar, tau: CycloNumber | None) -> Vec:
    if isinstance(x, Symbolic):
        if tau is not None and x.q1:
            raise SymbolicObstruction("symbolic value in a concrete-tau context")
        return (x.q0, x.q1)
    if isinstance(x, (int, Fraction)):
        return (Fraction(x), Fraction(0))
    if tau is None:
        if x.is_rational():
            return (x.c0, Fraction(0))
        raise SymbolicObstruction(f"{x} is not expressible over Q + Q*tau for indeterminate tau")
    k = next((k for k in (1, 2, 3) if tau.coeffs[k]), None)
    q1 = x.coeffs[k] / tau.coeffs[k] if k is not None else Fraction(0)
    q0 = x.c0 - q1 * tau.c0
    if tau * q1 + q0 != x:
        raise ValueError(f"{x} does not lie in Q + Q*tau for tau = {tau}")
    return (q0, q1)


def from_coords(v: Vec, tau: CycloNumber | None) -> TauScalar:
    if tau is None:
        return Symbolic(v[0], v[1])
    return tau * v[1] + v[0]


def rotation_matrix(mult: CycloNumber, tau: CycloNumber | None):
    """Matrix of z -> mult*z acting on {1, tau} coordinates."""
    if tau is None:
        if mult == ONE:
            s = Fraction(1)
        elif mult == -ONE:
            s = Fraction(-1)
        else:
            raise SymbolicObstruction("only +1 and -1 act on an indeterminate lattice")
        return ((s, Fraction(0)), (Fraction(0), s))
    c1 = to_coords(mult, tau)
    c2 = to_coords(mult * tau, tau)
    return ((c1[0], c2[0]), (c1[1], c2[1]))


def _matvec(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def _det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _inv(m):
    d = _det(m)
    return ((m[1][1] / d, -m[0][1] / d), (-m[1][0] / d, m[0][0] / d))


def _matmul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


@dataclass(frozen=True)
class Lattice:
    """Rank-two Z-module in Q^2 ({1, tau} coordinates), basis in Hermite form."""

    b1: Vec
    b2: Vec
    tau: CycloNumber | None = None

    @classmethod
    def span(cls, vectors, tau=None) -> Lattice:
        vecs = [v for v in vectors if v[0] or v[1]]
        if not vecs:
            raise NonDiscrete("translation subgroup is trivial")
        den = math.lcm(*(x.denominator for v in vecs for x in v))
        rows = [[int(x * den) for x in v] for v in vecs]
        # Hermite normal form by integer row reduction, column by column
        basis = []
        for col in range(2):
            rows = [r for r in rows if any(r)]
            while True:
                nz = [r for r in rows if r[col] != 0]
                if len(nz) <= 1:
                    break
                nz.sort(key=lambda r: abs(r[col]))
                piv = nz[0]
                rows = [piv] + [
                    [a - (r[col] // piv[col]) * b for a, b in zip(r, piv)] if r is not piv and r[col] else r
                    for r in rows
                    if r is not piv
                ]
            piv = next((r for r in rows if r[col] != 0), None)
            if piv is None:
                continue
            if piv[col] < 0:
                piv = [-x for x in piv]
            basis.append(piv)
            rows = [r for r in rows if r[col] == 0]
        if len(basis) < 2:
            raise NonDiscrete("translation subgroup has rank < 2")
        (a, b), (c, d) = basis
        if c == 0 and d != 0:
            b = b % d
        b1 = (Fraction(a, den), Fraction(b, den))
        b2 = (Fraction(c, den), Fraction(d, den))
        return cls(b1, b2, tau)

    @property
    def matrix(self):
        return ((self.b1[0], self.b2[0]), (self.b1[1], self.b2[1]))

    def covolume(self) -> Fraction:
        """|det| of the basis in {1, tau} coordinates (Z + Z*tau has covolume 1)."""
        return abs(_det(self.matrix))

    def coords_of(self, v: Vec) -> Vec:
        return _matvec(_inv(self.matrix), v)

    def contains(self, v) -> bool:
        if not isinstance(v, tuple):
            v = to_coords(v, self.tau)
        x, y = self.coords_of(v)
        return x.denominator == 1 and y.denominator == 1

    def contains_lattice(self, other: Lattice) -> bool:
        return self.contains(other.b1) and self.contains(other.b2)

    def index_of(self, sub: Lattice) -> Fraction:
        return sub.covolume() / self.covolume()

    def basis(self) -> tuple[TauScalar, TauScalar]:
        return (from_coords(self.b1, self.tau), from_coords(self.b2, self.tau))

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.contains_lattice(other) and other.contains_lattice(self)

    def __hash__(self):
        return hash((self.b1, self.b2))


@dataclass
class WallpaperDecomposition:
    tau: CycloNumber | None
    point_group: dict             # multiplier -> representative AffineMap
    lattice: Lattice
    cone_data: list               # (order, representative fixed point) per cone orbit
    point_group_orders: list = field(default_factory=list)

    @property
    def point_group_order(self) -> int:
        return len(self.point_group)

    @property
    def lattice_basis(self):
        return self.lattice.basis()

    def contains(self, f: AffineMap) -> bool:
        rep = self.point_group.get(f.multiplier)
        if rep is None:
            return False
        u = f @ rep.inverse()
        return self.lattice.contains(to_coords(u.translation, self.tau))

    def translation_parts(self, radius2: float):
        """Yield (multiplier, t) for every element z -> m*z + t with |t|^2 <= radius2.

        The bound is a float one; t itself is exact."""
        b1, b2 = self.lattice.basis()
        tau_c = complex(0, 1) if self.tau is None else self.tau.to_complex()

        def fl(x):
            return x.concretize(tau_c) if isinstance(x, Symbolic) else x.to_complex()

        v1, v2 = fl(b1), fl(b2)
        area = abs((v1.conjugate() * v2).imag)
        for mult, rep in self.point_group.items():
            t0 = rep.translation
            reach = math.sqrt(radius2) + abs(fl(t0))
            # |i| <= reach*|v2|/area and |j| <= reach*|v1|/area for any lattice vector within reach
            ni = int(math.ceil(reach * abs(v2) / area)) + 1
            nj = int(math.ceil(reach * abs(v1) / area)) + 1
            for i in range(-ni, ni + 1):
                for j in range(-nj, nj + 1):
                    t = t0 + b1 * i + b2 * j
                    if abs(fl(t)) ** 2 <= radius2 + 1e-9:
                        yield mult, t


def _point_group_closure(gens: list[AffineMap]) -> dict:
    identity = AffineMap(ONE, Symbolic() if any(isinstance(g.translation, Symbolic) for g in gens) else CycloNumber())
    reps = {ONE: identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = s @ g
                if h.multiplier not in reps:
                    reps[h.multiplier] = h
                    nxt.append(h)
        frontier = nxt
        if len(reps) > 12:
            raise NonDiscrete("point group is not a finite group of roots of unity of order <= 12")
    return reps


def _frac_mod1(v: Vec) -> Vec:
    return tuple(x - math.floor(x) for x in v)


def decompose_wallpaper(gens: list[AffineMap], tau: CycloNumber | None = None) -> WallpaperDecomposition:
    """Point group, translation lattice (Schreier generators, exact) and cone points."""
    if tau is None:
        concrete = [g.translation for g in gens if isinstance(g.translation, CycloNumber) and not g.translation.is_rational()]
        if concrete or any(not (g.multiplier == ONE or g.multiplier == -ONE) for g in gens):
            raise ValueError("a concrete tau is required for these generators")
    reps = _point_group_closure(gens)
    schreier = []
    for rep in reps.values():
        for s in gens:
            h = s @ rep
            u = reps[h.multiplier].inverse() @ h
            assert u.is_translation()
            schreier.append(to_coords(u.translation, tau))
    lattice = Lattice.span(schreier, tau)
    # express everything in lattice coordinates
    B = lattice.matrix
    Binv = _inv(B)
    rot_L = {}
    trans_L = {}
    for mult, rep in reps.items():
        R = rotation_matrix(mult, tau)
        RL = _matmul(_matmul(Binv, R), B)
        if any(x.denominator != 1 for row in RL for x in row):
            raise NonDiscrete("point group does not preserve the translation lattice")
        rot_L[mult] = RL
        trans_L[mult] = _frac_mod1(_matvec(Binv, to_coords(rep.translation, tau)))

    def act(mult, x):
        y = _matvec(rot_L[mult], x)
        return _frac_mod1((y[0] + trans_L[mult][0], y[1] + trans_L[mult][1]))

    singular = set()
    for mult in reps:
        if mult == ONE:
            continue
        RL = rot_L[mult]
        IR = ((1 - RL[0][0], -RL[0][1]), (-RL[1][0], 1 - RL[1][1]))
        n = abs(int(_det(IR)))
        IRinv = _inv(IR)
        t = trans_L[mult]
        for i in range(n):
            for j in range(n):
                singular.add(_frac_mod1(_matvec(IRinv, (t[0] + i, t[1] + j))))
    cone_data = []
    seen = set()
    for x in sorted(singular):
        if x in seen:
            continue
        orbit = {act(m, x) for m in reps}
        seen |= orbit
        stab = sum(1 for m in reps if act(m, x) == x)
        rep_pt = min(orbit)
        cone_data.append((stab, from_coords(_matvec(B, rep_pt), tau)))
    cone_data.sort(key=lambda c: c[0])
    orders = sorted(root_of_unity_order(m) for m in reps)
    return WallpaperDecomposition(tau, reps, lattice, cone_data, orders)


def quotient_signature(d: WallpaperDecomposition) -> OrbifoldSignature:
    cones = tuple(sorted(m for m, _ in d.cone_data))
    excess = sum((1 - Fraction(1, m) for m in cones), Fraction(0))
    genus = (2 - excess) / 2
    if genus.denominator != 1 or genus < 0:
        raise NonOrbifold(f"cone orders {cones} do not close up a Euclidean orbifold")
    return OrbifoldSignature(int(genus), cones)


def catalog_decomposition(name: str, tau: CycloNumber | None = None) -> WallpaperDecomposition:
    kind = RankOneKind(name, tau)
    return decompose_wallpaper(build_catalog_group(kind), kind.tau)


# ---------------------------------------------------------------------------
# printed relations between catalog groups

J = AffineMap(-ONE, CycloNumber())


def _conj(h: AffineMap, f: AffineMap) -> AffineMap:
    return h @ f @ h.inverse()


def _as_symbolic(f: AffineMap) -> AffineMap:
    t = f.translation
    if isinstance(t, CycloNumber):
        t = Symbolic(t.c0, 0)
    return AffineMap(f.multiplier, t)


def check_catalog_relations() -> list[dict]:
    report = []
    jsym = _as_symbolic(J)

    def claim(name, passed, **detail):
        report.append({"claim": name, "passed": bool(passed), **detail})

    for name in ("K1", "K3"):
        kind = RankOneKind(name)
        gens = build_catalog_group(kind)
        dec = decompose_wallpaper(gens, kind.tau)
        j = jsym if kind.symbolic else J
        ok = all(dec.contains(_conj(j, g)) for g in gens)
        claim(f"j(z)=-z normalizes {name}", ok)

    # K6 = <K3, j>, with K3 taken at tau = exp(2 pi i/3) and K6 at tau = exp(pi i/3)
    k6 = build_catalog_group("K6")
    k3j = build_catalog_group("K3") + [J]
    d6 = decompose_wallpaper(k6, TAU6)
    d3j = decompose_wallpaper(k3j, OMEGA3)
    claim(
        "K6 = <K3, j>",
        all(d6.contains(g) for g in k3j) and all(d3j.contains(g) for g in k6),
        forward=all(d6.contains(g) for g in k3j),
        backward=all(d3j.contains(g) for g in k6),
    )

    k2 = build_catalog_group("K2")
    k1j = build_catalog_group("K1") + [jsym]
    d2 = decompose_wallpaper(k2)
    d1j = decompose_wallpaper(k1j)
    claim(
        "K2 = <K1, j>",
        all(d2.contains(g) for g in k1j) and all(d1j.contains(g) for g in k2),
        forward=all(d2.contains(g) for g in k1j),
        backward=all(d1j.contains(g) for g in k2),
    )

    d22 = decompose_wallpaper(build_catalog_group("K22"))
    literal = [d22.contains(g) for g in k2]
    claim(
        "K2 is an index two subgroup of K22 (printed generators, literally)",
        all(literal),
        generators_contained=literal,
        index_K2_over_lattice=d2.point_group_order,
        index_K22_over_lattice=d22.point_group_order,
        lattice_K2=[str(b) for b in d2.lattice_basis],
        lattice_K22=[str(b) for b in d22.lattice_basis],
        covolume_ratio_K2_over_K22=str(d2.lattice.covolume() / d22.lattice.covolume()),
    )
    return report


def verify_rank1() -> list[dict]:
    """Signature of every catalog group against the printed list."""
    rows = []
    for name in RANK_ONE_NAMES:
        dec = catalog_decomposition(name)
        sig = quotient_signature(dec)
        rows.append(
            {
                "kind": name,
                "generators": [str(g) for g in build_catalog_group(name)],
                "tau": "tau" if dec.tau is None else str(dec.tau),
                "lattice_basis": [str(b) for b in dec.lattice_basis],
                "point_group_order": dec.point_group_order,
                "cone_points": [(m, str(p)) for m, p in dec.cone_data],
                "signature": str(sig),
                "expected": str(PRINTED_SIGNATURES[name]),
                "passed": sig == PRINTED_SIGNATURES[name],
            }
        )
    return rows
