"""Klein-Maskit combinations as recipes: MDC-Schottky groups of rank g, star-shaped
extension groups, finite combination certificates and the maximal genus-two example."""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import (
    AMALGAM_ORDERS,
    POINT_GROUP_ORDER,
    RankOneKind,
    build_catalog_group,
    decompose_wallpaper,
    from_coords,
    to_coords,
)
from .errors import CertificateFailure, FieldExtensionRequired, RecipeInvariantViolation, UnknownGenerator
from .moebius import (
    IDENTITY_CLASS,
    INFINITY,
    AffineMap,
    Elliptic,
    MoebiusMap,
    TransClass,
    approx_equal,
    classify,
    fixed_points,
)
from .numerics import ONE, TAU6, ZERO, CycloNumber, root_of_unity_order
from .orbifold import FiniteKind

DEFAULT_WORD_BOUND = 8

# ---------------------------------------------------------------------------
# certificates


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Circle:
    center: object          # CycloNumber or complex
    radius: object          # Fraction or float

    def __str__(self):
        return f"|z - ({self.center})| = {self.radius}"


@dataclass
class CombinationCertificate:
    curves: list = field(default_factory=list)
    side_assignment: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    level: str = "exact-lattice"
    word_bound: int | None = None

    @property
    def curve(self) -> Circle | None:
        return self.curves[0] if self.curves else None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))

    def raise_if_failed(self):
        bad = self.first_failure()
        if bad is not None:
            raise CertificateFailure(bad.name, bad.detail)

    def as_dict(self):
        level = self.level if self.word_bound is None else f"{self.level} (L={self.word_bound})"
        return {
            "level": level,
            "passed": self.passed,
            "curves": [{"center": str(c.center), "radius": str(c.radius)} for c in self.curves],
            "side_assignment": list(self.side_assignment),
            "checks": [c.as_dict() for c in self.checks],
        }


# ---------------------------------------------------------------------------
# MDC-Schottky groups of rank g


def _abs2_real(x: CycloNumber) -> CycloNumber:
    return x * x.conjugate()


def _lattice_vectors(tau: CycloNumber, reach: float):
    """All m + n*tau with |m + n*tau| <= reach (a float bound, the vectors are exact)."""
    tc = tau.to_complex()
    nmax = int(math.floor(reach / tc.imag)) + 1
    for n in range(-nmax, nmax + 1):
        mmax = int(math.ceil(reach + abs(n * tc))) + 1
        for m in range(-mmax, mmax + 1):
            if abs(m + n * tc) <= reach + 1e-9:
                yield m, n, tau * n + m


def shortest_vector2(tau: CycloNumber) -> CycloNumber:
    """Exact min |v|^2 over the nonzero vectors of Z + Z*tau."""
    best = None
    for m, n, v in _lattice_vectors(tau, 1.0):
        if m == 0 and n == 0:
            continue
        a = _abs2_real(v)
        if best is None or a.compare_real(best) < 0:
            best = a
    return best


def default_layout(g: int) -> tuple[list[Fraction], Fraction]:
    """Centers (k-2)/(g-1), k = 2..g, and common radius 1/(4(g-1))."""
    if g < 2:
        return [], Fraction(0)
    return [Fraction(k - 2, g - 1) for k in range(2, g + 1)], Fraction(1, 4 * (g - 1))


def _involution(center: CycloNumber, radius: Fraction, tau: CycloNumber) -> MoebiusMap:
    # z -> c + u r^2/(z - c), which swaps the inside and outside of |z - c| = r when |u| = 1
    u = tau if _abs2_real(tau) == ONE else ONE
    c = center
    return MoebiusMap(c, u * radius * radius - c * c, ONE, -c)


def build_mdc_schottky(g: int, tau: CycloNumber = TAU6, radius=None, centers=None):
    """Generators A_1, B_1, ..., A_g, B_g and a combination certificate.

    Factor one is <z+1, z+tau> at infinity; factor k >= 2 is its conjugate by the involution
    of the circle |z - c_k| = radius."""
    if g < 1:
        raise ValueError("rank must be at least 1")
    tau = CycloNumber.coerce(tau)
    if tau.to_complex().imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    A = MoebiusMap(ONE, ONE, ZERO, ONE)
    B = MoebiusMap(ONE, tau, ZERO, ONE)
    gens = [A, B]
    cert = CombinationCertificate(level="exact-lattice")
    if g == 1:
        cert.add("rank-one", True, "a single double-cusped factor, no curve needed")
        return gens, cert
    dc, dr = default_layout(g)
    centers = dc if centers is None else list(centers)
    radius = dr if radius is None else Fraction(radius)
    if len(centers) != g - 1:
        raise ValueError(f"need {g - 1} centers for rank {g}")
    centers = [CycloNumber.coerce(c) for c in centers]
    diam2 = CycloNumber(4 * radius * radius)
    sv = shortest_vector2(tau)
    cert.add(
        "shortest-vector",
        sv.compare_real(diam2) > 0,
        f"min |v|^2 = {sv} against (2r)^2 = {diam2.c0}",
    )
    if not cert.passed:
        raise CertificateFailure("shortest-vector", cert.checks[-1].detail)
    reach = float(2 * radius) + max(abs(a.to_complex() - b.to_complex()) for a in centers for b in centers)
    for i, ci in enumerate(centers):
        for j, cj in enumerate(centers):
            if j <= i:
                continue
            worst = None
            for m, n, v in _lattice_vectors(tau, reach):
                d2 = _abs2_real(cj - ci + v)
                if worst is None or d2.compare_real(worst) < 0:
                    worst = d2
            ok = worst.compare_real(diam2) > 0
            cert.add(f"disks-{i + 2}-{j + 2}-disjoint", ok, f"min squared center distance {worst}")
            if not ok:
                raise CertificateFailure(f"disks-{i + 2}-{j + 2}-disjoint", cert.checks[-1].detail)
    for k, c in enumerate(centers, start=2):
        F = _involution(c, radius, tau)
        gens += [F @ A @ F, F @ B @ F]
        cert.curves.append(Circle(c, radius))
        cert.side_assignment.append(f"factor 1 owns the outside of disk {k}; factor {k} owns its inside")
    return gens, cert


# ---------------------------------------------------------------------------
# recipes


G2_VARIANTS = ("FreeRank2", "AmalgamCyclic", "SwapInvolution", "DihedralAmalgam")
EUCLIDEAN = (2, 3, 4, 6)


@dataclass(frozen=True)
class G2Base:
    """The four rank-two shapes: free, K_d *_{Z_d} K_d, K_1 * Z_2 and K_d *_{Z_d} D_d."""

    variant: str
    d: int | None = None

    def __post_init__(self):
        if self.variant not in G2_VARIANTS:
            raise ValueError(f"unknown genus-two variant {self.variant!r}")
        if self.variant in ("AmalgamCyclic", "DihedralAmalgam"):
            if self.d not in EUCLIDEAN:
                raise ValueError("d must be one of 2, 3, 4, 6")
        elif self.d is not None:
            raise ValueError(f"{self.variant} takes no d")

    def to_recipe(self) -> ExtensionRecipe:
        if self.variant == "FreeRank2":
            return ExtensionRecipe(0, FiniteKind("Trivial"), [(RankOneKind("K1"), 1), (RankOneKind("K1"), 1)])
        if self.variant == "SwapInvolution":
            return ExtensionRecipe(0, FiniteKind("Cyclic", 2), [(RankOneKind("K1"), 1)])
        kd = RankOneKind(f"K{self.d}")
        if self.variant == "AmalgamCyclic":
            return ExtensionRecipe(0, kd, [(kd, self.d)])
        return ExtensionRecipe(0, FiniteKind("Dihedral", self.d), [(kd, self.d)])

    @property
    def point_group_order(self) -> int:
        return {"FreeRank2": 1, "SwapInvolution": 2, "AmalgamCyclic": self.d, "DihedralAmalgam": 2 * (self.d or 0)}[
            self.variant
        ]

    def __str__(self):
        return self.variant if self.d is None else f"{self.variant}({self.d})"


def _base_orders(base) -> set[int]:
    if isinstance(base, FiniteKind):
        return base.element_orders()
    if isinstance(base, RankOneKind):
        return set(AMALGAM_ORDERS[base.name]) - {1}
    raise TypeError(base)


@dataclass
class ExtensionRecipe:
    free_rank: int
    base: object                       # FiniteKind | RankOneKind | G2Base
    factors: list = field(default_factory=list)   # [(RankOneKind, t)]

    def __post_init__(self):
        self.factors = [(RankOneKind(k) if isinstance(k, str) else k, int(t)) for k, t in self.factors]

    def resolved(self) -> ExtensionRecipe:
        """Replace a G2Base by its generic recipe (extra free rank and factors appended)."""
        if isinstance(self.base, G2Base):
            inner = self.base.to_recipe()
            return ExtensionRecipe(self.free_rank + inner.free_rank, inner.base, inner.factors + list(self.factors))
        return self

    def validate(self) -> None:
        validate_recipe(self)

    def to_json(self) -> dict:
        base = self.base
        if isinstance(base, G2Base):
            b = {"g2": base.variant, "d": base.d}
        elif isinstance(base, FiniteKind):
            b = {"kind": base.name, "n": base.n}
        else:
            b = {"kind": base.name}
        return {
            "free_rank": self.free_rank,
            "base": {k: v for k, v in b.items() if v is not None},
            "factors": [{"kind": k.name, "amalgam": t} for k, t in self.factors],
        }

    @classmethod
    def from_json(cls, data) -> ExtensionRecipe:
        if isinstance(data, str):
            data = json.loads(data)
        b = data.get("base", {"kind": "Trivial"})
        if "g2" in b:
            base = G2Base(b["g2"], b.get("d"))
        elif b["kind"] in AMALGAM_ORDERS:
            base = RankOneKind(b["kind"])
        else:
            base = FiniteKind(b["kind"], b.get("n"))
        factors = [(RankOneKind(f["kind"]), f.get("amalgam", 1)) for f in data.get("factors", [])]
        return cls(int(data.get("free_rank", 0)), base, factors)


def validate_recipe(recipe: ExtensionRecipe) -> None:
    if recipe.free_rank < 0:
        raise RecipeInvariantViolation("free rank must be nonnegative")
    r = recipe.resolved()
    left = _base_orders(r.base)
    for kind, t in r.factors:
        if t not in AMALGAM_ORDERS[kind.name]:
            raise RecipeInvariantViolation(
                f"{kind.name} has no elliptic element of order {t}; allowed: {AMALGAM_ORDERS[kind.name]}"
            )
        if t != 1 and t not in left:
            raise RecipeInvariantViolation(f"no elliptic element of order {t} on the left side to amalgamate along")
        left |= set(AMALGAM_ORDERS[kind.name]) - {1}


def recipe_is_valid(recipe: ExtensionRecipe) -> bool:
    try:
        validate_recipe(recipe)
    except RecipeInvariantViolation:
        return False
    return True


# ---------------------------------------------------------------------------
# finite groups of Moebius maps


def _root(n: int) -> CycloNumber | complex:
    if 12 % n == 0:
        return CycloNumber.zeta_power(12 // n)
    return cmath.exp(2j * math.pi / n)


def finite_group_generators(kind: FiniteKind) -> list[MoebiusMap]:
    """A fixed realization of each finite kind, exact over Q(zeta_12) when it fits."""
    i = CycloNumber.zeta_power(3)
    if kind.name == "Trivial":
        return []
    if kind.name == "Cyclic":
        w = _root(kind.n)
        return [MoebiusMap(w, 0, 0, 1)]
    if kind.name == "Dihedral":
        w = _root(kind.n)
        return [MoebiusMap(w, 0, 0, 1), MoebiusMap(0, 1, 1, 0)]
    if kind.name == "A4":
        return [MoebiusMap(-ONE, 0, 0, 1), MoebiusMap(ONE, i, ONE, -i)]
    if kind.name == "S4":
        return [MoebiusMap(i, 0, 0, 1), MoebiusMap(ONE, ONE, -ONE, ONE)]
    if kind.name == "A5":
        e = cmath.exp(2j * math.pi / 5)
        return [
            MoebiusMap(e, 0j, 0j, 1 + 0j),
            MoebiusMap(-(e - e**4), e**2 - e**3, e**2 - e**3, e - e**4),
        ]
    raise ValueError(kind)


def _member(x: MoebiusMap, elems) -> bool:
    # float keys are unstable when entries tie in size, so float maps compare by tolerance
    if x.exact:
        return any(x == y for y in elems)
    return any(approx_equal(x, y) for y in elems)


def group_closure(gens: list[MoebiusMap], limit: int = 240) -> list[MoebiusMap]:
    exact = all(g.exact for g in gens)
    if not exact:
        gens = [g.to_float() for g in gens]
    e = MoebiusMap.identity(exact)
    if exact:
        keys = {e.key()}
    out = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = s @ x
                if exact:
                    if y.key() in keys:
                        continue
                    keys.add(y.key())
                elif _member(y, out):
                    continue
                out.append(y)
                nxt.append(y)
        frontier = nxt
        if len(out) > limit:
            raise ValueError("group closure exceeded the size limit; the group is not finite")
    return out


# ---------------------------------------------------------------------------
# float disks on the sphere


@dataclass(frozen=True)
class _Region:
    center: complex
    radius: float
    inside: bool = True      # False: the outside of the circle (contains infinity)


def _f(z) -> complex:
    return z.to_complex() if isinstance(z, CycloNumber) else complex(z)


def _image_region(g: MoebiusMap, reg: _Region) -> _Region | None:
    a, b, c, d = (_f(x) for x in g.entries)
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= 1e-14 * scale:
        k = a / d
        return _Region(k * reg.center + b / d, abs(k) * reg.radius, reg.inside)
    pole = -d / c
    off = pole - reg.center
    if abs(abs(off) - reg.radius) <= 1e-12 * max(1.0, reg.radius):
        return None     # the image is a line
    def ap(z):
        return (a * z + b) / (c * z + d)

    if off == 0:
        cen = a / c      # the symmetric point of the center is infinity
    else:
        cen = ap(reg.center + reg.radius**2 / off.conjugate())
    rad = abs(ap(reg.center + reg.radius) - cen)
    pole_in = (abs(off) < reg.radius) == reg.inside
    return _Region(cen, rad, not pole_in)


def _disjoint(A: _Region | None, B: _Region | None, tol: float = 1e-9) -> bool:
    if A is None or B is None:
        return False
    dist = abs(A.center - B.center)
    if A.inside and B.inside:
        return dist >= A.radius + B.radius - tol
    if A.inside and not B.inside:
        return dist + A.radius <= B.radius + tol
    if B.inside and not A.inside:
        return dist + B.radius <= A.radius + tol
    return False


# ---------------------------------------------------------------------------
# pieces of an assembly


def _chart(p, q, exact: bool) -> MoebiusMap:
    """Moebius map sending p -> 0 and q -> infinity."""
    one, zero = (ONE, ZERO) if exact else (1 + 0j, 0j)
    if p is INFINITY:
        return MoebiusMap(zero, one, one, -q if exact else -_f(q), normalize=False)
    if q is INFINITY:
        return MoebiusMap(one, -p if exact else -_f(p), zero, one, normalize=False)
    if exact:
        return MoebiusMap(ONE, -p, ONE, -q, normalize=False)
    return MoebiusMap(1 + 0j, -_f(p), 1 + 0j, -_f(q), normalize=False)


def _same_point(u, v, exact: bool) -> bool:
    if u is INFINITY or v is INFINITY:
        return u is v
    if exact:
        return u == v
    return abs(_f(u) - _f(v)) < 1e-7 * max(1.0, abs(_f(u)))


@dataclass
class _Attachment:
    host: int
    point: object            # attachment point in final coordinates
    t0: MoebiusMap           # generator of the amalgamated subgroup, final coordinates
    chart: MoebiusMap        # h: final coordinates -> w, t0 becomes w -> lam*w
    lam: object
    s: Fraction              # shared circle is |h| = s
    local: tuple | None = None   # (local point, local radius) for lattice hosts


class _FinitePiece:
    lattice = False

    def __init__(self, kind: FiniteKind, exact: bool):
        self.kind = kind
        gens = finite_group_generators(kind)
        if not exact:
            gens = [g.to_float() for g in gens]
        self.gens = gens
        self.exact = all(g.exact for g in gens) if gens else exact
        self.elements = group_closure(gens) if gens else [MoebiusMap.identity(self.exact)]
        self.used_orbits: list = []
        self.attachments: list[_Attachment] = []
        if self.exact:
            # every fixed point must lie in the field for an exact realization
            for g in self.elements:
                if not g.is_identity():
                    fixed_points(g)

    def stabilizer(self, p):
        return [g for g in self.elements if _same_point(g(p), p, self.exact)]

    def orbit(self, p):
        return [g(p) for g in self.elements]

    def _unused(self, p) -> bool:
        return not any(any(_same_point(x, p, self.exact) for x in orb) for orb in self.used_orbits)

    def candidate_points(self, t: int):
        if t == 1:
            k = 0
            while True:
                k += 1
                # spread out, generic points k/2 + zeta/(3 + k)
                if self.exact:
                    p = CycloNumber(Fraction(k, 2), Fraction(1, 3 + k))
                else:
                    p = k / 2 + cmath.exp(1j * math.pi / 6) / (3 + k)
                if len(self.stabilizer(p)) == 1 and self._unused(p):
                    yield p, INFINITY, MoebiusMap.identity(self.exact)
                if k > 50:
                    return
        for g in self.elements:
            cl = classify(g)
            if cl != Elliptic(t):
                continue
            for p in fixed_points(g):
                if len(self.stabilizer(p)) == t and self._unused(p):
                    pts = fixed_points(g)
                    q = pts[1] if _same_point(pts[0], p, self.exact) else pts[0]
                    yield p, q, g

    def words(self, L: int):
        return self.elements


class _LatticePiece:
    lattice = True

    def __init__(self, kind: RankOneKind, tau, conj: MoebiusMap | None, exact: bool):
        self.kind = kind
        self.tau = kind.tau if kind.tau is not None else tau
        self.local_gens = build_catalog_group(RankOneKind(kind.name, self.tau) if kind.symbolic else kind)
        self.local_gens = [self._concrete(g) for g in self.local_gens]
        self.dec = decompose_wallpaper(self.local_gens, self.tau)
        self.conj = conj if conj is not None else MoebiusMap.identity(exact)
        self.exact = exact and self.conj.exact
        self.used: list[tuple] = []      # (local point, radius) already used, including the own attachment
        self.attachments: list[_Attachment] = []

    def _concrete(self, g: AffineMap) -> AffineMap:
        t = g.translation
        if not isinstance(t, CycloNumber):
            t = t.concretize(self.tau)
        return AffineMap(g.multiplier, t)

    @property
    def gens(self) -> list[MoebiusMap]:
        c = self.conj
        out = []
        for g in self.local_gens:
            m = g.to_moebius()
            if not c.exact:
                m = m.to_float()
            out.append(c @ m @ c.inverse())
        return out

    # local geometry -------------------------------------------------------
    def stabilizer_mults(self, c: CycloNumber) -> list[CycloNumber]:
        out = []
        for m, rep in self.dec.point_group.items():
            v = c - m * c - rep.translation
            if self.dec.lattice.contains(to_coords(v, self.tau)):
                out.append(m)
        return out

    def orbit_near(self, c: CycloNumber, reach: float):
        """Orbit points g(c) with |g(c) - c| <= reach, exactly."""
        cc = c.to_complex()
        R = reach + 2 * abs(cc)
        out = []
        for m, t in self.dec.translation_parts(R * R):
            x = m * c + t
            if abs(x.to_complex() - cc) <= reach + 1e-9:
                out.append(x)
        return out

    def min_orbit_distance2(self, c: CycloNumber, others=()) -> CycloNumber:
        """Exact min |g(c) - c|^2 over g(c) != c."""
        reach = 1.5 * max(abs(b.to_complex()) for b in self.dec.lattice_basis)
        best = None
        for x in self.orbit_near(c, reach):
            if x == c:
                continue
            d2 = _abs2_real(x - c)
            if best is None or d2.compare_real(best) < 0:
                best = d2
        return best

    def candidate_points(self, t: int):
        if t == 1:
            for i in range(0, 7):
                for j in range(0, 5):
                    c = from_coords((Fraction(i, 7), Fraction(j, 5)), self.tau)
                    if len(self.stabilizer_mults(c)) == 1 and self._unused(c):
                        yield c
            return
        for order, c in self.dec.cone_data:
            if order == t and self._unused(c):
                yield c

    def _unused(self, c) -> bool:
        for c0, _ in self.used:
            for x in self.orbit_near(c0, abs(c.to_complex() - c0.to_complex()) + 1e-6):
                if x == c:
                    return False
        return True

    def rotation(self, c: CycloNumber, mult: CycloNumber) -> AffineMap:
        return AffineMap(mult, c - mult * c)

    def words(self, L: int) -> list[AffineMap]:
        gens = self.local_gens + [g.inverse() for g in self.local_gens]
        e = AffineMap(ONE, ZERO)
        seen = {(e.multiplier, e.translation): e}
        frontier = [e]
        for _ in range(L):
            nxt = []
            for x in frontier:
                for s in gens:
                    y = s @ x
                    key = (y.multiplier, y.translation)
                    if key not in seen:
                        seen[key] = y
                        nxt.append(y)
            frontier = nxt
        return list(seen.values())


def _primitive(t: int) -> CycloNumber:
    return CycloNumber.zeta_power(12 // t)


def _rational_below_half(d2: CycloNumber) -> Fraction:
    """Largest 2^-k with (2 eps)^2 < d2."""
    eps = Fraction(1, 2)
    while CycloNumber(4 * eps * eps).compare_real(d2) >= 0:
        eps /= 2
    return eps


@dataclass
class AssembledGroup:
    recipe: ExtensionRecipe
    generators: dict
    graph: list            # (host piece, factor piece, amalgam order)
    pieces: list
    certificate: CombinationCertificate

    @property
    def backend(self) -> str:
        return "exact" if all(g.exact for g in self.generators.values()) else "float"

    def as_dict(self) -> dict:
        return {
            "recipe": self.recipe.to_json(),
            "backend": self.backend,
            "pieces": self.pieces,
            "graph": [{"host": h, "factor": f, "amalgam": t} for h, f, t in self.graph],
            "generators": {k: g.to_text() for k, g in self.generators.items()},
            "generator_classes": {k: str(classify(g)) for k, g in self.generators.items()},
            "certificate": self.certificate.as_dict(),
        }


def assemble(recipe: ExtensionRecipe, word_bound: int = DEFAULT_WORD_BOUND, tau: CycloNumber = TAU6) -> AssembledGroup:
    validate_recipe(recipe)
    try:
        return _assemble(recipe, word_bound, tau, exact=True)
    except FieldExtensionRequired:
        return _assemble(recipe, word_bound, tau, exact=False)


def _assemble(recipe: ExtensionRecipe, L: int, tau, exact: bool) -> AssembledGroup:
    r = recipe.resolved()
    cert = CombinationCertificate(level="bounded-word", word_bound=L)
    if isinstance(r.base, FiniteKind):
        base = _FinitePiece(r.base, exact)
    else:
        base = _LatticePiece(r.base, tau, None, exact)
    pieces = [base]
    graph = []
    items = [(RankOneKind("K1"), 1)] * r.free_rank + list(r.factors)
    for idx, (kind, t) in enumerate(items, start=1):
        att = _find_attachment(pieces, t, cert, L)
        host_i = att.host
        host = pieces[host_i]
        piece = _place_factor(kind, t, att, tau, cert, L, idx)
        host.attachments.append(att)
        pieces.append(piece)
        graph.append((host_i, idx, t))
    gens = {}
    for k, p in enumerate(pieces):
        label = "base" if k == 0 else f"factor{k}"
        for j, g in enumerate(p.gens, start=1):
            gens[f"{label}.{j}"] = g
    descr = [
        {"index": k, "kind": str(p.kind) if k == 0 or not p.lattice else p.kind.name, "lattice": p.lattice}
        for k, p in enumerate(pieces)
    ]
    if not cert.checks:
        cert.add("no-combination", True, "a single piece, nothing to combine")
    cert.raise_if_failed()
    return AssembledGroup(recipe, gens, graph, descr, cert)


def _find_attachment(pieces, t: int, cert: CombinationCertificate, L: int) -> _Attachment:
    """First piece (base first) and point where a factor can be glued along order t."""
    seen_any = False
    for i, p in enumerate(pieces):
        for k, cand in enumerate(p.candidate_points(t)):
            seen_any = True
            att = _attach(p, i, cand, t, cert, L)
            if att is not None:
                return att
            if k >= 12:
                break
    if not seen_any:
        raise RecipeInvariantViolation(f"no unused orbit with stabilizer of order exactly {t} is left on the left side")
    cert.add(f"edge{len(cert.curves) + 1}-host-words", False, "no radius found for the shared circle")
    cert.raise_if_failed()


def _attach(host, host_i: int, cand, t: int, cert: CombinationCertificate, L: int) -> _Attachment | None:
    tag = f"edge{len(cert.curves) + 1}"
    if host.lattice:
        c = cand
        mu = _primitive(t) if t > 1 else ONE
        rot = host.rotation(c, mu)
        # t0 in final coordinates and the chart h = (z - c) o conj^-1
        T = MoebiusMap(ONE, -c, ZERO, ONE)
        conj = host.conj
        if not conj.exact:
            T = T.to_float()
        chart = T @ conj.inverse()
        t0 = conj @ (rot.to_moebius() if conj.exact else rot.to_moebius().to_float()) @ conj.inverse()
        # local radius: precisely invariant under the stabilizer and clear of earlier disks
        d2 = host.min_orbit_distance2(c)
        delta = _rational_below_half(d2)
        while True:
            ok = True
            for c0, r0 in host.used:
                for x in host.orbit_near(c0, abs(c.to_complex() - c0.to_complex()) + float(delta + r0) + 1e-6):
                    if _abs2_real(x - c).compare_real(CycloNumber((delta + r0) ** 2)) < 0:
                        ok = False
            if ok:
                break
            delta /= 2
        host.used.append((c, delta))
        point = conj(c)
        # bounded-word check for the host side, exact in local coordinates
        bad = 0
        for w in host.words(L):
            x = w(c)
            if x == c:
                continue
            if _abs2_real(x - c).compare_real(CycloNumber(4 * delta * delta)) < 0:
                bad += 1
        cert.add(f"{tag}-host-words", bad == 0, f"{bad} host words of length <= {L} move the disk onto itself")
        return _Attachment(host_i, point, t0, chart, mu, delta, (c, delta))
    p, q, g = cand
    if t > 1:
        # use a generator of the full stabilizer with a primitive multiplier
        stab = host.stabilizer(p)
        g = next(x for x in stab if classify(x) == Elliptic(t))
    chart = _chart(p, q, host.exact)
    conj_t0 = chart @ g @ chart.inverse()
    lam = conj_t0.a / conj_t0.d
    # float search for the radius s of the shared circle |h| = s
    inv = chart.inverse().to_float()
    gens_f = [x.to_float() for x in host.elements]
    stab = host.stabilizer(p)
    s = Fraction(1, 4)
    for _ in range(30):
        reg = _image_region(inv, _Region(0j, float(s), True))
        good = True
        for x, xf in zip(host.elements, gens_f):
            img = _image_region(xf, reg)
            if not _member(x, stab) and not _disjoint(img, reg):
                good = False
                break
            for other in host.attachments:
                oreg = _image_region(other.chart.inverse().to_float(), _Region(0j, float(other.s), True))
                if not _disjoint(img, oreg):
                    good = False
                    break
            if not good:
                break
        if good and reg is not None and reg.inside:
            break
        s /= 2
    else:
        return None
    host.used_orbits.append(host.orbit(p))
    cert.add(
        f"{tag}-host-words",
        True,
        f"all {len(host.elements)} elements of the finite group outside <t> move the disk off itself",
    )
    return _Attachment(host_i, p, g, chart, lam, s)


def _shared_circle(att: _Attachment) -> Circle:
    """The circle |h| = s in final coordinates; exact when the chart is affine."""
    h = att.chart
    if h.exact and not h.c:
        # h(z) = (a z + b)/d with |a/d| = 1 in every case built here
        k = h.a / h.d
        if _abs2_real(k) == ONE:
            return Circle(-h.b / h.a, att.s)
    reg = _image_region(h.inverse().to_float(), _Region(0j, float(att.s), True))
    return Circle(reg.center, reg.radius)


def _place_factor(kind: RankOneKind, t: int, att: _Attachment, tau, cert: CombinationCertificate, L: int, idx: int):
    tag = f"edge{len(cert.curves) + 1}"
    piece = _LatticePiece(kind, tau, None, True)
    lam = att.lam
    lam_c = lam if isinstance(lam, CycloNumber) else None
    mu = lam_c.inverse() if lam_c is not None else None
    cand = next(piece.candidate_points(t), None)
    if cand is None:
        raise RecipeInvariantViolation(f"{kind.name} has no point with stabilizer of order {t}")
    c = cand
    mults = piece.stabilizer_mults(c)
    if mu is None:
        # float chart: pick the stabilizer multiplier nearest to 1/lam
        target = 1 / complex(lam)
        mu = min(mults, key=lambda m: abs(m.to_complex() - target))
    if mu not in mults:
        raise CertificateFailure(f"{tag}-multiplier", f"{mu} is not a rotation multiplier at the chosen point")
    d2 = piece.min_orbit_distance2(c)
    eps = _rational_below_half(d2)
    piece.used.append((c, eps))
    kappa = att.s * eps
    exact = att.chart.exact
    sigma = MoebiusMap(ZERO, CycloNumber(kappa), ONE, ZERO, normalize=False)
    T = MoebiusMap(ONE, -c, ZERO, ONE)
    if not exact:
        sigma, T = sigma.to_float(), T.to_float()
    phi = att.chart.inverse() @ sigma @ T
    piece.conj = phi
    piece.exact = exact
    # (a) orders and the identification of the amalgamated subgroup
    rot = piece.rotation(c, mu).to_moebius()
    if not exact:
        rot = rot.to_float()
    image = phi @ rot @ phi.inverse()
    expect = IDENTITY_CLASS if t == 1 else Elliptic(t)
    cert.add(
        f"{tag}-order",
        classify(att.t0) == expect and classify(image) == expect and image == att.t0,
        f"amalgamated generator is {classify(att.t0)} on both sides",
    )
    # (b) the shared circle |h| = s is invariant under <t0>
    ht = att.chart @ att.t0 @ att.chart.inverse()
    if exact:
        inv_ok = not ht.b and not ht.c and _abs2_real(ht.a / ht.d) == ONE
    else:
        inv_ok = abs(ht.b) < 1e-9 and abs(ht.c) < 1e-9 and abs(abs(ht.a / ht.d) - 1) < 1e-9
    cert.add(f"{tag}-circle-invariant", inv_ok, f"h t0 h^-1 = w -> {ht.a / ht.d}*w")
    # (c) factor words outside <t> move the factor side off itself (exact, local coordinates)
    bad = 0
    for w in piece.words(L):
        x = w(c)
        if x == c:
            continue
        if _abs2_real(x - c).compare_real(CycloNumber(4 * eps * eps)) < 0:
            bad += 1
    cert.add(f"{tag}-factor-words", bad == 0, f"{bad} factor words of length <= {L} move the disk onto itself")
    cert.add(f"{tag}-factor-orbit", CycloNumber(4 * eps * eps).compare_real(d2) < 0, f"(2 eps)^2 below min orbit distance {d2}")
    cert.curves.append(_shared_circle(att))
    cert.side_assignment.append(f"piece {att.host} owns |h| < {att.s}; factor {idx} ({kind.name}) owns |h| > {att.s}")
    return piece


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class GroupWord:
    letters: tuple = ()          # ((generator id, exponent), ...)

    @classmethod
    def parse(cls, text: str) -> GroupWord:
        """'F E F', 'E^3', 'A B^-1' and so on."""
        out = []
        for tok in text.replace("*", " ").replace("·", " ").split():
            if "^" in tok:
                name, e = tok.split("^")
                out.append((name, int(e)))
            else:
                out.append((tok, 1))
        return cls(tuple(out))

    def __str__(self):
        return " ".join(n if e == 1 else f"{n}^{e}" for n, e in self.letters) or "1"


def word_value(word: GroupWord, gens: dict) -> MoebiusMap:
    if isinstance(word, str):
        word = GroupWord.parse(word)
    exact = all(g.exact for g in gens.values())
    out = MoebiusMap.identity(exact)
    for name, e in word.letters:
        if name not in gens:
            raise UnknownGenerator(name)
        out = out @ gens[name] ** e
    return out


def is_torsion_witness(word: GroupWord, gens: dict) -> TransClass:
    return classify(word_value(word, gens))


# ---------------------------------------------------------------------------
# the maximal genus-two example


def ejemplo1_generators() -> dict:
    tau = TAU6
    return {
        "A": MoebiusMap(ONE, ONE, ZERO, ONE),
        "B": MoebiusMap(ONE, tau, ZERO, ONE),
        "E": MoebiusMap(tau, ZERO, ZERO, ONE),
        "F": MoebiusMap(ZERO, tau / 16, ONE, ZERO),
    }


# E x E^-1 and F x F^-1 for the generators a1 = A, b1 = B, a2 = FAF, b2 = FBF of G
EJEMPLO1_TABLE = {
    ("E", "a1"): "b1",
    ("E", "b1"): "b1 a1^-1",
    ("E", "a2"): "a2 b2^-1",
    ("E", "b2"): "a2",
    ("F", "a1"): "a2",
    ("F", "b1"): "b2",
    ("F", "a2"): "a1",
    ("F", "b2"): "b1",
}


def verify_ejemplo1() -> dict:
    K = ejemplo1_generators()
    A, B, E, F = K["A"], K["B"], K["E"], K["F"]
    Id = MoebiusMap.identity()
    steps = []

    def step(name, ok, **detail):
        steps.append({"check": name, "passed": bool(ok), **detail})
        return ok

    step("E A E^-1 = B", E @ A @ E.inverse() == B)
    step("E B E^-1 = B A^-1", E @ B @ E.inverse() == B @ A.inverse())
    step("F^2 = id", (F @ F) == Id)
    step("E^6 = id", E**6 == Id)
    step("F E F = E^-1", F @ E @ F == E.inverse())
    fp = fixed_points(F)
    zeta = CycloNumber.zeta_power(1)
    step("fixed points of F are +-zeta/4", {str(p) for p in fp} == {str(zeta / 4), str(-zeta / 4)}, fixed_points=[str(p) for p in fp])

    G = {"a1": A, "b1": B, "a2": F @ A @ F, "b2": F @ B @ F}
    table = []
    for (c, x), rhs in EJEMPLO1_TABLE.items():
        h = K[c]
        lhs = h @ G[x] @ h.inverse()
        ok = lhs == word_value(rhs, G)
        table.append({"conjugator": c, "generator": x, "word": rhs, "passed": ok})
    step("conjugation closure", all(r["passed"] for r in table), table=table)

    finite = group_closure([E, F])
    step("|<E,F>| = 12", len(finite) == 12, order=len(finite))
    classes = [classify(x) for x in finite]
    step("<E,F> elements are elliptic or identity", all(c.kind in ("Identity", "Elliptic") for c in classes))
    quotients_ok = all(
        classify(x @ y.inverse()).kind == "Elliptic" for i, x in enumerate(finite) for j, y in enumerate(finite) if i != j
    )
    step("distinct coset representatives (quotients are nontrivial elliptic)", quotients_ok)

    gens, cert = build_mdc_schottky(2, TAU6, Fraction(1, 4), [Fraction(0)])
    sv = shortest_vector2(TAU6)
    step(
        "G is an MDC-Schottky group of rank 2",
        cert.passed and gens[2] == G["a2"] and gens[3] == G["b2"],
        shortest_vector=str(sv.c0),
        diameter="1/2",
        certificate=cert.as_dict(),
    )
    EF = E @ F
    dihedral = E**6 == Id and F @ F == Id and EF @ EF == Id and len(finite) == 12
    step("quotient relations E^6 = F^2 = (EF)^2 = 1", dihedral)
    passed = all(s["passed"] for s in steps)
    return {
        "passed": passed,
        "index": len(finite) if passed else None,
        "quotient": "dihedral of order 12" if passed else None,
        "generators": {k: v.to_text() for k, v in K.items()},
        "steps": steps,
    }
