"""Orbifold signature calculus: Euler characteristics, Riemann-Hurwitz balance,
star-recipe signatures and the printed signature tables."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .catalog import POINT_GROUP_ORDER, catalog_decomposition, quotient_signature
from .errors import RecipeInvariantViolation, UnknownFamily
from .orbifold import FiniteKind, OrbifoldSignature, euler_char

__all__ = [
    "OrbifoldSignature",
    "FiniteKind",
    "euler_char",
    "rh_check",
    "admissible",
    "genus_from_master",
    "catalog_signature",
    "star_signature",
    "Section6Params",
    "SignatureRow",
    "FAMILIES",
    "family_slots",
    "family_genus",
    "golden_rows",
    "enumerate_section6",
    "signature_report",
    "g2_signatures",
    "G2Entry",
]


def rh_check(g: int, H_order: int, sig: OrbifoldSignature) -> bool:
    """2 - 2g == |H| * chi(sig), exactly."""
    return Fraction(2 - 2 * g) == H_order * sig.euler_char()


def admissible(g: int, H_order: int, sig: OrbifoldSignature) -> bool:
    """RH balance plus the exclusion of genus-zero triangle quotients (Fuchsian of the first kind)."""
    return rh_check(g, H_order, sig) and not sig.is_triangle()


def genus_from_master(K0_order: int, u: int, d_list) -> Fraction:
    return K0_order * (Fraction(u) + sum((Fraction(1, d) for d in d_list), Fraction(0)))


@lru_cache(maxsize=None)
def catalog_signature(name: str) -> OrbifoldSignature:
    """Quotient signature of a rank-one catalog group, computed from its wallpaper decomposition."""
    return quotient_signature(catalog_decomposition(name))


def _remove_one(cones: list[int], t: int, where: str) -> None:
    try:
        cones.remove(t)
    except ValueError:
        raise RecipeInvariantViolation(f"{where} has no cone point of order {t} to amalgamate along") from None


def star_signature(base: FiniteKind, factors=(), free_rank: int = 0) -> OrbifoldSignature:
    """Signature of base * free_rank copies of Z^2, amalgamated with rank-one factors.

    ``factors`` is a sequence of (catalog name, t); t == 1 is a free product, otherwise
    the factor is glued along a cyclic subgroup of order t, which removes one cone point
    of order t from each side."""
    genus = free_rank
    base_cones = list(base.sphere_cones())
    extra: list[int] = []
    for name, t in factors:
        sig = catalog_signature(name)
        fc = list(sig.cone_orders)
        if t != 1:
            _remove_one(base_cones, t, str(base))
            _remove_one(fc, t, name)
        genus += sig.genus
        extra += fc
    return OrbifoldSignature(genus, tuple(base_cones + extra))


# ---------------------------------------------------------------------------
# the six families

FAMILIES = ("Trivial", "Cyclic", "Dihedral", "A4", "A5", "S4")
EUCLIDEAN_ORDERS = (2, 3, 4, 6)


@dataclass(frozen=True)
class Slot:
    letter: str
    factor: str      # catalog name
    max_count: int


def family_slots(kind: FiniteKind) -> list[Slot]:
    n = kind.n
    if kind.name == "Trivial":
        return []
    if kind.name == "Cyclic":
        return [Slot("a", f"K{n}", 2 if n in EUCLIDEAN_ORDERS else 0)]
    if kind.name == "Dihedral":
        return [Slot("a", f"K{n}", 1 if n in EUCLIDEAN_ORDERS else 0), Slot("b", "K2", 2)]
    if kind.name == "A4":
        return [Slot("a", "K3", 2), Slot("b", "K2", 1)]
    if kind.name == "A5":
        return [Slot("a", "K3", 1), Slot("b", "K2", 1)]
    if kind.name == "S4":
        return [Slot("a", "K4", 1), Slot("b", "K2", 1), Slot("c", "K3", 1)]
    raise UnknownFamily(kind.name)


def family_genus(kind: FiniteKind, r: int, a: int = 0, b: int = 0, c: int = 0) -> int:
    """The per-family genus polynomial."""
    n = kind.n
    return {
        "Trivial": lambda: r,
        "Cyclic": lambda: n * r + a,
        "Dihedral": lambda: 2 * n * r + 2 * a + b * n,
        "A4": lambda: 12 * r + 4 * a + 6 * b,
        "A5": lambda: 60 * r + 20 * a + 30 * b,
        "S4": lambda: 24 * r + 6 * a + 12 * b + 8 * c,
    }[kind.name]()


@dataclass(frozen=True)
class Section6Params:
    base: FiniteKind
    r: int
    a: int = 0
    b: int = 0
    c: int = 0

    def counts(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}

    def factors(self) -> list[tuple[str, int]]:
        out = []
        for s in family_slots(self.base):
            k = self.counts()[s.letter]
            if k > s.max_count:
                raise RecipeInvariantViolation(f"{self.base}: {s.letter}={k} exceeds {s.max_count}")
            if k:
                out += [(s.factor, POINT_GROUP_ORDER[s.factor])] * k
        return out

    @property
    def u(self) -> int:
        return self.r

    @property
    def d_list(self) -> list[int]:
        return [t for _, t in self.factors()]

    def cell(self) -> tuple:
        return (self.a, self.b, self.c)


@dataclass
class SignatureRow:
    params: Section6Params
    genus: int
    signature: OrbifoldSignature          # computed from the recipe
    H_order: int
    genus_master: Fraction
    printed: OrbifoldSignature | None = None
    printed_raw: str = ""
    note: str = ""

    @property
    def rh_ok(self) -> bool:
        return rh_check(self.genus, self.H_order, self.signature)

    @property
    def printed_rh_ok(self) -> bool | None:
        return None if self.printed is None else rh_check(self.genus, self.H_order, self.printed)

    @property
    def matches_printed(self) -> bool | None:
        return None if self.printed is None else self.printed == self.signature

    def as_dict(self) -> dict:
        p = self.params
        return {
            "family": p.base.name,
            "n": p.base.n,
            "r": p.r,
            "a": p.a,
            "b": p.b,
            "c": p.c,
            "genus": self.genus,
            "genus_master": str(self.genus_master),
            "H_order": self.H_order,
            "signature": str(self.signature),
            "printed": None if self.printed is None else str(self.printed),
            "matches_printed": self.matches_printed,
            "rh_ok": self.rh_ok,
            "printed_rh_ok": self.printed_rh_ok,
            "note": self.note,
        }


@dataclass(frozen=True)
class GoldenRow:
    family: str
    n_cond: str
    cell: tuple           # (a, b, c) with None for absent slots
    printed: str
    raw: str
    note: str

    def applies_to(self, n: int | None) -> bool:
        if self.n_cond in ("-", "*"):
            return True
        if self.n_cond == "even":
            return n % 2 == 0
        return n in {int(x) for x in self.n_cond.split(",")}


@lru_cache(maxsize=None)
def golden_rows() -> tuple[GoldenRow, ...]:
    text = resources.files("mdcschottky").joinpath("data/signature_tables.txt").read_text()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fam, ncond, a, b, c, printed, raw, note = (x.strip() for x in line.split("|"))
        cell = tuple(None if x == "-" else int(x) for x in (a, b, c))
        rows.append(GoldenRow(fam, ncond, cell, printed, "" if raw == "-" else raw, "" if note == "-" else note))
    return tuple(rows)


def _family_kinds(family, n_max: int) -> list[FiniteKind]:
    if isinstance(family, FiniteKind):
        return [family]
    name = str(family).strip()
    if "(" in name:
        try:
            return [FiniteKind.parse(name)]
        except ValueError:
            raise UnknownFamily(name) from None
    if name not in FAMILIES:
        raise UnknownFamily(name)
    if name in ("Cyclic", "Dihedral"):
        return [FiniteKind(name, n) for n in range(2, n_max + 1)]
    return [FiniteKind(name)]


def _h_order(kind: FiniteKind, factors) -> int:
    return math.lcm(kind.order, *(POINT_GROUP_ORDER[f] for f, _ in factors))


def _make_row(params: Section6Params, golden: GoldenRow | None = None) -> SignatureRow:
    kind = params.base
    fac = params.factors()
    sig = star_signature(kind, fac, params.r)
    row = SignatureRow(
        params=params,
        genus=family_genus(kind, params.r, params.a, params.b, params.c),
        signature=sig,
        H_order=_h_order(kind, fac),
        genus_master=genus_from_master(kind.order, params.u, params.d_list),
    )
    if golden is not None:
        row.printed = OrbifoldSignature.parse(golden.printed, r=params.r, n=kind.n)
        row.printed_raw = golden.raw
        row.note = golden.note
    return row


def _printed_cells(kind: FiniteKind):
    for g in golden_rows():
        if g.family == kind.name and g.applies_to(kind.n):
            a, b, c = (x or 0 for x in g.cell)
            yield (a, b, c), g


def enumerate_section6(family, r_max: int = 10, n_max: int = 12) -> list[SignatureRow]:
    """Rows for the printed parameter cells of a family, r = 0..r_max.

    For Cyclic and Dihedral given without a parameter, n runs over 2..n_max."""
    out = []
    for kind in _family_kinds(family, n_max):
        for (a, b, c), g in _printed_cells(kind):
            for r in range(r_max + 1):
                out.append(_make_row(Section6Params(kind, r, a, b, c), g))
    return out


def _all_cells(kind: FiniteKind):
    slots = family_slots(kind)
    ranges = {s.letter: range(s.max_count + 1) for s in slots}
    for a in ranges.get("a", [0]):
        for b in ranges.get("b", [0]):
            for c in ranges.get("c", [0]):
                yield (a, b, c)


@dataclass
class SignatureReport:
    rows: list[SignatureRow]
    discrepancies: list[dict] = field(default_factory=list)
    notes: list[dict] = field(default_factory=list)
    uncovered: list[dict] = field(default_factory=list)
    exclusion_violations: list[dict] = field(default_factory=list)

    @property
    def conservation_ok(self) -> bool:
        return all(r.rh_ok for r in self.rows)

    @property
    def master_ok(self) -> bool:
        return all(r.genus_master == r.genus for r in self.rows)


def _symbolic_r(sig: OrbifoldSignature) -> str:
    """Render a free-rank-zero signature with the genus written as r."""
    body = str(sig).split(",", 1)[1]
    return "(r," + body if sig.genus == 0 else f"(r+{sig.genus}," + body


def signature_report(families=FAMILIES, r_max: int = 10, n_max: int = 12) -> SignatureReport:
    """All printed rows, plus the printed-versus-computed diff, cell notes and uncovered cells."""
    rows: list[SignatureRow] = []
    rep = SignatureReport(rows)
    for fam in families:
        for kind in _family_kinds(fam, n_max):
            printed = dict(_printed_cells(kind))
            for cell, g in printed.items():
                probe = _make_row(Section6Params(kind, 1, *cell), g)
                if not probe.matches_printed:
                    rep.discrepancies.append(
                        {
                            "family": str(kind),
                            "a": cell[0],
                            "b": cell[1],
                            "c": cell[2],
                            "printed": g.printed,
                            "computed": _symbolic_r(star_signature(kind, probe.params.factors(), 0)),
                            "printed_rh_balanced": probe.printed_rh_ok,
                            "computed_rh_balanced": probe.rh_ok,
                        }
                    )
                if g.note:
                    rep.notes.append({"family": str(kind), "a": cell[0], "b": cell[1], "c": cell[2], "raw": g.raw, "note": g.note})
            for cell in _all_cells(kind):
                if cell not in printed:
                    sig = star_signature(kind, Section6Params(kind, 0, *cell).factors(), 0)
                    rep.uncovered.append(
                        {"family": str(kind), "a": cell[0], "b": cell[1], "c": cell[2], "computed": _symbolic_r(sig)}
                    )
            rows += enumerate_section6(kind, r_max)
    for r in rows:
        if r.genus >= 2 and r.signature.is_triangle():
            rep.exclusion_violations.append(r.as_dict())
    return rep


# ---------------------------------------------------------------------------
# genus two

@dataclass(frozen=True)
class G2Entry:
    case: str
    d: int | None
    signature: OrbifoldSignature    # printed
    H_order: int
    computed: OrbifoldSignature

    @property
    def rh_ok(self) -> bool:
        return rh_check(2, self.H_order, self.signature)

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "d": self.d,
            "signature": str(self.signature),
            "H_order": self.H_order,
            "computed": str(self.computed),
            "matches": self.signature == self.computed,
            "rh_ok": self.rh_ok,
        }


_G2_PRINTED = {
    ("2", 2): "(0,6;2,2,2,2,2,2)",
    ("2", 3): "(0,4;3,3,3,3)",
    ("2", 4): "(0,4;2,2,4,4)",
    ("2", 6): "(0,4;2,2,3,3)",
    ("3", None): "(1,2;2,2)",
    ("4", 2): "(0,5;2,2,2,2,2)",
    ("4", 3): "(0,4;3,3,2,2)",
    ("4", 4): "(0,4;2,2,2,4)",
    ("4", 6): "(0,4;2,2,2,3)",
}


def g2_signatures() -> list[G2Entry]:
    """The printed list for genus two with a nontrivial loop stabilizer.

    Each entry also carries the signature recomputed from its recipe: two copies of K_d
    glued along Z_d (case 2), K1 free with a swapping involution (case 3), or the
    dihedral group of order 2d glued to K_d along Z_d (case 4)."""
    out = []
    for (case, d), text in _G2_PRINTED.items():
        if case == "2":
            kind, fac = FiniteKind("Cyclic", d), [(f"K{d}", d)] * 2
        elif case == "3":
            kind, fac = FiniteKind("Cyclic", 2), [("K1", 1)]
        else:
            kind, fac = FiniteKind("Dihedral", d), [(f"K{d}", d)]
        out.append(G2Entry(case, d, OrbifoldSignature.parse(text), _h_order(kind, fac), star_signature(kind, fac)))
    return out
