"""Symmetry cases of MDC-handlebodies, the maximal-order computation and structure trees."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .assembly import ExtensionRecipe, G2Base, validate_recipe
from .catalog import POINT_GROUP_ORDER, RankOneKind
from .errors import RecipeInvariantViolation
from .orbifold import FiniteKind

EUCLIDEAN = (2, 3, 4, 6)
# cone orders of the Euclidean quotient torus/(T x| C_k)
TORUS_CONES = {1: (), 2: (2, 2, 2, 2), 3: (3, 3, 3), 4: (2, 4, 4), 6: (2, 3, 6)}


@dataclass(frozen=True)
class SymmetryCase:
    case_id: str                 # 1.1 ... 3.2
    group: str
    order: int
    orbit_data: tuple = ()       # ((orbit size, stabilizer order), ...) of the boundary loops
    u: int = 0                   # loop orbits with trivial stabilizer
    note: str = ""

    def sort_key(self):
        return (self.case_id, self.group, self.orbit_data, self.u)

    def as_dict(self):
        return {
            "case": self.case_id,
            "group": self.group,
            "order": self.order,
            "orbits": [list(o) for o in self.orbit_data],
            "u": self.u,
            "note": self.note,
        }


def _dihedral_name(n: int) -> str:
    return f"Dihedral(order {2 * n})"


def _invariant_loop_cases(g: int) -> list[SymmetryCase]:
    """An invariant loop and no invariant component (cases 1.x for g = 2, 2.x for g >= 3)."""
    top = "1" if g == 2 else "2"
    out = [SymmetryCase(f"{top}.1", "Trivial", 1)]
    out += [SymmetryCase(f"{top}.1", f"Cyclic({d})", d, note="keeps both sides invariant") for d in EUCLIDEAN]
    if g == 2 or g % 2 == 0:
        # an involution exchanging the two sides needs sides of equal genus
        out.append(SymmetryCase(f"{top}.2", "Cyclic(2)", 2, note="exchanges the two sides"))
        for n in EUCLIDEAN:
            out.append(
                SymmetryCase(f"{top}.3", _dihedral_name(n), 2 * n, note=f"index-two cyclic subgroup of order {n} keeps each side")
            )
    return out


def _sphere_kinds(max_order: int):
    for n in range(2, max_order + 1):
        yield FiniteKind("Cyclic", n)
    for n in range(2, max_order // 2 + 1):
        yield FiniteKind("Dihedral", n)
    for name in ("A4", "S4", "A5"):
        if FiniteKind(name).order <= max_order:
            yield FiniteKind(name)


def _cone_subsets(cones):
    """Distinct sub-multisets of the usable cone orders."""
    usable = sorted(m for m in cones if m in EUCLIDEAN)
    seen = set()
    for k in range(len(usable) + 1):
        for combo in itertools.combinations(usable, k):
            if combo not in seen:
                seen.add(combo)
                yield combo


def _genus_zero_cases(g: int) -> list[SymmetryCase]:
    """Invariant planar component: g = |H| (u + sum 1/d_j)."""
    out = []
    for kind in _sphere_kinds(6 * g):
        H = kind.order
        for used in _cone_subsets(kind.sphere_cones()):
            rest = Fraction(g, H) - sum((Fraction(1, d) for d in used), Fraction(0))
            if rest < 0 or rest.denominator != 1:
                continue
            u = int(rest)
            loops = u * H + sum(H // d for d in used)
            if loops < 3:
                continue
            orbits = tuple([(H, 1)] * u + [(H // d, d) for d in used])
            group = _dihedral_name(kind.n) if kind.name == "Dihedral" else str(kind)
            out.append(SymmetryCase("3.1", group, H, orbits, u))
    return out


@lru_cache(maxsize=None)
def _norms(k: int, limit: int) -> frozenset:
    """Orders of the C_k-invariant finite translation groups of the torus, up to limit."""
    if k in (1, 2):
        return frozenset(range(1, limit + 1))
    out = set()
    r = int(math.isqrt(limit)) + 2
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            v = a * a + b * b if k == 4 else a * a + a * b + b * b
            if 0 < v <= limit:
                out.add(v)
    return frozenset(out)


def _genus_one_cases(g: int) -> list[SymmetryCase]:
    """Invariant genus-one component: H = T x| C_k and g = 1 + |H| (u + sum 1/d_j)."""
    out = []
    for k, cones in TORUS_CONES.items():
        limit = 6 * (g - 1)
        for m in sorted(_norms(k, limit)):
            H = m * k
            if H > 6 * (g - 1):
                break
            for used in _cone_subsets(cones):
                rest = Fraction(g - 1, H) - sum((Fraction(1, d) for d in used), Fraction(0))
                if rest < 0 or rest.denominator != 1:
                    continue
                u = int(rest)
                if u == 0 and not used:
                    continue
                orbits = tuple([(H, 1)] * u + [(H // d, d) for d in used])
                out.append(SymmetryCase("3.2", f"T{m} x| C{k}", H, orbits, u, note=f"translations of order {m}"))
    return out


def admissible_cases(g: int) -> list[SymmetryCase]:
    if g < 2:
        raise ValueError("genus must be at least 2")
    cases = _invariant_loop_cases(g)
    if g >= 3:
        cases += _genus_zero_cases(g) + _genus_one_cases(g)
    return sorted(set(cases), key=SymmetryCase.sort_key)


def admissible_orders(g: int) -> dict:
    out: dict[str, set] = {}
    for c in admissible_cases(g):
        out.setdefault(c.case_id, set()).add(c.order)
    return {k: sorted(v) for k, v in sorted(out.items())}


def max_index(g: int) -> tuple[int, SymmetryCase]:
    """Largest |H| over the admissible cases; ties go to the lexicographically first case."""
    cases = admissible_cases(g)
    best = max(c.order for c in cases)
    witness = min((c for c in cases if c.order == best), key=SymmetryCase.sort_key)
    bound = 12 * (g - 1)
    assert best <= bound, (g, best)
    assert (best == bound) == (g == 2), (g, best)
    return best, witness


@dataclass
class BoundRow:
    g: int
    max_order: int
    bound: int
    witness: SymmetryCase
    witnesses_at_max: list = field(default_factory=list)

    @property
    def strict(self) -> bool:
        return self.max_order < self.bound

    def as_dict(self):
        return {
            "g": self.g,
            "max_order": self.max_order,
            "bound": self.bound,
            "strict": self.strict,
            "witness_case": self.witness.case_id,
            "witness_group": self.witness.group,
            "witnesses_at_max": sorted({f"{w.case_id} {w.group}" for w in self.witnesses_at_max}),
        }


def verify_bound(g_max: int = 30, g_min: int = 2) -> list[BoundRow]:
    rows = []
    for g in range(g_min, g_max + 1):
        order, w = max_index(g)
        tops = [c for c in admissible_cases(g) if c.order == order]
        rows.append(BoundRow(g, order, 12 * (g - 1), w, tops))
    return rows


@lru_cache(maxsize=None)
def golden_max_index() -> dict:
    text = resources.files("mdcschottky").joinpath("data/max_index_golden.txt").read_text()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            g, order, case, group = (x.strip() for x in line.split("|", 3))
            out[int(g)] = (int(order), case, group)
    return out


# ---------------------------------------------------------------------------
# structure trees


@dataclass
class StructureTree:
    genera: list                 # genus label per vertex
    edges: list                  # (i, j) pairs
    invariant: tuple             # ("vertex", i) or ("edge", (i, j))
    orbits: list = field(default_factory=list)   # (leaf count, stabilizer order) per factor

    @property
    def total_genus(self) -> int:
        return sum(self.genera)

    def is_tree(self) -> bool:
        n = len(self.genera)
        if len(self.edges) != n - 1:
            return False
        if n == 0:
            return False
        adj = {i: set() for i in range(n)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == n

    def as_dict(self):
        return {
            "vertices": list(self.genera),
            "edges": [list(e) for e in self.edges],
            "invariant": [self.invariant[0], list(self.invariant[1]) if isinstance(self.invariant[1], tuple) else self.invariant[1]],
            "orbits": [list(o) for o in self.orbits],
            "total_genus": self.total_genus,
        }


def recipe_to_tree(recipe: ExtensionRecipe) -> StructureTree:
    """Star tree: a central piece for the base and one leaf per loop of each factor orbit."""
    validate_recipe(recipe)
    r = recipe.resolved()
    base = r.base
    if isinstance(base, FiniteKind):
        H, center_genus = base.order, 0
    elif isinstance(base, RankOneKind):
        H, center_genus = POINT_GROUP_ORDER[base.name], 1
    else:
        raise RecipeInvariantViolation(f"unsupported base {base!r}")
    items = [(RankOneKind("K1"), 1)] * r.free_rank + list(r.factors)
    orbits = []
    for kind, t in items:
        if POINT_GROUP_ORDER[kind.name] != t:
            raise RecipeInvariantViolation(
                f"{kind.name} glued along order {t}: the loop stabilizer must be the whole point group "
                f"(order {POINT_GROUP_ORDER[kind.name]}) for a star tree"
            )
        if H % t:
            raise RecipeInvariantViolation(f"amalgam order {t} does not divide |H| = {H}")
        orbits.append((H // t, t))
    leaves = sum(n for n, _ in orbits)
    genera = [center_genus] + [1] * leaves
    edges = [(0, i) for i in range(1, leaves + 1)]
    if center_genus == 0 and leaves == 1:
        return StructureTree([1], [], ("vertex", 0), orbits)
    if center_genus == 0 and leaves == 2:
        return StructureTree([1, 1], [(0, 1)], ("edge", (0, 1)), orbits)
    return StructureTree(genera, edges, ("vertex", 0), orbits)


def recipe_genus(recipe: ExtensionRecipe) -> int:
    """Genus from the master formula for star recipes."""
    return recipe_to_tree(recipe).total_genus


__all__ = [
    "SymmetryCase",
    "admissible_cases",
    "admissible_orders",
    "max_index",
    "verify_bound",
    "BoundRow",
    "golden_max_index",
    "StructureTree",
    "recipe_to_tree",
    "recipe_genus",
    "G2Base",
]
