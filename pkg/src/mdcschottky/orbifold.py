"""Orbifold signatures and the finite Moebius group kinds."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True, order=True)
class OrbifoldSignature:
    """(genus, k; m_1, ..., m_k) with the cone orders kept sorted."""

    genus: int
    cone_orders: tuple[int, ...] = ()

    def __post_init__(self):
        cones = tuple(sorted(int(m) for m in self.cone_orders))
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if any(m < 2 for m in cones):
            raise ValueError("cone orders must be >= 2")
        object.__setattr__(self, "cone_orders", cones)

    @property
    def k(self) -> int:
        return len(self.cone_orders)

    def euler_char(self) -> Fraction:
        return 2 - 2 * self.genus - sum((1 - Fraction(1, m) for m in self.cone_orders), Fraction(0))

    def is_triangle(self) -> bool:
        return self.genus == 0 and self.k == 3

    def __str__(self) -> str:
        return f"({self.genus},{self.k};{','.join(map(str, self.cone_orders))})"

    @classmethod
    def parse(cls, text: str, r: int | None = None, n: int | None = None) -> OrbifoldSignature:
        """Parse '(g,k;m1,...)'; 'r' and 'n' may appear as symbols."""
        m = re.fullmatch(r"\s*\(\s*([^,;]+)\s*,\s*(\d+)\s*;(.*)\)\s*", text)
        if not m:
            raise ValueError(f"bad signature {text!r}")

        def val(tok):
            tok = tok.strip()
            if tok == "r":
                if r is None:
                    raise ValueError("signature uses r; pass a value")
                return r
            if tok == "n":
                if n is None:
                    raise ValueError("signature uses n; pass a value")
                return n
            return int(tok)

        genus = val(m.group(1))
        body = m.group(3).strip().strip("-").strip()
        cones = tuple(val(t) for t in body.split(",")) if body else ()
        if len(cones) != int(m.group(2)):
            raise ValueError(f"signature {text!r}: k does not match the number of cone orders")
        return cls(genus, cones)


def euler_char(sig: OrbifoldSignature) -> Fraction:
    return sig.euler_char()


FINITE_NAMES = ("Trivial", "Cyclic", "Dihedral", "A4", "S4", "A5")


@dataclass(frozen=True)
class FiniteKind:
    """A finite Moebius group up to conjugacy; Dihedral(n) has order 2n."""

    name: str
    n: int | None = None

    def __post_init__(self):
        if self.name not in FINITE_NAMES:
            raise ValueError(f"unknown finite kind {self.name!r}")
        if self.name in ("Cyclic", "Dihedral"):
            if self.n is None or self.n < 2:
                raise ValueError(f"{self.name} needs n >= 2")
        elif self.n is not None:
            raise ValueError(f"{self.name} takes no parameter")

    @property
    def order(self) -> int:
        return {"Trivial": 1, "Cyclic": self.n, "Dihedral": 2 * (self.n or 0), "A4": 12, "S4": 24, "A5": 60}[self.name]

    def sphere_cones(self) -> tuple[int, ...]:
        """Cone orders of the quotient sphere orbifold."""
        if self.name == "Trivial":
            return ()
        if self.name == "Cyclic":
            return (self.n, self.n)
        if self.name == "Dihedral":
            return (2, 2, self.n)
        return {"A4": (2, 3, 3), "S4": (2, 3, 4), "A5": (2, 3, 5)}[self.name]

    def element_orders(self) -> set[int]:
        def divisors(m):
            return {d for d in range(2, m + 1) if m % d == 0}

        if self.name == "Trivial":
            return set()
        if self.name == "Cyclic":
            return divisors(self.n)
        if self.name == "Dihedral":
            return divisors(self.n) | {2}
        return {"A4": {2, 3}, "S4": {2, 3, 4}, "A5": {2, 3, 5}}[self.name]

    def __str__(self):
        return self.name if self.n is None else f"{self.name}({self.n})"

    @classmethod
    def parse(cls, text: str) -> FiniteKind:
        m = re.fullmatch(r"\s*(\w+)\s*(?:\(\s*(\d+)\s*\))?\s*", text)
        if not m:
            raise ValueError(f"bad finite kind {text!r}")
        return cls(m.group(1), int(m.group(2)) if m.group(2) else None)
