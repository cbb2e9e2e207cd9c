"""Projective 2x2 Moebius maps over Q(zeta_12) or floating complex numbers,
plus the Euclidean affine maps z -> a*z + b used by the wallpaper catalog."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import BackendMismatch, FieldExtensionRequired, IdentityInput, SymbolicMultiplierViolation
from .numerics import (
    DEFAULT_EPS,
    ONE,
    ZERO,
    CycloNumber,
    Symbolic,
    TauScalar,
    cyclo_sqrt,
    fclose,
    root_of_unity_order,
)

MAX_EXACT_ORDER = 24


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()
ExtendedPoint = Union[CycloNumber, complex, _Infinity]


@dataclass(frozen=True)
class TransClass:
    kind: str                 # Identity | Parabolic | Elliptic | Loxodromic
    order: int | None = None  # Elliptic only; None means infinite order

    def __str__(self):
        if self.kind == "Elliptic":
            return f"Elliptic({self.order if self.order is not None else 'irrational'})"
        return self.kind


IDENTITY_CLASS = TransClass("Identity")
PARABOLIC = TransClass("Parabolic")
LOXODROMIC = TransClass("Loxodromic")


def Elliptic(order):
    return TransClass("Elliptic", order)


def _is_exact(x) -> bool:
    return isinstance(x, (CycloNumber, int, Fraction))


class MoebiusMap:
    """z -> (a z + b)/(c z + d), equal up to scaling of the matrix."""

    __slots__ = ("a", "b", "c", "d", "exact", "normalized", "_key")

    def __init__(self, a, b, c, d, normalize: bool = True):
        entries = (a, b, c, d)
        if all(_is_exact(x) for x in entries):
            entries = tuple(CycloNumber.coerce(x) for x in entries)
            exact = True
        else:
            if any(isinstance(x, CycloNumber) for x in entries):
                entries = tuple(x.to_complex() if isinstance(x, CycloNumber) else complex(x) for x in entries)
            else:
                entries = tuple(complex(x) if not isinstance(x, Fraction) else complex(float(x)) for x in entries)
            exact = False
        det = entries[0] * entries[3] - entries[1] * entries[2]
        if (exact and not det) or (not exact and abs(det) == 0.0):
            raise ValueError("degenerate Moebius matrix (ad - bc = 0)")
        normalized = False
        if normalize:
            if exact:
                s = cyclo_sqrt(det)
                if s is not None:
                    entries = tuple(x / s for x in entries)
                    normalized = True
            else:
                s = cmath.sqrt(det)
                entries = tuple(x / s for x in entries)
                normalized = True
        self.a, self.b, self.c, self.d = entries
        self.exact = exact
        self.normalized = normalized
        self._key = None

    # constructors -------------------------------------------------------
    @classmethod
    def identity(cls, exact: bool = True) -> MoebiusMap:
        return cls(1, 0, 0, 1) if exact else cls(1 + 0j, 0j, 0j, 1 + 0j)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def backend(self) -> str:
        return "exact" if self.exact else "float"

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def trace_sq_over_det(self):
        t = self.trace()
        return t * t / self.det()

    # group law ---------------------------------------------------------
    def __matmul__(self, other: MoebiusMap) -> MoebiusMap:
        return compose(self, other)

    def inverse(self) -> MoebiusMap:
        return MoebiusMap(self.d, -self.b, -self.c, self.a, normalize=False)._carry_norm(self)

    def _carry_norm(self, src: MoebiusMap) -> MoebiusMap:
        self.normalized = src.normalized
        return self

    def __pow__(self, n: int) -> MoebiusMap:
        if n < 0:
            return self.inverse() ** (-n)
        result = MoebiusMap.identity(self.exact)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def to_float(self) -> MoebiusMap:
        if not self.exact:
            return self
        return MoebiusMap(*(x.to_complex() for x in self.entries), normalize=False)

    # projective equality -------------------------------------------------
    def key(self):
        """Hashable canonical form (exact backend): divide by the first nonzero entry."""
        if self._key is None:
            if not self.exact:
                raise TypeError("float Moebius maps have no exact key; use approx_key")
            lead = next(x for x in self.entries if x)
            inv = lead.inverse()
            self._key = tuple(x * inv for x in self.entries)
        return self._key

    def approx_key(self, digits: int = 7):
        f = self.to_float()
        lead = max(f.entries, key=abs)
        # fix the projective scale by making the largest entry real positive
        s = lead / abs(lead)
        n = math.sqrt(sum(abs(x) ** 2 for x in f.entries))
        vals = [x / (s * n) for x in f.entries]
        return tuple((round(v.real, digits) + 0.0, round(v.imag, digits) + 0.0) for v in vals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        if self.exact and other.exact:
            p, q = self.entries, other.entries
            return all(not (p[i] * q[j] - p[j] * q[i]) for i in range(4) for j in range(i + 1, 4))
        return approx_equal(self, other)

    def __hash__(self):
        return hash(self.key())

    def is_identity(self, eps: float | None = None) -> bool:
        if self.exact:
            return not self.b and not self.c and self.a == self.d
        eps = DEFAULT_EPS if eps is None else eps
        f = self
        scale = max(abs(x) for x in f.entries)
        return abs(f.b) <= eps * scale and abs(f.c) <= eps * scale and abs(f.a - f.d) <= eps * scale

    # action on the sphere ---------------------------------------------------
    def __call__(self, z):
        if z is INFINITY:
            if (self.exact and not self.c) or (not self.exact and self.c == 0):
                return INFINITY
            return self.a / self.c
        if self.exact:
            z = CycloNumber.coerce(z)
            den = self.c * z + self.d
            if not den:
                return INFINITY
            return (self.a * z + self.b) / den
        z = complex(z.to_complex() if isinstance(z, CycloNumber) else z)
        den = self.c * z + self.d
        if den == 0:
            return INFINITY
        return (self.a * z + self.b) / den

    def __repr__(self):
        if self.exact:
            body = "; ".join(str(x) for x in self.entries)
        else:
            body = ", ".join(f"{x:.6g}" for x in self.entries)
        return f"MoebiusMap[{self.backend}]({body})"

    def to_text(self) -> str:
        if self.exact:
            return "exact|" + "|".join(str(x) for x in self.entries)
        return "float|" + "|".join(f"{x.real!r},{x.imag!r}" for x in self.entries)

    @classmethod
    def from_text(cls, text: str) -> MoebiusMap:
        tag, *parts = text.split("|")
        if len(parts) != 4:
            raise ValueError(f"bad Moebius text {text!r}")
        if tag == "exact":
            return cls(*(CycloNumber.parse(p) for p in parts), normalize=False)
        if tag == "float":
            vals = []
            for p in parts:
                re, im = p.split(",")
                vals.append(complex(float(re), float(im)))
            return cls(*vals, normalize=False)
        raise ValueError(f"unknown backend tag {tag!r}")


def approx_equal(f: MoebiusMap, g: MoebiusMap, eps: float | None = None) -> bool:
    eps = DEFAULT_EPS if eps is None else eps
    p, q = f.to_float().entries, g.to_float().entries
    sp = math.sqrt(sum(abs(x) ** 2 for x in p))
    sq = math.sqrt(sum(abs(x) ** 2 for x in q))
    return all(abs(p[i] * q[j] - p[j] * q[i]) <= eps * sp * sq for i in range(4) for j in range(i + 1, 4))


def compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    if f.exact != g.exact:
        raise BackendMismatch("cannot compose exact and float maps; call to_float() first")
    a = f.a * g.a + f.b * g.c
    b = f.a * g.b + f.b * g.d
    c = f.c * g.a + f.d * g.c
    d = f.c * g.b + f.d * g.d
    out = MoebiusMap(a, b, c, d, normalize=False)
    out.normalized = f.normalized and g.normalized
    return out


def _elliptic_order_float(t: complex, eps: float) -> int | None:
    cos_theta = max(-1.0, min(1.0, t.real / 2 - 1))
    theta = math.acos(cos_theta)
    for n in range(2, MAX_EXACT_ORDER + 1):
        k = n * theta / (2 * math.pi)
        if abs(k - round(k)) < 1e3 * eps and round(k) != 0:
            return n
    return None


def classify(f: MoebiusMap, eps: float | None = None) -> TransClass:
    eps = DEFAULT_EPS if eps is None else eps
    if f.is_identity(eps):
        return IDENTITY_CLASS
    t = f.trace_sq_over_det()
    if f.exact:
        if t == 4:
            return PARABOLIC
        if t.is_real() and t.real_sign() >= 0 and t.compare_real(4) < 0:
            p = f
            for n in range(2, MAX_EXACT_ORDER + 1):
                p = p @ f
                if p.is_identity():
                    return Elliptic(n)
            return Elliptic(None)
        return LOXODROMIC
    t = complex(t)
    if abs(t - 4) < eps * 4:
        return PARABOLIC
    if abs(t.imag) < eps * max(1.0, abs(t)) and -eps <= t.real < 4:
        return Elliptic(_elliptic_order_float(t, eps))
    return LOXODROMIC


def fixed_points(f: MoebiusMap, eps: float | None = None) -> list:
    if f.is_identity(eps):
        raise IdentityInput("the identity fixes every point")
    a, b, c, d = f.entries
    if f.exact:
        if not c:
            if a == d:
                return [INFINITY]
            return [INFINITY, b / (d - a)]
        disc = (a - d) * (a - d) + b * c * 4
        if not disc:
            return [(a - d) / (c * 2)]
        s = cyclo_sqrt(disc)
        if s is None:
            raise FieldExtensionRequired("fixed points need a square root outside Q(zeta_12); use to_float()")
        return [(a - d + s) / (c * 2), (a - d - s) / (c * 2)]
    eps = DEFAULT_EPS if eps is None else eps
    scale = max(abs(x) for x in f.entries)
    if abs(c) <= eps * scale:
        if abs(a - d) <= eps * scale:
            return [INFINITY]
        return [INFINITY, b / (d - a)]
    disc = (a - d) ** 2 + 4 * b * c
    if abs(disc) <= eps * scale * scale:
        return [(a - d) / (2 * c)]
    s = cmath.sqrt(disc)
    return [(a - d + s) / (2 * c), (a - d - s) / (2 * c)]


# ---------------------------------------------------------------------------
# Euclidean affine maps


@dataclass(frozen=True)
class AffineMap:
    """z -> multiplier*z + translation."""

    multiplier: CycloNumber
    translation: TauScalar

    def __post_init__(self):
        m = CycloNumber.coerce(self.multiplier)
        object.__setattr__(self, "multiplier", m)
        t = self.translation
        if isinstance(t, (int, Fraction)):
            t = CycloNumber(Fraction(t))
        object.__setattr__(self, "translation", t)
        if root_of_unity_order(m) is None:
            raise ValueError(f"multiplier {m!r} is not a root of unity")
        if isinstance(t, Symbolic) and not (m == ONE or m == -ONE):
            raise SymbolicMultiplierViolation(
                f"multiplier {m} with a symbolic translation; only +1 and -1 commute with generic tau"
            )

    @classmethod
    def translation_by(cls, t) -> AffineMap:
        return cls(ONE, t)

    @property
    def order(self) -> int:
        return root_of_unity_order(self.multiplier)

    def is_translation(self) -> bool:
        return self.multiplier == ONE

    def is_identity(self) -> bool:
        return self.multiplier == ONE and not self.translation

    def __matmul__(self, other: AffineMap) -> AffineMap:
        return affine_compose(self, other)

    def inverse(self) -> AffineMap:
        inv = self.multiplier.inverse()
        return AffineMap(inv, _scale(inv, self.translation) * -1)

    def __pow__(self, n: int) -> AffineMap:
        if n < 0:
            return self.inverse() ** (-n)
        out = AffineMap(ONE, _zero_like(self.translation))
        for _ in range(n):
            out = out @ self
        return out

    def __call__(self, z):
        return _scale(self.multiplier, z) + self.translation

    def to_moebius(self, tau=None) -> MoebiusMap:
        return affine_to_moebius(self, tau)

    def __str__(self):
        return f"z -> ({self.multiplier})*z + ({self.translation})"


def _zero_like(t):
    return Symbolic() if isinstance(t, Symbolic) else ZERO


def _scale(m: CycloNumber, t):
    if isinstance(t, Symbolic):
        if m == ONE:
            return t
        if m == -ONE:
            return -t
        raise SymbolicMultiplierViolation("symbolic translation scaled by a non-real root of unity")
    return m * t


def affine_compose(f: AffineMap, g: AffineMap) -> AffineMap:
    return AffineMap(f.multiplier * g.multiplier, _scale(f.multiplier, g.translation) + f.translation)


def affine_to_moebius(f: AffineMap, tau=None) -> MoebiusMap:
    t = f.translation
    if isinstance(t, Symbolic):
        if t.q1 == 0:
            t = CycloNumber(t.q0)
        elif tau is None:
            raise ValueError("a value for tau is needed to realize a symbolic translation")
        else:
            t = t.concretize(tau)
    if isinstance(t, complex):
        return MoebiusMap(f.multiplier.to_complex(), t, 0j, 1 + 0j, normalize=False)
    return MoebiusMap(f.multiplier, t, ZERO, ONE)
