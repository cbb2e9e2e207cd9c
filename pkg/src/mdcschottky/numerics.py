"""Exact arithmetic in Q(zeta_12), the symbolic lattice module Q + Q*tau, and
the floating tolerance policy.

``CycloNumber`` stores c0 + c1*z + c2*z^2 + c3*z^3 with z = exp(i*pi/6), reduced
by z^4 = z^2 - 1.  Useful constants:

    TAU6 = z^2 = exp(i*pi/3)     I = z^3     OMEGA3 = z^4 = z^2 - 1 = exp(2*pi*i/3)
"""
from __future__ import annotations

import cmath
import itertools
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Union

import mpmath

from .errors import InvalidTau, SymbolicObstruction

Rational = Fraction

DEFAULT_EPS = float(os.environ.get("MDC_TOLERANCE", "1e-9"))

_ZETA = cmath.exp(1j * math.pi / 6)
# Galois embeddings z -> exp(i*pi*k/6); k=5 and k=1 represent the two conjugate pairs.
_EMBEDDING_EXPONENTS = (1, 5, 7, 11)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or an int")
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def _reduce(poly: list[Fraction]) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    c = list(poly) + [Fraction(0)] * max(0, 7 - len(poly))
    for k in range(len(c) - 1, 3, -1):
        if c[k]:
            # z^k = z^(k-2) - z^(k-4)
            c[k - 2] += c[k]
            c[k - 4] -= c[k]
            c[k] = Fraction(0)
    return c[0], c[1], c[2], c[3]


@dataclass(frozen=True, slots=True)
class CycloNumber:
    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)
    c3: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "c1", "c2", "c3"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    # construction -------------------------------------------------------
    @classmethod
    def coerce(cls, x) -> CycloNumber:
        if isinstance(x, CycloNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to CycloNumber")

    @classmethod
    def zeta_power(cls, k: int) -> CycloNumber:
        k %= 12
        poly = [Fraction(0)] * (k + 1)
        poly[k] = Fraction(1)
        return cls(*_reduce(poly))

    @classmethod
    def parse(cls, text: str) -> CycloNumber:
        parts = text.split(",")
        if len(parts) != 4:
            raise ValueError(f"expected 'c0,c1,c2,c3', got {text!r}")
        return cls(*(parse_rational(p) for p in parts))

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.c0, self.c1, self.c2, self.c3)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def __repr__(self) -> str:
        return f"CycloNumber({self})"

    # ring operations ----------------------------------------------------
    def __add__(self, other):
        try:
            o = CycloNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return CycloNumber(*(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(*(-a for a in self.coeffs))

    def __sub__(self, other):
        try:
            o = CycloNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return CycloNumber(*(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(*(a * other for a in self.coeffs))
        if not isinstance(other, CycloNumber):
            return NotImplemented
        poly = [Fraction(0)] * 7
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        poly[i + j] += a * b
        return CycloNumber(*_reduce(poly))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta_12)")
            return CycloNumber(*(a / other for a in self.coeffs))
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycloNumber.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloNumber(Fraction(other))
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def is_rational(self) -> bool:
        return not (self.c1 or self.c2 or self.c3)

    def inverse(self) -> CycloNumber:
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta_12)")
        # Solve (multiplication-by-self matrix) x = e0 by Gaussian elimination.
        cols = [(self * CycloNumber.zeta_power(j)).coeffs for j in range(4)]
        m = [[cols[j][i] for j in range(4)] + [Fraction(int(i == 0))] for i in range(4)]
        for col in range(4):
            piv = next(r for r in range(col, 4) if m[r][col])
            m[col], m[piv] = m[piv], m[col]
            p = m[col][col]
            m[col] = [x / p for x in m[col]]
            for r in range(4):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return CycloNumber(*(m[i][4] for i in range(4)))

    def conjugate(self) -> CycloNumber:
        zbar = ZETA_INV
        acc = CycloNumber(self.c0)
        p = ONE
        for c in self.coeffs[1:]:
            p = p * zbar
            if c:
                acc = acc + p * c
        return acc

    def galois(self, k: int) -> CycloNumber:
        """Image under the automorphism z -> z^k (k coprime to 12)."""
        acc = ZERO
        for j, c in enumerate(self.coeffs):
            if c:
                acc = acc + CycloNumber.zeta_power(j * k) * c
        return acc

    def is_real(self) -> bool:
        return self == self.conjugate()

    def real_parts(self) -> tuple[Fraction, Fraction]:
        """For a real element, return (p, q) with self = p + q*sqrt(3)."""
        if not self.is_real():
            raise ValueError(f"{self!r} is not real")
        # real subfield is spanned by 1 and sqrt(3) = 2z - z^3
        return self.c0, -self.c3

    def real_sign(self) -> int:
        p, q = self.real_parts()
        sp = (p > 0) - (p < 0)
        sq = (q > 0) - (q < 0)
        if sq == 0 or sp == sq:
            return sp if sp else sq
        if sp == 0:
            return sq
        return sp if p * p > 3 * q * q else sq

    def compare_real(self, other) -> int:
        return (self - CycloNumber.coerce(other)).real_sign()

    def abs2(self) -> CycloNumber:
        return self * self.conjugate()

    # floating embedding ---------------------------------------------
    def to_complex(self, k: int = 1) -> complex:
        z = cmath.exp(1j * math.pi * k / 6)
        return complex(sum(float(c) * z**j for j, c in enumerate(self.coeffs)))

    def sqrt(self) -> CycloNumber | None:
        """A square root inside Q(zeta_12), or None if none exists."""
        return cyclo_sqrt(self)


ZERO = CycloNumber()
ONE = CycloNumber(Fraction(1))
ZETA = CycloNumber(0, 1)
ZETA_INV = CycloNumber(0, 1, 0, -1)
TAU6 = CycloNumber.zeta_power(2)     # exp(i pi/3)
I = CycloNumber.zeta_power(3)
OMEGA3 = CycloNumber.zeta_power(4)   # exp(2 pi i/3)
SQRT3 = CycloNumber(0, 2, 0, -1)


def cyclo_mul(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    return a * b


def cyclo_inverse(a: CycloNumber) -> CycloNumber:
    return a.inverse()


@lru_cache(maxsize=4096)
def root_of_unity_order(x: CycloNumber) -> int | None:
    """Multiplicative order of x if it is a root of unity, else None."""
    if not x:
        return None
    p = ONE
    for n in range(1, 13):
        p = p * x
        if p == ONE:
            return n
    return None


def cyclo_sqrt(x: CycloNumber) -> CycloNumber | None:
    if not x:
        return ZERO
    with mpmath.workdps(60):
        zs = [mpmath.expjpi(mpmath.mpf(k) / 6) for k in (1, 5)]
        vals = [sum(mpmath.mpf(c.numerator) / c.denominator * z**j for j, c in enumerate(x.coeffs)) for z in zs]
        roots = [mpmath.sqrt(v) for v in vals]
        for s0, s1 in itertools.product((1, -1), repeat=2):
            targets = [s0 * roots[0], s1 * roots[1]]
            rows, rhs = [], []
            for z, t in zip(zs, targets):
                rows.append([mpmath.re(z**j) for j in range(4)])
                rhs.append(mpmath.re(t))
                rows.append([mpmath.im(z**j) for j in range(4)])
                rhs.append(mpmath.im(t))
            try:
                sol = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
            except ZeroDivisionError:
                continue
            cand = CycloNumber(*(Fraction(str(mpmath.nstr(sol[i], 40))).limit_denominator(10**12) for i in range(4)))
            if cand * cand == x:
                return cand
    return None


# ---------------------------------------------------------------------------
# Symbolic lattice parameter


@dataclass(frozen=True, slots=True)
class Symbolic:
    """q0 + q1*tau with tau an indeterminate in the upper half plane."""

    q0: Fraction = Fraction(0)
    q1: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "q0", _frac(self.q0))
        object.__setattr__(self, "q1", _frac(self.q1))

    @classmethod
    def parse(cls, text: str) -> Symbolic:
        s = text.replace(" ", "")
        if not s.endswith("*tau"):
            raise ValueError(f"expected 'q0+q1*tau', got {text!r}")
        body = s[: -len("*tau")]
        # split at the last sign that is not part of an exponent/leading position
        for i in range(len(body) - 1, 0, -1):
            if body[i] in "+-" and body[i - 1] not in "/":
                q0, q1 = body[:i], body[i:]
                return cls(Fraction(q0), Fraction(q1.lstrip("+")))
        raise ValueError(f"expected 'q0+q1*tau', got {text!r}")

    def __str__(self) -> str:
        sign = "+" if self.q1 >= 0 else "-"
        return f"{self.q0}{sign}{abs(self.q1)}*tau"

    def __repr__(self) -> str:
        return f"Symbolic({self})"

    def coords(self) -> tuple[Fraction, Fraction]:
        return (self.q0, self.q1)

    def __add__(self, other):
        if isinstance(other, Symbolic):
            return Symbolic(self.q0 + other.q0, self.q1 + other.q1)
        if isinstance(other, (int, Fraction)):
            return Symbolic(self.q0 + other, self.q1)
        if isinstance(other, CycloNumber):
            if other.is_rational():
                return Symbolic(self.q0 + other.c0, self.q1)
            raise SymbolicObstruction("cannot add a symbolic tau value to an irrational constant")
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Symbolic(-self.q0, -self.q1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Symbolic(self.q0 * other, self.q1 * other)
        if isinstance(other, CycloNumber):
            if other.is_rational():
                return self * other.c0
            raise SymbolicObstruction("multiplying symbolic tau by an irrational constant")
        if isinstance(other, Symbolic):
            if other.q1 == 0:
                return self * other.q0
            if self.q1 == 0:
                return other * self.q0
            raise SymbolicObstruction("tau*tau has no reduction for an indeterminate tau")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Symbolic(self.q0 / other, self.q1 / other)
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.q0 or self.q1)

    def concretize(self, tau):
        """Substitute a value for tau (CycloNumber gives exact, complex gives float)."""
        if isinstance(tau, CycloNumber):
            return tau * self.q1 + self.q0
        return float(self.q0) + float(self.q1) * complex(tau)


TauScalar = Union[Symbolic, CycloNumber]


def embed_float(a, tau_value: complex | None = None) -> complex:
    if isinstance(a, CycloNumber):
        return a.to_complex()
    if isinstance(a, Symbolic):
        if tau_value is None or complex(tau_value).imag <= 0:
            raise InvalidTau(f"tau must have positive imaginary part, got {tau_value!r}")
        return a.concretize(complex(tau_value))
    if isinstance(a, (int, Fraction)):
        return complex(float(a))
    raise TypeError(f"cannot embed {type(a).__name__}")


def parse_tau_scalar(text: str) -> TauScalar:
    if "tau" in text:
        return Symbolic.parse(text)
    return CycloNumber.parse(text)


# ---------------------------------------------------------------------------
# Floating tolerance policy


def fclose(a: complex, b: complex, eps: float | None = None) -> bool:
    """eps-relative comparison above magnitude 1, eps-absolute below."""
    eps = DEFAULT_EPS if eps is None else eps
    scale = max(1.0, abs(a), abs(b))
    return abs(a - b) <= eps * scale


def fzero(a: complex, eps: float | None = None) -> bool:
    eps = DEFAULT_EPS if eps is None else eps
    return abs(a) <= eps
