import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdcschottky.errors import InvalidTau, SymbolicObstruction
from mdcschottky.numerics import (
    I,
    ONE,
    OMEGA3,
    TAU6,
    ZERO,
    ZETA,
    CycloNumber,
    Symbolic,
    cyclo_inverse,
    cyclo_mul,
    cyclo_sqrt,
    embed_float,
    fclose,
    parse_tau_scalar,
    root_of_unity_order,
)

from conftest import cyclo, nonzero_cyclo, small_q


def test_minimal_polynomial_reduction():
    assert cyclo_mul(TAU6, TAU6) == TAU6 - ONE
    assert cyclo_mul(TAU6, TAU6) == CycloNumber.zeta_power(4)
    assert CycloNumber.zeta_power(4) == OMEGA3


def test_i_squared():
    assert cyclo_mul(I, I) == -ONE


def test_inverse_examples():
    assert cyclo_inverse(ONE) == ONE
    assert cyclo_inverse(I) == -I
    t = cyclo_inverse(TAU6)
    assert cyclo_mul(TAU6, t) == ONE
    # tau^-1 = conj(tau) = 1 - tau for tau = exp(i pi/3)
    assert t == ONE - TAU6


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        cyclo_inverse(ZERO)


def test_zeta_twelfth_power():
    assert ZETA**12 == ONE
    assert ZETA**6 == -ONE
    assert root_of_unity_order(ZETA) == 12
    assert root_of_unity_order(TAU6) == 6
    assert root_of_unity_order(ONE + ONE) is None


def test_embed_examples():
    z = embed_float(TAU6, 1j)
    assert abs(z - complex(0.5, math.sqrt(3) / 2)) < 1e-15
    assert embed_float(Symbolic(1, 1), 1j) == 1 + 1j
    v = embed_float(Symbolic(0, Fraction(1, 2)), cmath.exp(1j * math.pi / 3))
    assert abs(v - complex(0.25, 0.4330127018922193)) < 1e-15


def test_embed_symbolic_needs_upper_half_plane():
    with pytest.raises(InvalidTau):
        embed_float(Symbolic(1, 1), -1j)
    with pytest.raises(InvalidTau):
        embed_float(Symbolic(1, 1), 2.0)


def test_symbolic_product_forbidden():
    tau = Symbolic(0, 1)
    with pytest.raises(SymbolicObstruction):
        tau * tau
    assert tau * 3 == Symbolic(0, 3)
    assert (tau + 1) * Symbolic(2, 0) == Symbolic(2, 2)


def test_text_round_trip():
    x = CycloNumber(Fraction(1, 2), -3, 0, Fraction(7, 5))
    assert str(x) == "1/2,-3,0,7/5"
    assert CycloNumber.parse(str(x)) == x
    s = Symbolic(Fraction(-1, 3), Fraction(2))
    assert parse_tau_scalar(str(s)) == s
    assert parse_tau_scalar("0-1/2*tau") == Symbolic(0, Fraction(-1, 2))


def test_sqrt_in_field():
    assert cyclo_sqrt(TAU6) in (ZETA, -ZETA)
    assert cyclo_sqrt(-ONE) in (I, -I)
    assert cyclo_sqrt(ONE + ONE) is None  # sqrt 2 is not in Q(zeta_12)
    three = CycloNumber(3)
    r = cyclo_sqrt(three)
    assert r is not None and r * r == three


def test_tolerance_policy():
    assert fclose(1e12, 1e12 + 1.0)
    assert not fclose(1.0, 1.0 + 1e-6)
    assert fclose(0.0, 1e-10)


@settings(max_examples=1000, deadline=None)
@given(cyclo, cyclo, cyclo)
def test_field_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (b - a) == b
    if a:
        assert a * a.inverse() == ONE


@settings(max_examples=300, deadline=None)
@given(nonzero_cyclo)
def test_division_round_trip(a):
    assert (ONE / a) * a == ONE


@settings(max_examples=300, deadline=None)
@given(cyclo, cyclo)
def test_embedding_is_a_homomorphism(a, b):
    assert abs(embed_float(a * b) - embed_float(a) * embed_float(b)) < 1e-12 * max(1, abs(embed_float(a * b)))
    assert abs(embed_float(a + b) - embed_float(a) - embed_float(b)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(small_q, small_q, small_q, small_q, st.complex_numbers(max_magnitude=10).filter(lambda t: t.imag > 1e-3))
def test_symbolic_addition_independent_of_tau(p0, p1, q0, q1, t):
    a, b = Symbolic(p0, p1), Symbolic(q0, q1)
    assert abs(embed_float(a + b, t) - embed_float(a, t) - embed_float(b, t)) < 1e-9


@settings(max_examples=200, deadline=None)
@given(cyclo)
def test_conjugation_is_an_automorphism_of_norms(a):
    n = a * a.conjugate()
    assert n.is_real()
    assert n.real_sign() >= 0
