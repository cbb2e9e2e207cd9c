from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mdcschottky.errors import BackendMismatch, IdentityInput, SymbolicMultiplierViolation
from mdcschottky.moebius import (
    INFINITY,
    LOXODROMIC,
    PARABOLIC,
    AffineMap,
    Elliptic,
    MoebiusMap,
    affine_compose,
    approx_equal,
    classify,
    compose,
    fixed_points,
)
from mdcschottky.numerics import I, ONE, TAU6, ZERO, ZETA, CycloNumber, Symbolic


A = MoebiusMap(ONE, ONE, ZERO, ONE)
E = MoebiusMap(TAU6, ZERO, ZERO, ONE)
F = MoebiusMap(ZERO, TAU6 / 16, ONE, ZERO)
Id = MoebiusMap.identity()


def test_rotation_has_order_six():
    assert compose(E**5, E) == Id
    assert E**6 == Id
    assert E**3 != Id


def test_translation_inverse():
    assert compose(A, A.inverse()) == Id


def test_dihedral_relation():
    assert compose(F, compose(E, F)) == E.inverse()


def test_classify_examples():
    assert classify(A) == PARABOLIC
    assert classify(E) == Elliptic(6)
    assert classify(MoebiusMap(CycloNumber(4), ZERO, ZERO, ONE)) == LOXODROMIC
    assert classify(Id).kind == "Identity"
    assert classify(E**3) == Elliptic(2)


def test_fixed_point_examples():
    assert fixed_points(A) == [INFINITY]
    assert set(map(str, fixed_points(F))) == {str(ZETA / 4), str(-ZETA / 4)}
    pts = fixed_points(E)
    assert INFINITY in pts and ZERO in pts
    for p in fixed_points(F):
        assert F(p) == p


def test_fixed_points_of_identity():
    with pytest.raises(IdentityInput):
        fixed_points(Id)


def test_evaluation_at_infinity():
    assert F(INFINITY) == ZERO
    assert F(ZERO) is INFINITY
    assert A(INFINITY) is INFINITY


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        compose(A, A.to_float())


def test_float_backend_agrees():
    f = (F @ A @ F).to_float()
    assert approx_equal(f, F.to_float() @ A.to_float() @ F.to_float())
    assert classify(f) == PARABOLIC


def test_projective_equality():
    two = CycloNumber(2)
    assert MoebiusMap(two, two, ZERO, two, normalize=False) == A


def test_text_round_trip():
    assert MoebiusMap.from_text(F.to_text()) == F
    g = F.to_float()
    assert approx_equal(MoebiusMap.from_text(g.to_text()), g)


def test_affine_examples():
    tau = Symbolic(0, 1)
    a = AffineMap(-ONE, tau + 1)
    b = AffineMap(-ONE, Symbolic(1, 0))
    assert affine_compose(a, b) == AffineMap(ONE, tau)
    one = AffineMap(ONE, ZERO)
    assert one @ one == one
    e = AffineMap(TAU6, ZERO)
    t = AffineMap(ONE, ONE)
    assert e @ t @ e.inverse() == AffineMap(ONE, TAU6)


def test_affine_symbolic_multiplier_restriction():
    with pytest.raises(SymbolicMultiplierViolation):
        AffineMap(I, Symbolic(0, 1))


def test_affine_to_moebius_preserves_action():
    f = AffineMap(I, CycloNumber(Fraction(1, 2), 1))
    m = f.to_moebius()
    for z in (ZERO, ONE, TAU6):
        assert m(z) == f(z)


small_int = st.integers(-4, 4)
int_cyclo = st.builds(CycloNumber, small_int, small_int, small_int, small_int)
maps = st.tuples(int_cyclo, int_cyclo, int_cyclo, int_cyclo).filter(lambda t: bool(t[0] * t[3] - t[1] * t[2]))


@settings(max_examples=1000, deadline=None)
@given(maps)
def test_inverse_law(entries):
    f = MoebiusMap(*entries)
    assert compose(f, f.inverse()) == Id


KNOWN = [A, E, F, E**2, E**3, MoebiusMap(CycloNumber(4), ZERO, ZERO, ONE), MoebiusMap(I, ZERO, ZERO, ONE), Id]


@settings(max_examples=1000, deadline=None)
@given(st.sampled_from(KNOWN), maps)
def test_classification_is_conjugation_invariant(f, entries):
    h = MoebiusMap(*entries)
    assert classify(h @ f @ h.inverse()) == classify(f)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 12))
def test_elliptic_order_is_exact(n):
    z = CycloNumber.zeta_power(12 // n) if 12 % n == 0 else None
    assume(z is not None)
    f = MoebiusMap(z, ZERO, ZERO, ONE)
    assert classify(f) == Elliptic(n)
    assert f**n == Id
    assert all(f**k != Id for k in range(1, n))
