import itertools
import json
from fractions import Fraction

import pytest

from mdcschottky.assembly import (
    G2_VARIANTS,
    AssembledGroup,
    ExtensionRecipe,
    G2Base,
    GroupWord,
    assemble,
    build_mdc_schottky,
    ejemplo1_generators,
    finite_group_generators,
    group_closure,
    is_torsion_witness,
    recipe_is_valid,
    shortest_vector2,
    validate_recipe,
    verify_ejemplo1,
    word_value,
)
from mdcschottky.catalog import AMALGAM_ORDERS, RANK_ONE_NAMES, RankOneKind
from mdcschottky.errors import CertificateFailure, RecipeInvariantViolation, UnknownGenerator
from mdcschottky.moebius import Elliptic, MoebiusMap, classify
from mdcschottky.numerics import ONE, TAU6
from mdcschottky.orbifold import FiniteKind


def test_rank_one_trivial_certificate():
    gens, cert = build_mdc_schottky(1)
    assert len(gens) == 2
    assert cert.passed
    assert cert.curves == []


def test_ejemplo1_layout_certifies():
    gens, cert = build_mdc_schottky(2, TAU6, Fraction(1, 4), [Fraction(0)])
    assert cert.passed
    assert cert.level == "exact-lattice"
    assert shortest_vector2(TAU6) == ONE
    assert str(cert.curve.radius) == "1/4"
    K = ejemplo1_generators()
    F = K["F"]
    assert gens[2] == F @ K["A"] @ F
    assert gens[3] == F @ K["B"] @ F


def test_large_radius_fails():
    with pytest.raises(CertificateFailure) as info:
        build_mdc_schottky(2, TAU6, Fraction(3, 5), [Fraction(0)])
    assert info.value.check == "shortest-vector"


@pytest.mark.parametrize("g", [3, 4, 5])
def test_default_layout(g):
    gens, cert = build_mdc_schottky(g)
    assert len(gens) == 2 * g
    assert cert.passed
    assert sum(c.name.startswith("disks-") for c in cert.checks) == (g - 1) * (g - 2) // 2


def test_word_examples():
    K = ejemplo1_generators()
    assert word_value("F E F", K) == K["E"].inverse()
    assert word_value("", K).is_identity()
    assert is_torsion_witness(GroupWord.parse("E^3"), K) == Elliptic(2)
    assert str(GroupWord.parse("A B^-1")) == "A B^-1"
    with pytest.raises(UnknownGenerator):
        word_value("X", K)


def test_ejemplo1_report():
    rep = verify_ejemplo1()
    assert rep["passed"], [s["check"] for s in rep["steps"] if not s["passed"]]
    assert rep["index"] == 12
    assert rep["quotient"] == "dihedral of order 12"
    steps = {s["check"]: s for s in rep["steps"]}
    assert steps["E A E^-1 = B"]["passed"]
    assert steps["|<E,F>| = 12"]["order"] == 12
    assert len(steps["conjugation closure"]["table"]) == 8


def test_free_recipe():
    g = assemble(ExtensionRecipe(0, FiniteKind("Trivial"), [("K1", 1), ("K1", 1)]))
    assert isinstance(g, AssembledGroup)
    assert len(g.generators) == 4
    assert g.certificate.passed
    assert g.backend == "exact"


def test_k6_amalgam_along_order_six():
    g = assemble(ExtensionRecipe.from_json({"base": {"g2": "AmalgamCyclic", "d": 6}}))
    assert g.certificate.passed
    assert [t for _, _, t in g.graph] == [6]
    assert "bounded-word (L=8)" in g.certificate.as_dict()["level"]


def test_torsion_free_factor_rejects_order_two():
    with pytest.raises(RecipeInvariantViolation, match="K1"):
        assemble(ExtensionRecipe(0, RankOneKind("K6"), [("K1", 2)]))


def test_json_round_trip():
    r = ExtensionRecipe(2, FiniteKind("Dihedral", 3), [("K6", 3), ("K4", 2)])
    again = ExtensionRecipe.from_json(json.dumps(r.to_json()))
    assert again.to_json() == r.to_json()
    assert r.to_json()["factors"][0] == {"kind": "K6", "amalgam": 3}


@pytest.mark.parametrize(
    "base",
    [G2Base("FreeRank2"), G2Base("SwapInvolution")]
    + [G2Base(v, d) for v in ("AmalgamCyclic", "DihedralAmalgam") for d in (2, 3, 4, 6)],
    ids=str,
)
def test_genus_two_recipes_certify(base):
    g = assemble(ExtensionRecipe(0, base, []))
    assert g.certificate.passed, g.certificate.first_failure()
    for m in g.generators.values():
        k = classify(m)
        assert k.kind in ("Parabolic", "Loxodromic") or (k.kind == "Elliptic" and k.order in (2, 3, 4, 6))


def test_g2_variant_validation():
    with pytest.raises(ValueError):
        G2Base("AmalgamCyclic", 5)
    with pytest.raises(ValueError):
        G2Base("FreeRank2", 2)
    assert set(G2_VARIANTS) == {"FreeRank2", "AmalgamCyclic", "SwapInvolution", "DihedralAmalgam"}


@pytest.mark.parametrize("kind", ["Trivial", "A4", "S4", "A5"])
def test_finite_groups_have_the_right_order(kind):
    k = FiniteKind(kind)
    assert len(group_closure(finite_group_generators(k))) == k.order


@pytest.mark.parametrize("n", [2, 3, 5, 6, 7])
def test_cyclic_and_dihedral_orders(n):
    assert len(group_closure(finite_group_generators(FiniteKind("Cyclic", n)))) == n
    assert len(group_closure(finite_group_generators(FiniteKind("Dihedral", n)))) == 2 * n


def test_polyhedral_base_with_factor():
    g = assemble(ExtensionRecipe(1, FiniteKind("A4"), [("K3", 3), ("K2", 2)]))
    assert g.certificate.passed


# exhaustive availability sweep ------------------------------------------------

ALL_T = (1, 2, 3, 4, 6)


@pytest.mark.parametrize("kind, t", list(itertools.product(RANK_ONE_NAMES, ALL_T)))
def test_validator_sweep(kind, t):
    rich = ExtensionRecipe(0, FiniteKind("Cyclic", 12), [(kind, t)])
    assert recipe_is_valid(rich) == (t in AMALGAM_ORDERS[kind])
    bare = ExtensionRecipe(0, FiniteKind("Trivial"), [(kind, t)])
    assert recipe_is_valid(bare) == (t == 1)
    if not recipe_is_valid(bare):
        with pytest.raises(RecipeInvariantViolation):
            validate_recipe(bare)


@pytest.mark.parametrize("first, second", list(itertools.product(RANK_ONE_NAMES, repeat=2)))
def test_left_side_grows_with_factors(first, second):
    # a factor may be glued along an order that only an earlier factor provides
    for t in ALL_T:
        r = ExtensionRecipe(0, FiniteKind("Trivial"), [(first, 1), (second, t)])
        expected = t == 1 or (t in AMALGAM_ORDERS[second] and t in AMALGAM_ORDERS[first])
        assert recipe_is_valid(r) == expected


def test_negative_free_rank():
    with pytest.raises(RecipeInvariantViolation):
        validate_recipe(ExtensionRecipe(-1, FiniteKind("Trivial"), []))
