from fractions import Fraction

import pytest

from mdcschottky.assembly import ExtensionRecipe, G2Base
from mdcschottky.catalog import RankOneKind
from mdcschottky.classification import (
    admissible_cases,
    admissible_orders,
    golden_max_index,
    max_index,
    recipe_genus,
    recipe_to_tree,
    verify_bound,
)
from mdcschottky.errors import RecipeInvariantViolation
from mdcschottky.orbifold import FiniteKind


def test_genus_two_maximum_is_dihedral_twelve():
    order, w = max_index(2)
    assert order == 12
    assert w.group == "Dihedral(order 12)"
    tops = [c for c in admissible_cases(2) if c.order == 12]
    assert tops and all(c.group.startswith("Dihedral") for c in tops)


def test_genus_two_contains_cyclic_six():
    assert any(c.case_id == "1.1" and c.group == "Cyclic(6)" for c in admissible_cases(2))


def test_genus_two_dihedral_orders():
    orders = sorted(c.order for c in admissible_cases(2) if c.group.startswith("Dihedral"))
    assert orders == [4, 6, 8, 12]


def test_no_cyclic_72_at_genus_7():
    assert not any(c.order == 72 for c in admissible_cases(7))
    # exhaustive check of 7 = 72 (u + sum 1/d) with d in {1, 2, 3, 4, 6}
    from itertools import combinations_with_replacement

    hits = [
        (u, ds)
        for u in range(8)
        for k in range(8)
        for ds in combinations_with_replacement((2, 3, 4, 6), k)
        if 72 * (u + sum(Fraction(1, d) for d in ds)) == 7
    ]
    assert hits == []


def test_genus_three():
    order, _ = max_index(3)
    assert order < 24
    assert admissible_orders(3)["2.1"] == [1, 2, 3, 4, 6]


def test_genus_thirteen():
    assert max_index(13)[0] < 144


def test_genus_zero_branch_solves_the_genus_equation():
    for g in range(3, 16):
        for c in admissible_cases(g):
            if c.case_id == "3.1":
                assert sum(n for n, _ in c.orbit_data) >= 3
                assert c.order * (c.u + sum(Fraction(1, d) for _, d in c.orbit_data if d > 1)) == g
            if c.case_id == "3.2":
                assert 1 + c.order * (c.u + sum(Fraction(1, d) for _, d in c.orbit_data if d > 1)) == g


def test_dihedral_witnesses_have_cyclic_index_two():
    for g in (2, 4, 6):
        for c in admissible_cases(g):
            if c.case_id.endswith(".3"):
                assert c.order // 2 in (2, 3, 4, 6)


def test_bound_to_thirty():
    rows = verify_bound(30)
    assert len(rows) == 29
    for r in rows:
        assert r.max_order <= 12 * (r.g - 1)
        assert (r.max_order == r.bound) == (r.g == 2)


def test_golden_regression():
    golden = golden_max_index()
    assert sorted(golden) == list(range(3, 31))
    for r in verify_bound(30, 3):
        order, case, group = golden[r.g]
        assert (r.max_order, r.witness.case_id, r.witness.group) == (order, case, group)


def test_free_genus_two_tree():
    t = recipe_to_tree(ExtensionRecipe(0, G2Base("FreeRank2"), []))
    assert t.genera == [1, 1]
    assert t.edges == [(0, 1)]
    assert t.invariant[0] == "edge"
    assert t.is_tree()


def test_a4_star():
    t = recipe_to_tree(ExtensionRecipe(1, FiniteKind("A4"), []))
    assert t.genera[0] == 0
    assert t.genera[1:] == [1] * 12
    assert t.orbits == [(12, 1)]
    assert t.is_tree() and t.total_genus == 12


def test_single_vertex():
    t = recipe_to_tree(ExtensionRecipe(0, FiniteKind("Trivial"), [(RankOneKind("K1"), 1)]))
    assert t.genera == [1] and t.edges == []
    assert t.is_tree()


@pytest.mark.parametrize(
    "recipe",
    [
        ExtensionRecipe(2, FiniteKind("A5"), [("K3", 3)]),
        ExtensionRecipe(0, FiniteKind("S4"), [("K4", 4), ("K2", 2)]),
        ExtensionRecipe(3, FiniteKind("Cyclic", 6), [("K6", 6)]),
        ExtensionRecipe(0, G2Base("DihedralAmalgam", 4), []),
    ],
    ids=str,
)
def test_tree_genus_matches_master_formula(recipe):
    from mdcschottky.signatures import star_signature

    t = recipe_to_tree(recipe)
    assert t.is_tree()
    assert t.total_genus == recipe_genus(recipe)
    r = recipe.resolved()
    if isinstance(r.base, FiniteKind):
        factors = [(k.name, s) for k, s in r.factors]
        H = r.base.order
        sig = star_signature(r.base, factors, r.free_rank)
        assert 2 - 2 * t.total_genus == H * sig.euler_char()


def test_partial_stabilizer_is_not_a_star():
    with pytest.raises(RecipeInvariantViolation):
        recipe_to_tree(ExtensionRecipe(0, FiniteKind("Cyclic", 6), [("K6", 2)]))
