from fractions import Fraction

import pytest

from mdcschottky.errors import UnknownFamily
from mdcschottky.orbifold import FiniteKind, OrbifoldSignature
from mdcschottky.signatures import (
    FAMILIES,
    admissible,
    enumerate_section6,
    family_genus,
    g2_signatures,
    genus_from_master,
    golden_rows,
    rh_check,
    signature_report,
    star_signature,
)

S = OrbifoldSignature.parse


def test_euler_characteristics():
    assert S("(0,3;2,3,6)").euler_char() == 0
    assert S("(1,0;)").euler_char() == 0
    assert S("(0,4;2,2,2,3)").euler_char() == Fraction(-1, 6)


def test_rh_examples():
    assert rh_check(2, 12, S("(0,4;2,2,2,3)"))
    assert rh_check(2, 1, S("(2,0;)"))
    # 24 * chi(0,3;2,3,8) = -1, not -4
    assert not rh_check(3, 24, S("(0,3;2,3,8)"))
    assert not admissible(3, 24, S("(0,3;2,3,8)"))


def test_master_formula_examples():
    assert genus_from_master(12, 1, []) == 12
    assert genus_from_master(1, 7, []) == 7
    assert genus_from_master(12, 0, [3, 3, 2]) == 14
    assert family_genus(FiniteKind("A4"), 0, a=2, b=1) == 14


def test_parse_symbols():
    assert S("(r,4;2,3,3,5)", r=1) == OrbifoldSignature(1, (2, 3, 3, 5))
    assert S("(r,2;n,n)", r=0, n=5) == OrbifoldSignature(0, (5, 5))
    with pytest.raises(ValueError):
        S("(0,3;2,3)")


def _row(rows, r, a=0, b=0, c=0):
    return next(x for x in rows if (x.params.r, x.params.a, x.params.b, x.params.c) == (r, a, b, c))


def test_a5_row():
    rows = enumerate_section6(FiniteKind("A5"), r_max=3)
    for r in range(4):
        x = _row(rows, r, a=1)
        assert x.genus == 60 * r + 20
        assert x.signature == S("(r,4;2,3,3,5)", r=r)
        assert x.matches_printed


def test_cyclic_row():
    for n in (2, 5, 7, 12):
        rows = enumerate_section6(FiniteKind("Cyclic", n), r_max=2)
        x = _row(rows, 2)
        assert x.genus == 2 * n
        assert x.signature == OrbifoldSignature(2, (n, n))


def test_s4_base_row_computed():
    # the printed cell reads (r,3;2,2,4); the star algebra gives the S4 sphere cones
    rows = enumerate_section6(FiniteKind("S4"), r_max=1)
    x = _row(rows, 1)
    assert x.genus == 24
    assert x.signature == OrbifoldSignature(1, (2, 3, 4))
    assert x.printed == OrbifoldSignature(1, (2, 2, 4))
    assert not x.printed_rh_ok


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        enumerate_section6("Octahedral")


def test_star_algebra():
    # two K6 glued to C6 along order 6: the g = 2 maximal cyclic case
    sig = star_signature(FiniteKind("Cyclic", 6), [("K6", 6), ("K6", 6)])
    assert sig == S("(0,4;2,2,3,3)")
    # free factors add genus and keep every cone
    assert star_signature(FiniteKind("Trivial"), [("K1", 1)], free_rank=2) == OrbifoldSignature(3, ())


def test_golden_file_shape():
    rows = golden_rows()
    assert len(rows) == 40
    assert {r.family for r in rows} == set(FAMILIES)
    raw = [r for r in rows if r.raw]
    assert {r.raw for r in raw} == {"(r,5;2,2,2,3.4)", "a=b=c1"}


@pytest.fixture(scope="module")
def report():
    return signature_report(r_max=10)


def test_conservation(report):
    assert report.rows
    assert report.conservation_ok
    for row in report.rows:
        assert 2 - 2 * row.genus == row.H_order * row.signature.euler_char()


def test_dual_formula(report):
    assert report.master_ok


def test_exclusion(report):
    assert report.exclusion_violations == []


def test_notes_carry_typographical_cells(report):
    raws = {n["raw"] for n in report.notes if n["raw"]}
    assert raws == {"(r,5;2,2,2,3.4)", "a=b=c1"}


KNOWN_DISCREPANCIES = {
    ("Cyclic(4)", 1, 0, 0),
    ("Cyclic(4)", 2, 0, 0),
    ("Dihedral(4)", 1, 0, 0),
    ("Dihedral(4)", 1, 1, 0),
    ("Dihedral(4)", 1, 2, 0),
    ("S4", 0, 0, 0),
    ("S4", 1, 0, 0),
    ("S4", 1, 1, 0),
    ("S4", 1, 0, 1),
    ("S4", 1, 1, 1),
}


def test_discrepancies_are_unbalanced_printed_cells(report):
    found = {(d["family"], d["a"], d["b"], d["c"]) for d in report.discrepancies}
    assert found == KNOWN_DISCREPANCIES
    for d in report.discrepancies:
        assert d["computed_rh_balanced"]
        assert not d["printed_rh_balanced"]


def test_g2_examples():
    entries = {(e.case, e.d): e for e in g2_signatures()}
    assert entries[("2", 3)].signature == S("(0,4;3,3,3,3)") and entries[("2", 3)].H_order == 3
    assert entries[("3", None)].signature == S("(1,2;2,2)") and entries[("3", None)].H_order == 2
    assert entries[("4", 6)].signature == S("(0,4;2,2,2,3)") and entries[("4", 6)].H_order == 12


def test_g2_all_balanced():
    entries = g2_signatures()
    assert len(entries) == 9
    for e in entries:
        assert e.rh_ok
        assert e.signature == e.computed
