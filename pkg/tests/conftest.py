from fractions import Fraction

import pytest
from hypothesis import strategies as st

from mdcschottky.numerics import CycloNumber

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
cyclo = st.builds(CycloNumber, small_q, small_q, small_q, small_q)
nonzero_cyclo = cyclo.filter(bool)


@pytest.fixture
def no_numba(monkeypatch):
    monkeypatch.setenv("MDC_NO_NUMBA", "1")


def frac(text):
    return Fraction(text)
