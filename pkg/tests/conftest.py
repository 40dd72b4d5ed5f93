from fractions import Fraction

import pytest
from hypothesis import strategies as st

from polyjc.poly import Poly, Ring

R2 = Ring(("x", "y"))
R3 = Ring(("x", "y", "z"))

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
small_ints = st.integers(min_value=-6, max_value=6)


def polys(ring, max_terms=6, max_exp=3, coeff=coeffs):
    exps = st.tuples(*[st.integers(0, max_exp)] * ring.nvars)
    return st.dictionaries(exps, coeff, max_size=max_terms).map(lambda d: ring.from_terms(d))


def int_polys(ring, max_terms=5, max_exp=3):
    return polys(ring, max_terms, max_exp, small_ints)


# --- acceptance reporting ---

ACCEPTANCE: dict = {}


def record(criterion: int, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[criterion] = (ok, detail)


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {k:2d}  {detail}")
