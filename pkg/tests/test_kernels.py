import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyjc import _kernels_py, kernels

try:
    from polyjc import _kernels
except ImportError:
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")

term_dicts = st.dictionaries(
    st.tuples(*[st.integers(0, 4)] * 3),
    st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool),
    max_size=8,
)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_fallback_selected_by_env():
    env = dict(os.environ, POLYJC_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import polyjc; print(polyjc.BACKEND)"],
                         capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "python"


def test_box_search_empty_on_theorem_box():
    assert _kernels_py.box_search(4, 6, 10, 300, 60) == []


def test_box_search_finds_points_when_inequality_is_easy():
    # lowering the floors admits solutions; each must satisfy the equality exactly
    pts = _kernels_py.box_search(0, 0, 0, 20, 3)
    assert pts
    for h1, h2, h3, n in pts:
        assert Fraction(h1, 2) + Fraction(h2, 3) + Fraction(h3, 5) == n + 2
        assert Fraction(h1, 4) + Fraction(h2, 9) + Fraction(h3, 25) > n


@needs_ext
def test_box_search_backends_agree():
    for args in [(0, 0, 0, 20, 3), (4, 6, 10, 120, 30), (1, 2, 3, 40, 8)]:
        assert list(map(tuple, _kernels.box_search(*args))) == list(map(tuple, _kernels_py.box_search(*args)))


@needs_ext
@settings(max_examples=200, deadline=None)
@given(term_dicts, term_dicts, st.integers(0, 10))
def test_multiplication_backends_agree(a, b, maxdeg):
    assert _kernels.mul_terms(a, b) == _kernels_py.mul_terms(a, b)
    assert _kernels.mul_terms_trunc(a, b, maxdeg) == _kernels_py.mul_terms_trunc(a, b, maxdeg)


@needs_ext
@settings(max_examples=200, deadline=None)
@given(term_dicts, term_dicts, st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(bool),
       st.tuples(*[st.integers(0, 2)] * 3))
def test_sub_mul_term_backends_agree(target, src, coeff, shift):
    x = _kernels.sub_mul_term(dict(target), src, coeff, shift)
    y = _kernels_py.sub_mul_term(dict(target), src, coeff, shift)
    assert x == y


@settings(max_examples=200, deadline=None)
@given(term_dicts, term_dicts)
def test_mul_terms_has_no_zero_coefficients(a, b):
    prod = _kernels_py.mul_terms(a, b)
    assert all(prod.values())
    trunc = _kernels_py.mul_terms_trunc(a, b, 5)
    assert trunc == {e: c for e, c in prod.items() if sum(e) <= 5}
