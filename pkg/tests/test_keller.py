import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import R2, R3, polys
from polyjc.keller import (
    NotKellerError,
    PolyMap,
    SingularLinearPartError,
    chain_rule_check,
    determinant,
    druzkowski,
    formal_inverse,
    invert_exact,
    is_keller,
    jacobian,
    jacobian_derivation,
    matrix_rank,
    newton_triangle_test,
    stable_extension,
    top_parts_compatible,
)
from polyjc.lnd import LocallyNilpotent, is_locally_nilpotent
from polyjc.poly import convex_hull, substitute


def M(*comps, vars_=("x", "y")):
    return PolyMap.parse(vars_, comps)


def test_jacobian_examples():
    assert jacobian(M("x+y^2", "y")).determinant == 1
    assert jacobian(M("x^2", "y")).determinant == R2.parse("2*x")
    assert jacobian(M("x+y^3", "y+x^3")).determinant == R2.parse("1 - 9*x^2*y^2")


def test_is_keller_examples():
    assert is_keller(M("x+y^2", "y"))
    assert not is_keller(M("x^2", "y"))
    F = M("x + y^2", "y", "z", vars_=("x", "y", "z"))
    G = M("x", "y + z^3", "z", vars_=("x", "y", "z"))
    H = M("x", "y", "z + x^2*y", vars_=("x", "y", "z"))
    assert is_keller(F.compose(G).compose(H))


def test_formal_inverse_examples():
    F = M("x+y^2", "y")
    for N in (2, 3, 5):
        assert PolyMap(R2, formal_inverse(F, N).components) == M("x-y^2", "y")
    I = PolyMap.identity(R2)
    assert PolyMap(R2, formal_inverse(I, 7).components) == I
    F = M("x+y^2", "y+(x+y^2)^3")
    G = M("x-y^2", "y").compose(M("x", "y-x^3"))
    inv = formal_inverse(F, 9)
    for a, b in zip(inv.components, G.components):
        assert a == R2.from_terms({e: c for e, c in b.terms.items() if sum(e) <= 9})
    assert G.compose(F).is_identity()


def test_formal_inverse_rejects_singular_linear_part():
    with pytest.raises(SingularLinearPartError):
        formal_inverse(M("x+y", "x+y+x^2"), 3)


def test_formal_inverse_translates():
    F = M("x + y^2 + 1", "y - 2")
    inv = formal_inverse(F, 4)
    assert inv.translation == (1, -2)
    G = PolyMap(R2, inv.components)
    assert G.compose(F).is_identity()


def test_invert_exact_examples():
    r = invert_exact(M("x+y^2", "y"))
    assert r.found and r.inverse == M("x-y^2", "y")
    r = invert_exact(PolyMap.identity(R2))
    assert r.found and r.order == 1 and r.inverse.is_identity()
    with pytest.raises(NotKellerError):
        invert_exact(M("x^2", "y"))


def test_invert_exact_cap_is_inconclusive():
    F = M("x+y^2", "y+(x+y^2)^3")
    r = invert_exact(F, cap=3)
    assert not r.found and r.cap == 3
    assert invert_exact(F).found


def test_chain_rule_examples():
    assert chain_rule_check(M("x+y^2", "y"), M("x-y^2", "y")) == 1
    I = PolyMap.identity(R2)
    assert chain_rule_check(I, I) == 1
    assert chain_rule_check(M("x^2", "y"), I) == R2.parse("2*x")


def test_stable_extension_examples():
    F = M("x+y^2", "y")
    E = stable_extension(F, 1)
    assert E.ring.vars == ("x", "y", "z")
    assert E == M("x+y^2", "y", "z", vars_=("x", "y", "z"))
    assert stable_extension(F, 0) is F
    G = M("x^2+y", "y")
    E2 = stable_extension(G, 2)
    assert jacobian(E2).determinant == E2.ring.embed(jacobian(G).determinant)
    with pytest.raises(ValueError):
        stable_extension(F, -1)


def test_druzkowski_examples():
    D = druzkowski([[0, 0], [0, 0]])
    assert D.rank == 0 and D.map.is_identity()
    # column convention: k_i reads column i of A
    D = druzkowski([[0, 1], [0, 0]])
    assert D.map == M("x", "y + x^3")
    assert is_keller(D.map)
    D = druzkowski([[1, -1, 0], [1, -1, 0], [1, -1, 0]])
    assert D.rank == 1
    assert is_keller(D.map)
    assert invert_exact(D.map).found


def test_druzkowski_rank_two_nilpotent_inverts():
    A = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    D = druzkowski(A)
    assert D.rank == 2 and is_keller(D.map)
    assert invert_exact(D.map).found


def test_matrix_rank():
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert matrix_rank([[1, 0], [0, 1]]) == 2
    assert matrix_rank([]) == 0


def test_top_parts_examples():
    tp = top_parts_compatible(R2.parse("(x+y)^2"), R2.parse("(x+y)^3"), (1, 1))
    assert tp.jac_zero and tp.proportional
    tp = top_parts_compatible(R2.parse("x+y^2"), R2.parse("y"), (1, 1))
    assert tp.jac_zero and tp.proportional
    tp = top_parts_compatible(R2.parse("x"), R2.parse("y"), (1, 1))
    assert not tp.jac_zero
    with pytest.raises(ValueError):
        top_parts_compatible(R2.parse("x"), R2.parse("y"), (1, -1))


def test_newton_triangle_examples():
    assert newton_triangle_test(R2.parse("y^2 - x^3"))
    assert not newton_triangle_test(R2.parse("x + y + x^2*y^2"))
    assert newton_triangle_test(R2.parse("1"))
    with pytest.raises(ValueError):
        newton_triangle_test(R2.zero())


def test_jacobian_derivation_examples():
    I = PolyMap.identity(R2)
    assert jacobian_derivation(I, 1).images == (R2.zero(), R2.one())
    F = M("x+y^2", "y")
    assert jacobian_derivation(F, 0).images == (R2.one(), R2.zero())
    assert isinstance(is_locally_nilpotent(jacobian_derivation(F, 1)), LocallyNilpotent)
    with pytest.raises(IndexError):
        jacobian_derivation(F, 2)


def test_determinant_three_by_three():
    m = [[R3.parse(s) for s in row] for row in [["x", "1", "0"], ["0", "y", "1"], ["1", "0", "z"]]]
    assert determinant(m, R3) == R3.parse("x*y*z + 1")


def test_json_round_trip():
    F = M("x+1/2*y^2", "y")
    assert PolyMap.from_json(F.to_json()) == F


# curated Keller automorphism pairs in two variables
KELLER_CORPUS = [
    ("x + y^2", "y"),
    ("x + (y + x^2)^2", "y + x^2"),
    ("x + y^3 + 2*y", "y"),
    ("x", "y + x^3 - x"),
    ("x + (y+x^3)^2", "y + x^3"),
    ("(x + y^2) + (y + (x+y^2)^2)^3", "y + (x+y^2)^2"),
    ("2*x + y^2", "3*y"),
]


@pytest.mark.parametrize("f,g", KELLER_CORPUS)
def test_corpus_magnus_and_top_parts(f, g):
    F = M(f, g)
    assert is_keller(F)
    df, dg = F[0].total_degree(), F[1].total_degree()
    if min(df, dg) > 1:
        assert gcd(df, dg) > 1
    if df + dg > 2:
        assert top_parts_compatible(F[0], F[1], (1, 1)).jac_zero
    r = invert_exact(F)
    assert r.found
    assert r.inverse.compose(F).is_identity() and F.compose(r.inverse).is_identity()
    slot = 0 if df >= dg else 1
    assert isinstance(is_locally_nilpotent(jacobian_derivation(F, slot)), LocallyNilpotent)


def small_maps(ring):
    return st.lists(polys(ring, 3, 2), min_size=ring.nvars, max_size=ring.nvars).map(
        lambda cs: PolyMap(ring, tuple(v + c for v, c in zip(ring.gens(), cs)))
    )


@settings(max_examples=100, deadline=None)
@given(small_maps(R2), small_maps(R2))
def test_jacobian_multiplicative(F, G):
    lhs = jacobian(G.compose(F)).determinant
    rhs = substitute(jacobian(G).determinant, F.components) * jacobian(F).determinant
    assert lhs == rhs


@settings(max_examples=50, deadline=None)
@given(small_maps(R2), st.integers(2, 5))
def test_formal_inverse_extends(F, N):
    # the truncation statement is about maps fixing the origin
    F = PolyMap(R2, tuple(R2.from_terms({e: c for e, c in f.terms.items() if any(e)}) for f in F))
    try:
        lo = formal_inverse(F, N)
    except SingularLinearPartError:
        return
    hi = formal_inverse(F, N + 1)
    for a, b in zip(lo.components, hi.components):
        assert a == R2.from_terms({e: c for e, c in b.terms.items() if sum(e) <= N})


@settings(max_examples=100, deadline=None)
@given(small_maps(R2), st.integers(0, 2))
def test_stable_extension_preserves_keller(F, m):
    assert is_keller(stable_extension(F, m)) == is_keller(F)


@settings(max_examples=200, deadline=None)
@given(polys(R2, 7, 5))
def test_newton_triangle_matches_brute_force(p):
    if not p:
        return
    pts = set(p.terms) | {(0, 0)}
    qx = max(a for a, b in pts)
    qy = max(b for a, b in pts)
    # brute force: every support point must lie in the triangle with legs qx, qy
    if qx == 0 or qy == 0:
        want = True
    else:
        want = all(a * qy + b * qx <= qx * qy for a, b in pts)
    assert newton_triangle_test(p) == want
