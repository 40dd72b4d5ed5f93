"""Acceptance gate: one test per criterion, each recorded for the terminal summary."""
import random
import time
from fractions import Fraction

import pytest

import test_groebner
import test_keller
import test_lnd
import test_poly
from conftest import ACCEPTANCE
from polyjc.casebook import dickson_gh, family_endo, hom_check, pq_solve
from polyjc.fibration import FiberSpec, pseudo_plane_pi1, rh_enumerate, section_coefficient
from polyjc.keller import PolyMap, chain_rule_check, invert_exact
from polyjc.poly import Ring


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_criterion_01_cover_chart_table(criterion):
    with Timer() as tm:
        diffs = []
        for r in (3, 4):
            sol = pq_solve(2, r, ["a1", "a2"])
            R = sol.ring
            x, a1, a2 = R.gens()
            for j, w in enumerate(sol.roots):
                c2 = (a1**2 - 4 * a2).scale(w) / 8
                if r == 3:
                    want_p = R.const(w) - a1 / 2 * x + c2 * x**2
                    if sol.p[j] != want_p:
                        diffs.append(f"r=3 root={w} p={sol.p[j]}")
                else:
                    if sol.coefficients[j][3]:
                        diffs.append(f"r=4 root={w} c3={sol.coefficients[j][3]}")
                    if sol.q[j] != -(c2**2) * x:
                        diffs.append(f"r=4 root={w} q={sol.q[j]} (expected -c2^2*x)")
    ok = not diffs and tm.elapsed < 1
    criterion(1, ok, f"{tm.elapsed:.2f}s " + ("; ".join(diffs) or "exact match"))
    assert ok, diffs


def test_criterion_02_pseudo_plane_orders(criterion):
    with Timer() as tm:
        bad = [d for d in range(2, 9)
               if pseudo_plane_pi1(d, 1).abelian.torsion != (d * d,) or pseudo_plane_pi1(d, 1).abelian.free_rank]
    ok = not bad and tm.elapsed < 1
    criterion(2, ok, f"{tm.elapsed:.2f}s Z/d^2 for d=2..8" + (f"; bad {bad}" if bad else ""))
    assert ok


def test_criterion_03_platonic_eq(criterion):
    with Timer() as tm:
        sols = rh_enumerate("platonic_eq", {"s_max": 5, "m_max": 12, "N_max": 60})
    bad = [s for s in sols if not (s[0] == 1 and s[1] == (s[2],))]
    ok = bool(sols) and not bad and tm.elapsed < 10
    criterion(3, ok, f"{tm.elapsed:.2f}s {len(sols)} solutions, all s=1 and m1=N" if not bad else f"extra {bad[:3]}")
    assert ok


def test_criterion_04_platonic_ineq(criterion):
    with Timer() as tm:
        sols = rh_enumerate("platonic_ineq", {"s": 3, "m_max": 30, "N_max": 10**6})
    got = {ms for ms, _ in sols}
    want = {(2, 2, n) for n in range(2, 31)} | {(2, 3, 3), (2, 3, 4), (2, 3, 5)}
    ok = got == want and tm.elapsed < 10
    criterion(4, ok, f"{tm.elapsed:.2f}s families {{2,2,n}}, {{2,3,3}}, {{2,3,4}}, {{2,3,5}}"
              + ("" if got == want else f"; diff {sorted(got ^ want)}"))
    assert ok


def test_criterion_05_euler_zero(criterion):
    with Timer() as tm:
        got = set(rh_enumerate("euler_zero", {"m_max": 12, "r_max": 6}))
    want = {(2, 2, 2, 2), (2, 3, 6), (2, 4, 4), (3, 3, 3)}
    ok = got == want and tm.elapsed < 1
    criterion(5, ok, f"{tm.elapsed:.2f}s {sorted(got)}")
    assert ok


def test_criterion_06_box_search(criterion):
    with Timer() as tm:
        pts = rh_enumerate("thm256_box", {"h_max": 300, "n_max": 60})
    ok = pts == [] and tm.elapsed < 30
    criterion(6, ok, f"{tm.elapsed:.2f}s {len(pts)} points")
    assert ok


def test_criterion_07_section_rows(criterion):
    with Timer() as tm:
        a1 = section_coefficient(FiberSpec([(-1, 1)], [], [0])).alpha
        a2 = section_coefficient(FiberSpec([(-2, 1), (-2, 1), (-1, 2)], [(0, 2), (1, 2)], [0], [2])).alpha
    ok = a1 == 1 and a2 == Fraction(1, 2) and tm.elapsed < 1
    criterion(7, ok, f"{tm.elapsed:.2f}s alpha(h=1)={a1}, alpha(m=2,h=2)={a2}")
    assert ok


def test_criterion_08_etale_families(criterion):
    failed = []
    with Timer() as tm:
        cases = [("quadric_xyz", {"n": n}) for n in (2, 3, 4)]
        cases += [("xrz_yd", {"d": d, "r": r, "n": n}) for d in (2, 3) for r in (2, 3, 4) for n in (2, 3)]
        cases += [("twisted_x2u", {"n": n}) for n in (2, 3)]
        for fam, params in cases:
            v = hom_check(family_endo(fam, params))
            if not v.passed:
                failed.append(f"{fam}{params}: well_defined={v.well_defined} unramified={v.unramified}")
        t = Ring(("t",)).gen(0)
        for n in range(1, 9):
            g, h = dickson_gh(n)
            if g * g - 4 != (t * t - 4) * h:
                failed.append(f"dickson n={n}")
    ok = not failed and tm.elapsed < 60
    criterion(8, ok, f"{tm.elapsed:.2f}s {len(cases) - len(failed)}/{len(cases)} homs pass; "
              + ("; ".join(failed) or "dickson n<=8 ok"))
    assert ok, failed


def random_shear(rng, ring):
    """``x_i -> x_i + c * m`` with ``m`` a monomial of degree 1 or 2 in the other variables."""
    n = ring.nvars
    i = rng.randrange(n)
    others = [j for j in range(n) if j != i]
    exps = [0] * n
    for _ in range(rng.randint(1, 2)):
        exps[rng.choice(others)] += 1
    c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
    comps = list(ring.gens())
    comps[i] = comps[i] + ring.from_terms({tuple(exps): c})
    return PolyMap(ring, tuple(comps))


def test_criterion_09_inversion_oracle(criterion):
    rng = random.Random(20240917)
    rings = [Ring(("x", "y")), Ring(("x", "y", "z"))]
    bad = []
    with Timer() as tm:
        for k in range(50):
            ring = rings[k % 2]
            F = PolyMap.identity(ring)
            for _ in range(rng.randint(1, 4)):
                F = random_shear(rng, ring).compose(F)
            res = invert_exact(F)
            if not (res.found and res.inverse.compose(F).is_identity() and F.compose(res.inverse).is_identity()):
                bad.append((k, str(F)))
                continue
            if chain_rule_check(F, res.inverse) != 1:
                bad.append((k, "chain rule"))
    ok = not bad and tm.elapsed < 60
    criterion(9, ok, f"{tm.elapsed:.2f}s 50 shear chains inverted" + (f"; failures {bad[:2]}" if bad else ""))
    assert ok


PROPERTY_SUITES = [
    ("poly ring axioms", test_poly.test_ring_axioms),
    ("Gauss lemma", test_poly.test_gauss_lemma),
    ("exp_map homomorphism", test_lnd.test_exp_map_is_homomorphism),
    ("ga group law", test_lnd.test_ga_group_law),
    ("slice reconstruction", test_lnd.test_slice_reconstruction),
    ("normal_form idempotence", test_groebner.test_normal_form_properties),
    ("newton triangle vs brute force", test_keller.test_newton_triangle_matches_brute_force),
]


def test_criterion_10_property_suites(criterion):
    failed = []
    with Timer() as tm:
        for name, fn in PROPERTY_SUITES:
            assert fn.hypothesis.inner_test and fn._hypothesis_internal_use_settings.max_examples >= 200, name
            try:
                fn()
            except Exception as e:  # noqa: BLE001 - reported per suite
                failed.append(f"{name}: {type(e).__name__}")
    ok = not failed and tm.elapsed < 60
    criterion(10, ok, f"{tm.elapsed:.2f}s {len(PROPERTY_SUITES)} suites x 200 cases" + (f"; {failed}" if failed else ""))
    assert ok, failed


def test_criterion_11_scope(criterion):
    # headline theorems are not computable; acceptance is the executed suites above
    missing = [k for k in range(1, 11) if k not in ACCEPTANCE]
    ok = not missing
    criterion(11, ok, "suites 1-10 executed" if ok else f"criteria not run: {missing}")
    assert ok
