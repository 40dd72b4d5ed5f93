"""Buchberger's algorithm over the rationals and number fields.

Bases are reduced and sorted by descending leading monomial, so the output
is canonical for a given ideal and order.  Work is bounded by a pair cap and
a degree cap; exceeding either raises :class:`GroebnerCapError` rather than
returning a partial answer.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .poly import Poly, Ring, RingMismatchError, degrevlex_key, lex_key

__all__ = [
    "Ideal",
    "GroebnerBasis",
    "GroebnerCapError",
    "Caps",
    "DEFAULT_CAPS",
    "groebner_basis",
    "normal_form",
    "ideal_member",
    "is_unit_ideal",
]

ORDERS = {"degrevlex": degrevlex_key, "lex": lex_key}


class GroebnerCapError(RuntimeError):
    """A resource cap was hit; the question is undecided, not answered negatively."""


@dataclass
class Caps:
    max_pairs: int = 100_000
    max_degree: int = 60


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class Ideal:
    ring: Ring
    generators: tuple
    order: str = "degrevlex"

    def __init__(self, ring: Ring, generators, order: str = "degrevlex"):
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            if g.ring != ring:
                raise RingMismatchError("ideal generator outside the ring")
            if g:
                gens.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "order", order)


@dataclass(frozen=True)
class GroebnerBasis:
    ideal: Ideal
    basis: tuple
    order: str
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant() and bool(self.basis[0])


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(terms, key):
    e = max(terms, key=key)
    c = terms[e]
    if c == 1:
        return dict(terms), e
    inv = 1 / c
    return {k: v * inv for k, v in terms.items()}, e


def _reduce(f: dict, basis, leads, key, full: bool = True) -> dict:
    """Remainder of ``f`` on division by monic ``basis`` (lists of term dicts)."""
    f = dict(f)
    rem: dict = {}
    while f:
        e = max(f, key=key)
        c = f[e]
        for g, lg in zip(basis, leads):
            if _divides(lg, e):
                shift = tuple(x - y for x, y in zip(e, lg))
                kernels.sub_mul_term(f, g, c, shift)
                break
        else:
            if not full:
                rem.update(f)
                return rem
            rem[e] = c
            del f[e]
    return rem


def _is_constant(terms) -> bool:
    return len(terms) == 1 and not any(next(iter(terms)))


def _buchberger(gens, nvars, key, caps: Caps, stop_on_unit: bool):
    basis: list = []
    leads: list = []
    pairs: set = set()
    stats = {"pairs": 0, "skipped_coprime": 0, "skipped_chain": 0}
    one = None

    def add(poly_terms):
        nonlocal one
        g, lg = _monic(poly_terms, key)
        if sum(lg) > caps.max_degree:
            raise GroebnerCapError(f"basis degree exceeded {caps.max_degree}")
        k = len(basis)
        basis.append(g)
        leads.append(lg)
        if not any(lg):
            one = g
        for i in range(k):
            pairs.add((i, k))

    for g in gens:
        r = _reduce(g, basis, leads, key)
        if r:
            add(r)
            if one is not None and stop_on_unit:
                return basis, leads, stats, True

    while pairs and one is None:
        i, j = min(pairs, key=lambda p: (key(_lcm(leads[p[0]], leads[p[1]])), p[1], p[0]))
        pairs.discard((i, j))
        li, lj = leads[i], leads[j]
        lij = _lcm(li, lj)
        if all(not (x and y) for x, y in zip(li, lj)):
            stats["skipped_coprime"] += 1
            continue
        chain = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if (min(i, k), max(i, k)) in pairs or (min(j, k), max(j, k)) in pairs:
                continue
            if _divides(leads[k], lij):
                chain = True
                break
        if chain:
            stats["skipped_chain"] += 1
            continue
        stats["pairs"] += 1
        if stats["pairs"] > caps.max_pairs:
            raise GroebnerCapError(f"more than {caps.max_pairs} S-pairs")
        gi, gj = basis[i], basis[j]
        s: dict = {}
        kernels.sub_mul_term(s, gi, -1, tuple(a - b for a, b in zip(lij, li)))
        kernels.sub_mul_term(s, gj, 1, tuple(a - b for a, b in zip(lij, lj)))
        r = _reduce(s, basis, leads, key)
        if r:
            add(r)
            if one is not None and stop_on_unit:
                break
    return basis, leads, stats, one is not None


def _reduced(basis, leads, key, nvars):
    if any(not any(lg) for lg in leads):
        return [{(0,) * nvars: 1}], [(0,) * nvars]
    # minimal: drop elements whose lead is divisible by another lead
    keep = []
    for i, li in enumerate(leads):
        redundant = False
        for j, lj in enumerate(leads):
            if j == i:
                continue
            if _divides(lj, li) and (lj != li or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    mb = [basis[i] for i in keep]
    ml = [leads[i] for i in keep]
    out = []
    for idx, (g, lg) in enumerate(zip(mb, ml)):
        others = [h for k, h in enumerate(mb) if k != idx]
        olead = [h for k, h in enumerate(ml) if k != idx]
        tail = dict(g)
        c = tail.pop(lg)
        r = _reduce(tail, others, olead, key)
        r[lg] = c
        out.append((lg, r))
    out.sort(key=lambda t: key(t[0]), reverse=True)
    return [r for _, r in out], [lg for lg, _ in out]


def groebner_basis(ideal: Ideal, caps: Caps | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of ``ideal`` in its monomial order.

    Pair selection uses the normal strategy (smallest lcm first, ties broken
    by generator index); the coprime-leading-monomial and chain criteria
    discard redundant pairs.

    Raises
    ------
    GroebnerCapError
        When the pair or degree cap is exceeded.
    """
    caps = caps or DEFAULT_CAPS
    key = ORDERS[ideal.order]
    ring = ideal.ring
    if not ideal.generators:
        return GroebnerBasis(ideal, (), ideal.order, {})
    gens = [g.terms for g in ideal.generators]
    basis, leads, stats, _ = _buchberger(gens, ring.nvars, key, caps, stop_on_unit=True)
    rb, _ = _reduced(basis, leads, key, ring.nvars)
    polys = tuple(Poly(ring, {e: ring.coerce(c) for e, c in t.items()}) for t in rb)
    return GroebnerBasis(ideal, polys, ideal.order, stats)


def normal_form(p: Poly, gb: GroebnerBasis) -> Poly:
    """Unique remainder of ``p`` modulo the ideal of ``gb``."""
    if p.ring != gb.ideal.ring:
        raise RingMismatchError("polynomial and basis live in different rings")
    key = ORDERS[gb.order]
    leads = [g.leading_term(key)[0] for g in gb.basis]
    r = _reduce(p.terms, [g.terms for g in gb.basis], leads, key)
    return Poly(p.ring, r)


def ideal_member(p: Poly, ideal: Ideal | GroebnerBasis, caps: Caps | None = None) -> bool:
    gb = ideal if isinstance(ideal, GroebnerBasis) else groebner_basis(ideal, caps)
    return not normal_form(p, gb)


def is_unit_ideal(ideal: Ideal, caps: Caps | None = None) -> bool:
    """True iff the ideal contains 1.  Stops as soon as a constant appears."""
    caps = caps or DEFAULT_CAPS
    if not ideal.generators:
        return False
    key = ORDERS[ideal.order]
    for g in ideal.generators:
        if g.is_constant():
            return True
    _, _, _, unit = _buchberger(
        [g.terms for g in ideal.generators], ideal.ring.nvars, key, caps, stop_on_unit=True
    )
    return unit
