"""Derivations of polynomial rings and their exponentials.

A derivation is stored by its values on the variables and extended by the
Leibniz rule.  Local nilpotency is checked on the generators, which is
enough: finite length on generators propagates to the whole ring.  The
checker is sound but incomplete; it can refute nilpotency only through an
iterate that is a scalar multiple of an earlier one.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .poly import Poly, Ring, RingMismatchError, differentiate, substitute

__all__ = [
    "Derivation",
    "LocallyNilpotent",
    "NotNilpotentWitness",
    "UnknownCapExceeded",
    "SliceError",
    "NotVerifiedError",
    "InconclusiveError",
    "default_cap",
    "delta_apply",
    "delta_length",
    "is_locally_nilpotent",
    "exp_map",
    "ga_automorphism",
    "slice_decompose",
    "rentschler_verify",
]


class SliceError(ValueError):
    """The proposed slice does not satisfy ``delta(u) = 1``."""


class NotVerifiedError(ValueError):
    """The derivation has not been verified locally nilpotent."""


class InconclusiveError(RuntimeError):
    """A cap was exhausted before a decision was reached."""


@dataclass(frozen=True)
class Derivation:
    ring: Ring
    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != self.ring.nvars:
            raise ValueError(f"need {self.ring.nvars} images, got {len(imgs)}")
        for q in imgs:
            if not isinstance(q, Poly) or q.ring != self.ring:
                raise RingMismatchError("derivation images must lie in its ring")

    @classmethod
    def parse(cls, vars_, images, field=None) -> Derivation:
        ring = Ring(tuple(vars_), field)
        return cls(ring, tuple(ring.parse(q) if isinstance(q, str) else q for q in images))

    def __call__(self, p: Poly) -> Poly:
        return self.apply(p)

    def apply(self, p: Poly) -> Poly:
        if p.ring != self.ring:
            raise RingMismatchError("polynomial outside the derivation's ring")
        acc = self.ring.zero()
        for i, img in enumerate(self.images):
            if img:
                d = differentiate(p, i)
                if d:
                    acc = acc + img * d
        return acc

    def to_json(self) -> dict:
        return {"vars": list(self.ring.vars), "images": [str(q) for q in self.images]}

    @classmethod
    def from_json(cls, data: dict) -> Derivation:
        return cls.parse(data["vars"], data["images"])


def delta_apply(delta: Derivation, p: Poly, k: int = 1) -> Poly:
    """``delta^k(p)``."""
    if k < 0:
        raise ValueError("iterate count must be non-negative")
    for _ in range(k):
        if not p:
            break
        p = delta.apply(p)
    return p


def delta_length(delta: Derivation, p: Poly, cap: int) -> int | None:
    """Least ``n`` with ``delta^(n+1)(p) = 0``, searched for ``n <= cap``; ``None`` if not found."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    q = p
    for n in range(cap + 1):
        q = delta.apply(q)
        if not q:
            return n
    return None


# --- verdicts ---

@dataclass(frozen=True)
class LocallyNilpotent:
    """Every generator has finite length; ``bound`` is the largest."""

    bound: int
    lengths: tuple = ()
    status: str = "locally_nilpotent"


@dataclass(frozen=True)
class NotNilpotentWitness:
    """``delta^iterate(x_generator) = scalar * delta^earlier(x_generator) != 0``, so the chain never ends."""

    generator: int
    iterate: int
    earlier: int
    scalar: object
    value: Poly
    status: str = "not_nilpotent"


@dataclass(frozen=True)
class UnknownCapExceeded:
    cap: int
    status: str = "unknown"


def default_cap(delta: Derivation) -> int:
    total = 0
    for q in delta.images:
        if q:
            total += q.total_degree()
    return 1 + 8 * total


def _scalar_ratio(p: Poly, q: Poly):
    """``c`` with ``p = c*q`` if it exists (both nonzero), else ``None``."""
    if set(p.terms) != set(q.terms):
        return None
    e = next(iter(p.terms))
    c = p.terms[e] / q.terms[e]
    for k, v in p.terms.items():
        if v != c * q.terms[k]:
            return None
    return c


def is_locally_nilpotent(delta: Derivation, cap: int | None = None):
    """Decide local nilpotency where possible.

    Returns
    -------
    LocallyNilpotent | NotNilpotentWitness | UnknownCapExceeded
        A witness is returned only when an iterate is a nonzero scalar
        multiple of an earlier iterate of the same generator, which forces
        every later iterate to be nonzero.
    """
    cap = default_cap(delta) if cap is None else cap
    if cap < 1:
        raise ValueError("cap must be at least 1")
    lengths = []
    for i, x in enumerate(delta.ring.gens()):
        seen: dict = {}
        q = x
        found = None
        for k in range(0, cap + 1):
            if k:
                q = delta.apply(q)
            if not q:
                found = k - 1
                break
            sig = frozenset(q.terms)
            for j, earlier in seen.get(sig, ()):
                c = _scalar_ratio(q, earlier)
                if c is not None:
                    return NotNilpotentWitness(i, k, j, c, q)
            seen.setdefault(sig, []).append((k, q))
        if found is None:
            # one more application decides whether the last allowed iterate dies
            if delta.apply(q):
                return UnknownCapExceeded(cap)
            found = cap
        lengths.append(found)
    return LocallyNilpotent(max(lengths, default=0), tuple(lengths))


def _require_nilpotent(delta: Derivation, verdict=None) -> LocallyNilpotent:
    verdict = verdict if verdict is not None else is_locally_nilpotent(delta)
    if not isinstance(verdict, LocallyNilpotent):
        raise NotVerifiedError(f"derivation not verified locally nilpotent ({verdict.status})")
    return verdict


def _fresh(ring: Ring, base: str = "t") -> str:
    taken = set(ring.vars)
    if ring.field is not None:
        taken.add(ring.field.name)
    name, i = base, 1
    while name in taken:
        name = f"{base}{i}"
        i += 1
    return name


def exp_map(delta: Derivation, p: Poly, verdict=None, var: str | None = None) -> Poly:
    """``sum_n delta^n(p) t^n / n!`` in the ring extended by a new variable ``t``.

    Refuses derivations that are not verified locally nilpotent.
    """
    _require_nilpotent(delta, verdict)
    if p.ring != delta.ring:
        raise RingMismatchError("polynomial outside the derivation's ring")
    name = var or _fresh(delta.ring)
    ext = delta.ring.extend(name)
    t = ext.gen(name)
    acc = ext.zero()
    q, n = p, 0
    while q:
        acc = acc + ext.embed(q) * t**n / factorial(n)
        q = delta.apply(q)
        n += 1
    return acc


def _exp_at(delta: Derivation, p: Poly, c) -> Poly:
    acc = delta.ring.zero()
    c = delta.ring.coerce(c)
    q, n, cn = p, 0, delta.ring.coerce(1)
    while q:
        acc = acc + q.scale(cn / factorial(n))
        q = delta.apply(q)
        n += 1
        cn = cn * c
    return acc


def ga_automorphism(delta: Derivation, c, verdict=None):
    """The automorphism ``x_i -> exp(c*delta)(x_i)``."""
    from .keller import PolyMap

    _require_nilpotent(delta, verdict)
    return PolyMap(delta.ring, tuple(_exp_at(delta, x, c) for x in delta.ring.gens()))


def slice_decompose(delta: Derivation, u: Poly, p: Poly, cap: int | None = None) -> list:
    """Write ``p = sum_i c_i u^i`` with every ``c_i`` in the kernel.

    The top coefficient is ``delta^n(p) / n!`` with ``n`` the length of ``p``;
    subtracting ``c_n u^n`` lowers the length and the process repeats.

    Raises
    ------
    SliceError
        If ``delta(u) != 1``.
    InconclusiveError
        If the length of ``p`` exceeds ``cap``.
    """
    if delta.apply(u) != 1:
        raise SliceError("delta(u) must equal 1")
    cap = default_cap(delta) + p.total_degree() * 8 if cap is None and p else (cap or 1)
    n = delta_length(delta, p, cap) if p else 0
    if n is None:
        raise InconclusiveError(f"length of p exceeds cap {cap}")
    coeffs = [delta.ring.zero()] * (n + 1)
    rest = p
    upow = [delta.ring.one()]
    for _ in range(n):
        upow.append(upow[-1] * u)
    while rest:
        k = delta_length(delta, rest, max(n, 1))
        c = delta_apply(delta, rest, k) / factorial(k)
        coeffs[k] = c
        rest = rest - c * upow[k]
    for c in coeffs:
        if delta.apply(c):
            raise AssertionError("slice coefficient outside the kernel")
    return coeffs


def rentschler_verify(delta: Derivation, f: Poly, g: Poly, cap: int | None = None) -> bool:
    """Check that ``delta`` becomes ``P(x) d/dy`` in the coordinates ``(f, g)``.

    True iff ``(f, g)`` is an automorphism pair with an exact inverse,
    ``delta(f) = 0`` and ``delta(g)`` lies in ``k[f]``.  The last clause is
    tested by composing ``delta(g)`` with the inverse and checking that only
    the first variable survives.

    Raises
    ------
    InconclusiveError
        If no inverse is found within ``cap``.
    """
    from .keller import PolyMap, invert_exact, is_keller

    ring = delta.ring
    if ring.nvars != 2:
        raise ValueError("two variables required")
    F = PolyMap(ring, (f, g))
    if not is_keller(F):
        return False
    res = invert_exact(F, cap)
    if not res.found:
        raise InconclusiveError("no polynomial inverse found within the cap")
    if delta.apply(f):
        return False
    h = substitute(delta.apply(g), res.inverse.components)
    return all(e[1] == 0 for e in h.terms)
