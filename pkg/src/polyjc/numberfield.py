"""Simple algebraic extensions of the rationals.

A :class:`NumberField` is ``Q[t]/(m(t))`` for a monic irreducible ``m``.
Elements are stored as fully reduced coefficient vectors, so equality is plain
vector comparison.  Rationals are :class:`fractions.Fraction` throughout.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "Fraction",
    "NumberField",
    "FieldElem",
    "QQ_FIELD",
    "cyclotomic_field",
    "cyclotomic_polynomial",
    "to_fraction",
]


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {value!r} as an exact rational")


# --- dense univariate helpers over Q (coefficient lists, low degree first) ---

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _upoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _upoly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim(x - y for x, y in zip(a, b))


def _upoly_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lead
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] -= c * y
        r = _trim(r)
    return _trim(q), r


def _upoly_egcd(a, b):
    """Return ``(g, s)`` with ``s*a = g (mod b)`` and ``g`` monic."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = [Fraction(1)], []
    while r1:
        q, r = _upoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _upoly_sub(s0, _upoly_mul(q, s1))
    lead = r0[-1]
    return [c / lead for c in r0], [c / lead for c in s0]


# --- cyclotomic polynomials ---

_cyclo_lock = threading.RLock()


@lru_cache(maxsize=None)
def _cyclotomic(d: int) -> tuple:
    num = [Fraction(-1)] + [Fraction(0)] * (d - 1) + [Fraction(1)]
    for e in range(1, d):
        if d % e == 0:
            num, rem = _upoly_divmod(num, list(_cyclotomic(e)))
            assert not rem
    return tuple(num)


def cyclotomic_polynomial(d: int) -> tuple:
    """Coefficients (low degree first) of the d-th cyclotomic polynomial."""
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    with _cyclo_lock:
        return _cyclotomic(d)


class NumberField:
    """``Q[name]/(minpoly)``; ``minpoly`` is given low-degree-first and monic.

    Fields compare by value.  ``order`` is set for cyclotomic fields and is the
    multiplicative order of the generator.
    """

    __slots__ = ("minpoly", "name", "degree", "order", "_powers")

    def __init__(self, minpoly, name: str = "t", order: int | None = None):
        coeffs = _trim(to_fraction(c) for c in minpoly)
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.minpoly = tuple(coeffs)
        self.name = name
        self.degree = len(coeffs) - 1
        self.order = order
        # t^k reduced, for k < 2*degree - 1
        n = self.degree
        powers = []
        cur = [Fraction(0)] * n
        cur[0] = Fraction(1)
        for _ in range(2 * n - 1):
            powers.append(tuple(cur))
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                for i in range(n):
                    cur[i] -= top * self.minpoly[i]
        self._powers = powers

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.minpoly == other.minpoly
            and self.name == other.name
        )

    def __hash__(self):
        return hash((self.minpoly, self.name))

    def __repr__(self):
        return f"NumberField({self.minpoly_str()}, degree={self.degree})"

    def minpoly_str(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.minpoly[k]
            if c:
                terms.append(_fmt_monomial(c, self.name, k))
        return _join_terms(terms)

    def __call__(self, value) -> FieldElem:
        if isinstance(value, FieldElem):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return self._reduce([to_fraction(v) for v in value])
        c = to_fraction(value)
        return FieldElem(self, (c,) + (Fraction(0),) * (self.degree - 1))

    def gen(self) -> FieldElem:
        return self._reduce([Fraction(0), Fraction(1)])

    def zero(self) -> FieldElem:
        return self(0)

    def one(self) -> FieldElem:
        return self(1)

    def root_of_unity(self, j: int) -> FieldElem:
        """``t**j`` for a cyclotomic field (j taken modulo the order)."""
        if self.order is None:
            raise ValueError("field has no distinguished root of unity")
        return self.gen() ** (j % self.order)

    def _reduce(self, coeffs) -> FieldElem:
        n = self.degree
        out = [Fraction(0)] * n
        for k, c in enumerate(coeffs):
            if not c:
                continue
            if k < len(self._powers):
                row = self._powers[k]
                for i in range(n):
                    if row[i]:
                        out[i] += c * row[i]
            else:
                _, r = _upoly_divmod([Fraction(0)] * k + [c], list(self.minpoly))
                for i, x in enumerate(r):
                    out[i] += x
        return FieldElem(self, tuple(out))


class FieldElem:
    """Element of a :class:`NumberField`, stored reduced modulo the minimal polynomial."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _lift(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("cannot combine elements of different fields")
            return other
        try:
            return self.field(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-a for a in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldElem(self.field, tuple(a * other for a in self.coeffs))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.field.degree == 1:
            return FieldElem(self.field, (self.coeffs[0] * o.coeffs[0],))
        prod = [Fraction(0)] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return self.field._reduce(prod)

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if not self:
            raise ZeroDivisionError("inverse of zero in a number field")
        if self.field.degree == 1:
            return FieldElem(self.field, (1 / self.coeffs[0],))
        g, s = _upoly_egcd(list(self.coeffs), list(self.field.minpoly))
        if len(g) != 1:
            raise ZeroDivisionError("element is a zero divisor; minimal polynomial is reducible")
        return self.field._reduce(s)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = self.field.one()
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __str__(self):
        terms = []
        for k in range(self.field.degree - 1, -1, -1):
            c = self.coeffs[k]
            if c:
                terms.append(_fmt_monomial(c, self.field.name, k))
        return _join_terms(terms)

    def __repr__(self):
        return f"FieldElem({self})"


def _fmt_monomial(c: Fraction, name: str, k: int) -> str:
    if k == 0:
        return str(c)
    mon = name if k == 1 else f"{name}^{k}"
    if c == 1:
        return mon
    if c == -1:
        return "-" + mon
    return f"{c}*{mon}"


def _join_terms(terms) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


QQ_FIELD = None  # the rationals are represented by the absence of a field


@lru_cache(maxsize=None)
def _cyclotomic_field(d: int) -> NumberField:
    return NumberField(cyclotomic_polynomial(d), "t", order=d)


def cyclotomic_field(d: int) -> NumberField:
    """``Q(zeta_d) = Q[t]/(Phi_d(t))``; the generator ``t`` has order exactly ``d``."""
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    with _cyclo_lock:
        return _cyclotomic_field(d)
