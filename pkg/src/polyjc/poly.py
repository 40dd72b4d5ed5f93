"""Exact sparse multivariate polynomials.

A :class:`Ring` fixes an ordered tuple of variable names and a coefficient
field (``None`` for the rationals, otherwise a :class:`NumberField`).  A
:class:`Poly` is an immutable map from exponent tuples to nonzero
coefficients.  Polynomials from different rings never combine.

The canonical monomial order is degrevlex with variables in declaration
order; it is used for printing and for leading terms.

Examples
--------
>>> R = Ring(("x", "y"))
>>> p = R.parse("(x+y)^2")
>>> str(p)
'x^2 + 2*x*y + y^2'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import kernels
from .numberfield import FieldElem, NumberField, to_fraction

__all__ = [
    "Ring",
    "Poly",
    "PolySyntaxError",
    "UnknownVariableError",
    "RingMismatchError",
    "NEG_INF",
    "Degrees",
    "NewtonPolygon",
    "degrevlex_key",
    "lex_key",
    "parse_poly",
    "differentiate",
    "substitute",
    "degrees",
    "content_primitive",
    "newton_polygon",
]


class PolySyntaxError(ValueError):
    """Malformed polynomial text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownVariableError(ValueError):
    def __init__(self, name: str, offset: int | None = None):
        where = "" if offset is None else f" at offset {offset}"
        super().__init__(f"unknown variable {name!r}{where}")
        self.name = name
        self.offset = offset


class RingMismatchError(ValueError):
    pass


class _NegInf:
    """Degree of the zero polynomial.  Compares below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf-degree")

    def __repr__(self):
        return "-inf"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()


def degrevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e):
    return tuple(e)


@dataclass(frozen=True)
class Ring:
    """Polynomial ring ``field[vars]``; ``field=None`` means the rationals."""

    vars: tuple
    field: NumberField | None = None

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        for v in self.vars:
            if not _IDENT.fullmatch(v):
                raise ValueError(f"invalid variable name {v!r}")
        if self.field is not None and self.field.name in self.vars:
            raise ValueError(f"variable {self.field.name!r} clashes with the field generator")

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise UnknownVariableError(name) from None

    def coerce(self, value):
        """Convert a scalar into this ring's coefficient type."""
        if self.field is None:
            if isinstance(value, FieldElem):
                return value.to_fraction()
            return to_fraction(value)
        return self.field(value)

    def zero_coeff(self):
        return Fraction(0) if self.field is None else self.field.zero()

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return self.const(1)

    def const(self, value) -> Poly:
        c = self.coerce(value)
        if not c:
            return self.zero()
        return Poly(self, {(0,) * self.nvars: c})

    def gen(self, which) -> Poly:
        i = which if isinstance(which, int) else self.index(which)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.coerce(1)})

    def gens(self) -> tuple:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps, coeff=1) -> Poly:
        c = self.coerce(coeff)
        if len(exps) != self.nvars:
            raise ValueError("exponent length does not match the ring")
        return Poly(self, {tuple(exps): c} if c else {})

    def from_terms(self, terms) -> Poly:
        out = {}
        for e, c in dict(terms).items():
            c = self.coerce(c)
            if c:
                e = tuple(int(x) for x in e)
                if len(e) != self.nvars or min(e, default=0) < 0:
                    raise ValueError(f"bad exponent {e}")
                out[e] = c
        return Poly(self, out)

    def __call__(self, value) -> Poly:
        if isinstance(value, Poly):
            if value.ring != self:
                raise RingMismatchError("polynomial belongs to another ring")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self)

    def extend(self, *names: str) -> Ring:
        return Ring(self.vars + tuple(names), self.field)

    def with_field(self, field: NumberField | None) -> Ring:
        return Ring(self.vars, field)

    def embed(self, p: Poly) -> Poly:
        """Map ``p`` from a ring whose variables are a subset of ours (matched by name)."""
        idx = [self.index(v) for v in p.ring.vars]
        out = {}
        for e, c in p.terms.items():
            f = [0] * self.nvars
            for j, k in zip(idx, e):
                f[j] = k
            out[tuple(f)] = self.coerce(c)
        return Poly(self, out)

    def __repr__(self):
        base = "QQ" if self.field is None else f"QQ[{self.field.name}]/({self.field.minpoly_str()})"
        return f"Ring({base}[{', '.join(self.vars)}])"


class Poly:
    """Immutable sparse polynomial.  ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # --- structure ---

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.zero_coeff())

    def coeff(self, exps):
        return self.terms.get(tuple(exps), self.ring.zero_coeff())

    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, var) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        if not self.terms:
            return NEG_INF
        return max(e[i] for e in self.terms)

    def sorted_terms(self, key=degrevlex_key):
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, key=degrevlex_key):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def support(self):
        return frozenset(self.terms)

    def variables_used(self) -> tuple:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(sorted(used))

    def coeffs_in(self, var) -> dict:
        """Coefficients with respect to one variable: ``{k: Poly}`` (same ring, var eliminated)."""
        i = var if isinstance(var, int) else self.ring.index(var)
        buckets: dict = {}
        for e, c in self.terms.items():
            f = e[:i] + (0,) + e[i + 1:]
            buckets.setdefault(e[i], {})[f] = c
        return {k: Poly(self.ring, v) for k, v in sorted(buckets.items())}

    # --- arithmetic ---

    def _other(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine {self.ring} with {other.ring}")
            return other
        if isinstance(other, (int, Fraction, FieldElem)) and not isinstance(other, bool):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if len(o.terms) > len(self.terms):
            a, b = o.terms, self.terms
        else:
            a, b = self.terms, o.terms
        out = dict(a)
        for e, c in b.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = -c
            else:
                v = v - c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly(self.ring, out)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)) and not isinstance(other, bool):
            return self.scale(other)
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return self.ring.zero()
        return Poly(self.ring, kernels.mul_terms(self.terms, o.terms))

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        c = self.ring.coerce(c)
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {e: v * c for e, v in self.terms.items()})

    def __truediv__(self, c):
        if isinstance(c, Poly):
            if not c.is_constant() or not c:
                return NotImplemented
            c = c.constant_coeff()
        c = self.ring.coerce(c)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self.scale(1 / c)

    def __pow__(self, k):
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_trunc(self, other: Poly, maxdeg: int) -> Poly:
        """Product with all terms of total degree > ``maxdeg`` discarded."""
        o = self._other(other)
        return Poly(self.ring, kernels.mul_terms_trunc(self.terms, o.terms, maxdeg))

    def truncate(self, maxdeg: int) -> Poly:
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) <= maxdeg})

    def homogeneous_part(self, k: int) -> Poly:
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == k})

    # --- calculus / composition ---

    def diff(self, var) -> Poly:
        return differentiate(self, var)

    def subs(self, images) -> Poly:
        return substitute(self, images)

    def evaluate(self, values):
        """Evaluate at a point given as a sequence of scalars."""
        acc = self.ring.zero_coeff()
        vals = [self.ring.coerce(v) for v in values]
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term = term * v**k
            acc = acc + term
        return acc

    # --- comparison / hashing ---

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElem)) and not isinstance(other, bool):
            if not other:
                return not self.terms
            return self.is_constant() and self.constant_coeff() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, vars={self.ring.vars})"


# --- parsing ---

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^/()]))")


def _tokenize(text: str):
    raw = text.encode("utf-8")
    # byte offsets: operate on the encoded form, decoding identifiers only
    s = raw.decode("latin-1")
    toks = []
    pos = 0
    n = len(s)
    while pos < n:
        m = _TOKEN.match(s, pos)
        if m is None or m.end() == pos:
            j = pos
            while j < n and s[j].isspace():
                j += 1
            if j >= n:
                break
            raise PolySyntaxError(f"unexpected character {s[j]!r}", j)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", len(s)))
    return toks


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, off = self.take()
        if kind != "op" or val != op:
            raise PolySyntaxError(f"expected {op!r}", off)

    def parse(self) -> Poly:
        kind, _, off = self.peek()
        if kind == "end":
            raise PolySyntaxError("empty expression", off)
        p = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {val!r}", off)
        return p

    def expr(self) -> Poly:
        p = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self) -> Poly:
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2, off2 = self.take()
            if k2 != "num":
                raise PolySyntaxError("exponent must be a non-negative integer", off2)
            base = base ** int(v2)
            k3, v3, off3 = self.peek()
            if k3 == "op" and v3 == "^":
                raise PolySyntaxError("chained exponent; use parentheses", off3)
        return base

    def atom(self) -> Poly:
        kind, val, off = self.take()
        if kind == "num":
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, off3 = self.take()
                if k3 != "num":
                    raise PolySyntaxError("expected denominator", off3)
                if int(v3) == 0:
                    raise PolySyntaxError("zero denominator", off3)
                return self.ring.const(Fraction(int(val), int(v3)))
            return self.ring.const(int(val))
        if kind == "ident":
            if val in self.ring.vars:
                return self.ring.gen(val)
            f = self.ring.field
            if f is not None and val == f.name:
                return self.ring.const(f.gen())
            raise UnknownVariableError(val, off)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", off)
        raise PolySyntaxError(f"unexpected {val!r}", off)


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse ``text`` into a polynomial of ``ring``.

    Grammar: identifiers are ring variables (or the field generator), numbers
    are integers or ``num/den`` literals, operators are ``+ - * ^`` with the
    usual precedence, unary minus is allowed and there is no implicit
    multiplication.

    Raises
    ------
    PolySyntaxError
        With the byte offset of the offending token.
    UnknownVariableError
        For identifiers that are neither variables nor the field generator.
    """
    if not isinstance(text, str):
        raise TypeError("polynomial text must be a string")
    return _Parser(text, ring).parse()


# --- printing ---

def _format_monomial(vars_, e) -> str:
    parts = []
    for v, k in zip(vars_, e):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical text form, degrevlex-descending.  Re-parses to the same polynomial."""
    if not p.terms:
        return "0"
    out = []
    for idx, (e, c) in enumerate(p.sorted_terms()):
        mon = _format_monomial(p.ring.vars, e)
        if isinstance(c, FieldElem) and not c.is_rational():
            body = f"({c})" + (f"*{mon}" if mon else "")
            out.append(body if idx == 0 else " + " + body)
            continue
        if isinstance(c, FieldElem):
            c = c.to_fraction()
        neg = c < 0
        a = -c if neg else c
        if not mon:
            body = str(a)
        elif a == 1:
            body = mon
        else:
            body = f"{a}*{mon}"
        if idx == 0:
            out.append("-" + body if neg else body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# --- operations ---

def differentiate(p: Poly, var) -> Poly:
    """Formal partial derivative with respect to ``var`` (index or name)."""
    i = var if isinstance(var, int) else p.ring.index(var)
    if not 0 <= i < p.ring.nvars:
        raise IndexError("variable index out of range")
    out = {}
    for e, c in p.terms.items():
        k = e[i]
        if k:
            f = e[:i] + (k - 1,) + e[i + 1:]
            out[f] = c * k
    return Poly(p.ring, out)


def substitute(p: Poly, images) -> Poly:
    """Compose: replace the i-th variable of ``p`` by ``images[i]``.

    All images must share one ring, which is the ring of the result.
    """
    images = list(images)
    if len(images) != p.ring.nvars:
        raise ValueError(f"expected {p.ring.nvars} images, got {len(images)}")
    if not images:
        return p
    target = images[0].ring
    for q in images:
        if not isinstance(q, Poly):
            raise TypeError("images must be polynomials")
        if q.ring != target:
            raise RingMismatchError("images live in different rings")
    cache = [{0: target.one(), 1: q} for q in images]

    def power(i, k):
        c = cache[i]
        if k not in c:
            h = k // 2
            c[k] = power(i, h) * power(i, k - h)
        return c[k]

    acc: dict = {}
    for e, c in p.terms.items():
        term = target.const(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
                if not term.terms:
                    break
        for f, v in term.terms.items():
            w = acc.get(f)
            w = v if w is None else w + v
            if w:
                acc[f] = w
            else:
                acc.pop(f, None)
    return Poly(target, acc)


@dataclass(frozen=True)
class Degrees:
    wdeg: object
    parts: dict
    top: Poly


def degrees(p: Poly, weights) -> Degrees:
    """Weighted degree, weighted homogeneous parts and top part of ``p``."""
    w = tuple(int(x) for x in weights)
    if len(w) != p.ring.nvars:
        raise ValueError("weight vector length does not match the ring")
    buckets: dict = {}
    for e, c in p.terms.items():
        d = sum(a * b for a, b in zip(e, w))
        buckets.setdefault(d, {})[e] = c
    parts = {d: Poly(p.ring, t) for d, t in sorted(buckets.items(), reverse=True)}
    if not parts:
        return Degrees(NEG_INF, {}, p.ring.zero())
    top = max(parts)
    return Degrees(top, parts, parts[top])


def content_primitive(p: Poly):
    """Split ``p = content * primitive`` over the rationals.

    Returns
    -------
    (Fraction, Poly)
        ``primitive`` has coprime integer coefficients and a positive
        degrevlex leading coefficient.
    """
    if not p.terms:
        raise ValueError("zero polynomial has no content")
    coeffs = []
    for c in p.terms.values():
        if isinstance(c, FieldElem):
            c = c.to_fraction()
        coeffs.append(c)
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    num = 0
    for c in coeffs:
        num = gcd(num, (c * den).numerator)
    content = Fraction(num, den)
    _, lead = p.leading_term()
    if lead < 0:
        content = -content
    prim = {e: (c / content) for e, c in p.terms.items()}
    return content, Poly(p.ring, prim)


@dataclass(frozen=True)
class NewtonPolygon:
    support: frozenset
    hull_vertices: tuple


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> tuple:
    """Counter-clockwise extreme points (monotone chain), starting at the lowest-left point."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)
    lower: list = []
    for q in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    upper: list = []
    for q in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    hull = lower[:-1] + upper[:-1]
    return tuple(hull)


def newton_polygon(p: Poly) -> NewtonPolygon:
    """Convex hull of the exponent support of ``p`` together with the origin."""
    if p.ring.nvars != 2:
        raise ValueError("Newton polygon needs exactly two variables")
    if not p.terms:
        raise ValueError("zero polynomial has no Newton polygon")
    support = frozenset(p.terms)
    return NewtonPolygon(support, convex_hull(support | {(0, 0)}))
