"""Polynomial endomorphisms of affine space.

Jacobians and the Keller condition, formal inversion by undetermined
coefficients, exact inversion with two-sided verification, stable
extensions, cubic-linear (Drużkowski) maps and the two-variable top-part and
Newton-polygon tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .poly import (
    Poly,
    Ring,
    RingMismatchError,
    degrees,
    differentiate,
    newton_polygon,
    substitute,
)

__all__ = [
    "PolyMap",
    "JacobianData",
    "TruncatedInverse",
    "SingularLinearPartError",
    "NotKellerError",
    "DEFAULT_INVERT_CAP",
    "determinant",
    "jacobian",
    "is_keller",
    "formal_inverse",
    "invert_exact",
    "chain_rule_check",
    "stable_extension",
    "druzkowski",
    "matrix_rank",
    "top_parts_compatible",
    "newton_triangle_test",
    "jacobian_derivation",
]

DEFAULT_INVERT_CAP = 64


class SingularLinearPartError(ValueError):
    """The linear part of the map at the origin is not invertible."""


class NotKellerError(ValueError):
    pass


@dataclass(frozen=True)
class PolyMap:
    """``F = (f_1, ..., f_n)`` with every component in one ``n``-variable ring."""

    ring: Ring
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.ring.nvars:
            raise ValueError(f"need {self.ring.nvars} components, got {len(comps)}")
        for f in comps:
            if not isinstance(f, Poly) or f.ring != self.ring:
                raise RingMismatchError("map components must live in the map's ring")

    @classmethod
    def parse(cls, vars_, components, field=None) -> PolyMap:
        ring = Ring(tuple(vars_), field)
        return cls(ring, tuple(ring.parse(c) if isinstance(c, str) else c for c in components))

    @classmethod
    def identity(cls, ring: Ring) -> PolyMap:
        return cls(ring, ring.gens())

    @property
    def n(self) -> int:
        return self.ring.nvars

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def compose(self, inner: PolyMap) -> PolyMap:
        """``self ∘ inner``: substitute ``inner`` into every component of ``self``."""
        if inner.ring != self.ring:
            raise RingMismatchError("maps live in different rings")
        return PolyMap(self.ring, tuple(substitute(f, inner.components) for f in self.components))

    def is_identity(self) -> bool:
        return self.components == self.ring.gens()

    def degree(self) -> int:
        return max((f.total_degree() for f in self.components if f), default=0)

    def to_json(self) -> dict:
        return {"vars": list(self.ring.vars), "components": [str(f) for f in self.components]}

    @classmethod
    def from_json(cls, data: dict) -> PolyMap:
        return cls.parse(data["vars"], data["components"])

    def __str__(self):
        return "(" + ", ".join(str(f) for f in self.components) + ")"


def determinant(matrix, ring: Ring) -> Poly:
    """Determinant of a square matrix of polynomials by memoized Laplace expansion."""
    n = len(matrix)
    if n == 0:
        return ring.one()
    memo: dict = {}

    def minor(row: int, cols: tuple) -> Poly:
        # determinant of rows row..n-1 restricted to cols
        if row == n:
            return ring.one()
        hit = memo.get(cols)
        if hit is not None:
            return hit
        acc = ring.zero()
        for k, c in enumerate(cols):
            entry = matrix[row][c]
            if not entry:
                continue
            sub = minor(row + 1, cols[:k] + cols[k + 1:])
            if not sub:
                continue
            term = entry * sub
            acc = acc - term if k % 2 else acc + term
        memo[cols] = acc
        return acc

    return minor(0, tuple(range(n)))


@dataclass(frozen=True)
class JacobianData:
    matrix: tuple
    determinant: Poly


def jacobian(F: PolyMap) -> JacobianData:
    m = tuple(tuple(differentiate(f, j) for j in range(F.n)) for f in F.components)
    return JacobianData(m, determinant(m, F.ring))


def is_keller(F: PolyMap) -> bool:
    """True iff the Jacobian determinant is a nonzero constant."""
    d = jacobian(F).determinant
    return bool(d) and d.is_constant()


# --- inversion ---

@dataclass(frozen=True)
class TruncatedInverse:
    """Components agree with a formal inverse of ``F`` up to total degree ``order``.

    ``translation`` is ``F(0)``; the components already include the shift
    ``y -> y - F(0)``.
    """

    order: int
    components: tuple
    translation: tuple


def _invert_matrix(mat, ring: Ring):
    n = len(mat)
    a = [[ring.coerce(v) for v in row] + [ring.coerce(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise SingularLinearPartError("linear part of the map is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _linear_part(F: PolyMap):
    n = F.n
    mat = []
    for f in F.components:
        row = []
        for j in range(n):
            e = tuple(1 if k == j else 0 for k in range(n))
            row.append(f.coeff(e))
        mat.append(row)
    return mat


def _apply_matrix(mat, vec, ring: Ring):
    out = []
    for row in mat:
        acc = ring.zero()
        for c, p in zip(row, vec):
            if c and p:
                acc = acc + p.scale(c)
        out.append(acc)
    return out


def _subs_trunc(p: Poly, images, maxdeg: int, cache) -> Poly:
    ring = images[0].ring
    acc = ring.zero()
    for e, c in p.terms.items():
        if sum(e) > maxdeg:
            # images have no constant term
            continue
        term = ring.const(c)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                pw = cache.get(key)
                if pw is None:
                    pw = images[i].truncate(maxdeg)
                    for _ in range(k - 1):
                        pw = pw.mul_trunc(images[i], maxdeg)
                    cache[key] = pw
                term = term.mul_trunc(pw, maxdeg)
                if not term:
                    break
        acc = acc + term
    return acc


def _inverse_steps(F: PolyMap, max_order: int):
    """Yield ``(k, G_k, G_{<=k})`` for the formal inverse of a map with ``F(0) = 0``."""
    ring = F.ring
    lin = _linear_part(F)
    linv = _invert_matrix(lin, ring)
    gens = list(ring.gens())
    higher = [f - f.homogeneous_part(1) - f.homogeneous_part(0) for f in F.components]
    g = _apply_matrix(linv, gens, ring)
    yield 1, tuple(g), tuple(g)
    for k in range(2, max_order + 1):
        cache: dict = {}
        hk = [_subs_trunc(h, g, k, cache).homogeneous_part(k) if h else ring.zero() for h in higher]
        gk = [-q for q in _apply_matrix(linv, hk, ring)]
        g = [a + b for a, b in zip(g, gk)]
        yield k, tuple(gk), tuple(g)


def _translate(F: PolyMap):
    shift = tuple(f.constant_coeff() for f in F.components)
    if not any(shift):
        return F, shift
    comps = tuple(f - f.constant_coeff() for f in F.components)
    return PolyMap(F.ring, comps), shift


def _untranslate(G, shift, ring: Ring):
    if not any(shift):
        return tuple(G)
    moved = [y - c for y, c in zip(ring.gens(), shift)]
    return tuple(substitute(g, moved) for g in G)


def formal_inverse(F: PolyMap, N: int) -> TruncatedInverse:
    """Inverse power series of ``F`` truncated at total degree ``N``.

    Solves ``F(G(y)) = y`` degree by degree: with ``F = L + H`` split into
    linear and higher parts, ``G_1 = L^{-1} y`` and
    ``G_k = -L^{-1} [H(G_{<k})]_k``.  A constant term is handled by
    inverting ``F - F(0)`` and substituting ``y - F(0)``.

    Raises
    ------
    SingularLinearPartError
        If the linear part at the origin is not invertible.
    """
    if N < 1:
        raise ValueError("truncation order must be at least 1")
    F0, shift = _translate(F)
    g = None
    for _, _, g in _inverse_steps(F0, N):
        pass
    return TruncatedInverse(N, _untranslate(g, shift, F.ring), shift)


@dataclass(frozen=True)
class InverseResult:
    """Outcome of :func:`invert_exact`.  ``inverse`` is ``None`` when the cap was exhausted."""

    inverse: PolyMap | None
    order: int | None
    cap: int

    @property
    def found(self) -> bool:
        return self.inverse is not None


def _two_sided(F: PolyMap, G: PolyMap) -> bool:
    return G.compose(F).is_identity() and F.compose(G).is_identity()


def invert_exact(F: PolyMap, cap: int | None = None) -> InverseResult:
    """Look for a polynomial inverse of a Keller map.

    Whenever a homogeneous piece of the formal inverse vanishes, the current
    truncation is tested as an exact two-sided inverse.  Exhausting ``cap``
    means nothing was found: it does not prove that no inverse exists.
    """
    cap = DEFAULT_INVERT_CAP if cap is None else cap
    if not is_keller(F):
        raise NotKellerError("map does not satisfy the Keller condition")
    F0, shift = _translate(F)
    for k, gk, g in _inverse_steps(F0, cap + 1):
        if k > 1 and any(gk):
            continue
        cand = PolyMap(F.ring, _untranslate(g, shift, F.ring))
        if _two_sided(F, cand):
            return InverseResult(cand, k - 1 if k > 1 else 1, cap)
    return InverseResult(None, None, cap)


def chain_rule_check(F: PolyMap, G: PolyMap) -> Poly:
    """``J(G)(F(x)) * J(F)(x)``; equals 1 when ``G`` inverts ``F``."""
    jg = jacobian(G).determinant
    jf = jacobian(F).determinant
    return substitute(jg, F.components) * jf


# --- constructions ---

_EXTRA_NAMES = ("z", "w", "u", "v", "s")


def _fresh_names(used, m: int):
    out = []
    used = set(used)
    for name in _EXTRA_NAMES:
        if len(out) == m:
            return out
        if name not in used:
            out.append(name)
            used.add(name)
    i = len(used) + 1
    while len(out) < m:
        name = f"x{i}"
        if name not in used:
            out.append(name)
            used.add(name)
        i += 1
    return out


def stable_extension(F: PolyMap, m: int) -> PolyMap:
    """Append ``m`` identity coordinates in fresh variables."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return F
    names = _fresh_names(F.ring.vars, m)
    ring = F.ring.extend(*names)
    comps = tuple(ring.embed(f) for f in F.components) + tuple(ring.gen(v) for v in names)
    return PolyMap(ring, comps)


def matrix_rank(rows) -> int:
    """Rank of a rational matrix by exact elimination."""
    a = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][col]:
                f = a[r][col] / a[rank][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def default_vars(n: int) -> tuple:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


@dataclass(frozen=True)
class DruzkowskiMap:
    map: PolyMap
    rank: int


def druzkowski(A, vars_=None) -> DruzkowskiMap:
    """``F = X + K`` with ``k_i = (sum_j a[j][i] x_j)^3``: component ``i`` reads column ``i``."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    ring = Ring(tuple(vars_) if vars_ else default_vars(n))
    xs = ring.gens()
    comps = []
    for i in range(n):
        lin = ring.zero()
        for j in range(n):
            a = Fraction(A[j][i])
            if a:
                lin = lin + xs[j].scale(a)
        comps.append(xs[i] + lin**3)
    return DruzkowskiMap(PolyMap(ring, tuple(comps)), matrix_rank(A))


# --- two-variable criteria ---

def _proportional(p: Poly, q: Poly) -> bool:
    if not p or not q or set(p.terms) != set(q.terms):
        return False
    e = next(iter(p.terms))
    ratio = p.terms[e] / q.terms[e]
    return all(p.terms[k] == ratio * q.terms[k] for k in p.terms)


@dataclass(frozen=True)
class TopParts:
    jac_zero: bool
    proportional: bool
    f_degree: int
    g_degree: int


def top_parts_compatible(f: Poly, g: Poly, weights) -> TopParts:
    """Compare the top weighted parts of a pair in two variables.

    ``jac_zero`` says the Jacobian of the two top parts vanishes.
    ``proportional`` says ``(f+)^(n/d)`` and ``(g+)^(m/d)`` agree up to a
    nonzero scalar, where ``m, n`` are the weighted degrees and ``d`` their gcd.
    """
    if f.ring != g.ring:
        raise RingMismatchError("f and g live in different rings")
    if f.ring.nvars != 2:
        raise ValueError("top-part comparison needs two variables")
    df, dg = degrees(f, weights), degrees(g, weights)
    m, n = df.wdeg, dg.wdeg
    if not isinstance(m, int) or not isinstance(n, int) or m <= 0 or n <= 0:
        raise ValueError("weighted degrees must be positive")
    ft, gt = df.top, dg.top
    jz = determinant(
        ((differentiate(ft, 0), differentiate(ft, 1)), (differentiate(gt, 0), differentiate(gt, 1))),
        f.ring,
    )
    d = gcd(m, n)
    return TopParts(not jz, _proportional(ft ** (n // d), gt ** (m // d)), m, n)


def newton_triangle_test(p: Poly) -> bool:
    """True iff every Newton-polygon vertex lies on a coordinate axis."""
    if not p:
        raise ValueError("zero polynomial")
    return all(a == 0 or b == 0 for a, b in newton_polygon(p).hull_vertices)


def jacobian_derivation(F: PolyMap, i: int):
    """Derivation ``h -> det J(f_1, ..., h, ..., f_n)`` with ``h`` in slot ``i`` (0-based).

    Its value on ``x_j`` is the determinant with row ``i`` replaced by ``e_j``.
    """
    from .lnd import Derivation

    if not 0 <= i < F.n:
        raise IndexError("slot out of range")
    jm = jacobian(F).matrix
    ring = F.ring
    images = []
    for j in range(F.n):
        row = tuple(ring.one() if k == j else ring.zero() for k in range(F.n))
        m = list(jm)
        m[i] = row
        images.append(determinant(m, ring))
    return Derivation(ring, tuple(images))
