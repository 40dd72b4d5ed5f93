"""Boundary graphs, groups at infinity and fibration arithmetic.

Weighted trees give Mumford–Ramanujam style group presentations; their
abelianizations come from a Smith normal form.  Group isomorphism is not
decidable in general, so presentations are compared through computable
shadows: abelian invariants and counts of subgroups of small index.

The remaining functions are exact enumerations and small linear solves over
the rationals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd, prod

from . import kernels

__all__ = [
    "WeightedTree",
    "GroupPresentation",
    "AbelianInvariants",
    "FiberSpec",
    "GraphError",
    "SingularSystemError",
    "presentation_from_tree",
    "remove_appendix",
    "intersection_form",
    "smith_normal_form",
    "abelianization",
    "h1_infinity",
    "subgroup_counts",
    "pseudo_plane_pi1",
    "pic_invariants",
    "cusp_genus",
    "cusp_genus_oracle",
    "rh_enumerate",
    "section_coefficient",
    "canonical_index",
    "boundary_lines_count",
]


class GraphError(ValueError):
    pass


class SingularSystemError(ValueError):
    pass


# --- graphs and presentations ---

@dataclass(frozen=True)
class WeightedTree:
    """A weighted tree; ``ordering`` fixes the vertex order used by presentations."""

    vertices: tuple
    edges: tuple
    ordering: tuple = ()

    def __init__(self, vertices, edges=(), ordering=None):
        verts = tuple((str(v), int(w)) for v, w in vertices)
        ids = [v for v, _ in verts]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate vertex id")
        es = []
        seen = set()
        for a, b in edges:
            a, b = str(a), str(b)
            if a not in ids or b not in ids:
                raise GraphError(f"edge ({a}, {b}) references an unknown vertex")
            if a == b:
                raise GraphError("self-loop")
            key = frozenset((a, b))
            if key in seen:
                raise GraphError("repeated edge")
            seen.add(key)
            es.append((a, b))
        order = tuple(str(v) for v in ordering) if ordering else tuple(ids)
        if sorted(order) != sorted(ids):
            raise GraphError("ordering must list every vertex exactly once")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(es))
        object.__setattr__(self, "ordering", order)
        self._check_tree()

    def _check_tree(self):
        n = len(self.vertices)
        if n == 0:
            return
        if len(self.edges) != n - 1:
            raise GraphError("graph is not a tree (edge count)")
        adj = self.adjacency()
        start = self.vertices[0][0]
        stack, reached = [start], {start}
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in reached:
                    reached.add(w)
                    stack.append(w)
        if len(reached) != n:
            raise GraphError("graph is disconnected")

    def adjacency(self) -> dict:
        adj = {v: set() for v, _ in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def weight(self, v) -> int:
        return dict(self.vertices)[v]

    def is_chain(self) -> bool:
        return all(len(n) <= 2 for n in self.adjacency().values())

    @classmethod
    def chain(cls, weights, prefix: str = "v") -> WeightedTree:
        ids = [f"{prefix}{i + 1}" for i in range(len(weights))]
        return cls(list(zip(ids, weights)), list(zip(ids, ids[1:])))

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "w": w} for v, w in self.vertices],
            "edges": [list(e) for e in self.edges],
            "ordering": list(self.ordering),
        }

    @classmethod
    def from_json(cls, data: dict) -> WeightedTree:
        verts = [(d["id"], d["w"]) for d in data["vertices"]]
        return cls(verts, [tuple(e) for e in data.get("edges", [])], data.get("ordering"))


@dataclass(frozen=True)
class GroupPresentation:
    """Generators plus relator words; a word is a tuple of ``(generator, exponent)``."""

    generators: tuple
    relators: tuple

    def __post_init__(self):
        gens = set(self.generators)
        for w in self.relators:
            for g, _ in w:
                if g not in gens:
                    raise ValueError(f"relator uses undeclared generator {g!r}")

    def word_str(self, w) -> str:
        if not w:
            return "e"
        return "*".join(g if e == 1 else f"{g}^{e}" for g, e in w)

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [[[g, e] for g, e in w] for w in self.relators],
        }


def _word(pairs):
    out = []
    for g, e in pairs:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            k = out[-1][1] + e
            out.pop()
            if k:
                out.append((g, k))
        else:
            out.append((g, e))
    return tuple(out)


def presentation_from_tree(tree: WeightedTree) -> GroupPresentation:
    """One generator per vertex, one relator per vertex and one commutator per edge.

    For a vertex ``v`` of weight ``d`` the relator is the product, in the
    tree's ordering, of ``v`` and its neighbours, with ``v`` raised to ``d``.
    """
    pos = {v: i for i, v in enumerate(tree.ordering)}
    adj = tree.adjacency()
    weights = dict(tree.vertices)
    rels = []
    for v in tree.ordering:
        slots = sorted(adj[v] | {v}, key=pos.__getitem__)
        rels.append(_word((u, weights[v] if u == v else 1) for u in slots))
    for a, b in tree.edges:
        a, b = sorted((a, b), key=pos.__getitem__)
        rels.append(_word([(a, 1), (b, 1), (a, -1), (b, -1)]))
    return GroupPresentation(tuple(tree.ordering), tuple(rels))


def remove_appendix(tree: WeightedTree, u: str, v: str) -> WeightedTree:
    """Drop an appendix ``{u, v}``: ``u`` has weight 0 and touches only ``v``; ``v`` has at most one other neighbour."""
    adj = tree.adjacency()
    if u not in adj or v not in adj:
        raise GraphError("unknown vertex")
    if tree.weight(u) != 0:
        raise GraphError(f"{u} must have weight 0")
    if adj[u] != {v}:
        raise GraphError(f"{u} must be linked only to {v}")
    if len(adj[v] - {u}) > 1:
        raise GraphError(f"{v} is linked to more than one vertex besides {u}")
    gone = {u, v}
    verts = [(x, w) for x, w in tree.vertices if x not in gone]
    edges = [(a, b) for a, b in tree.edges if a not in gone and b not in gone]
    order = [x for x in tree.ordering if x not in gone]
    return WeightedTree(verts, edges, order)


# --- integer linear algebra ---

def bareiss_det(m) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class IntersectionForm:
    matrix: tuple
    det: int
    negative_definite: bool
    order: tuple


def intersection_form(tree: WeightedTree) -> IntersectionForm:
    """Weights on the diagonal, 1 for each edge; definiteness from leading minors."""
    order = tree.ordering
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    m = [[0] * n for _ in range(n)]
    for v, w in tree.vertices:
        m[pos[v]][pos[v]] = w
    for a, b in tree.edges:
        m[pos[a]][pos[b]] = m[pos[b]][pos[a]] = 1
    minors = [bareiss_det([row[:k] for row in m[:k]]) for k in range(1, n + 1)]
    negdef = all((-1) ** k * d > 0 for k, d in enumerate(minors, start=1))
    return IntersectionForm(tuple(map(tuple, m)), bareiss_det(m), negdef, order)


def smith_normal_form(matrix) -> list:
    """Diagonal of the Smith normal form (non-negative, each dividing the next; zeros last)."""
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                # the pivot must divide the remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            nz = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            nz += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, pi, pj = min(nz)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    diag += [0] * (min(rows, cols) - len(diag))
    return diag


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^free_rank + Z/torsion[0] + ...`` with each torsion entry dividing the next."""

    torsion: tuple
    free_rank: int

    @property
    def order(self) -> int | None:
        return None if self.free_rank else prod(self.torsion)

    @property
    def is_cyclic(self) -> bool:
        return len(self.torsion) + self.free_rank <= 1

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion), "free_rank": self.free_rank, "order": self.order}


def relation_matrix(p: GroupPresentation) -> list:
    idx = {g: i for i, g in enumerate(p.generators)}
    rows = []
    for w in p.relators:
        row = [0] * len(p.generators)
        for g, e in w:
            row[idx[g]] += e
        rows.append(row)
    return rows


def abelianization(p: GroupPresentation) -> AbelianInvariants:
    n = len(p.generators)
    if n == 0:
        return AbelianInvariants((), 0)
    rows = relation_matrix(p) or [[0] * n]
    diag = smith_normal_form(rows)
    rank = sum(1 for d in diag if d)
    return AbelianInvariants(tuple(d for d in diag if d > 1), n - rank)


def h1_infinity(tree: WeightedTree) -> AbelianInvariants:
    return abelianization(presentation_from_tree(tree))


def subgroup_counts(p: GroupPresentation, max_index: int = 6) -> tuple:
    """Number of subgroups of each index ``1..max_index`` (low-index coset enumeration).

    Coset tables are filled at their first undefined entry and new cosets
    are numbered in order of appearance, so each subgroup is met once.
    """
    gens = list(p.generators)
    k = len(gens)
    gi = {g: i for i, g in enumerate(gens)}
    # column 2i is generator i, column 2i+1 its inverse
    rels = []
    for w in p.relators:
        cols = []
        for g, e in w:
            c = 2 * gi[g] + (0 if e > 0 else 1)
            cols.extend([c] * abs(e))
        if cols:
            rels.append(cols)
    ncols = 2 * k
    counts = [0] * (max_index + 1)

    def consistent(table, n):
        for c in range(n):
            for r in rels:
                x = c
                for col in r:
                    x = table[x][col]
                    if x is None:
                        break
                else:
                    if x != c:
                        return False
        return True

    def search(table, n):
        for c in range(n):
            for col in range(ncols):
                if table[c][col] is None:
                    inv = col ^ 1
                    for d in range(n):
                        if table[d][inv] is None:
                            table[c][col] = d
                            table[d][inv] = c
                            if consistent(table, n):
                                search(table, n)
                            table[c][col] = None
                            table[d][inv] = None
                    if n < max_index:
                        table.append([None] * ncols)
                        table[c][col] = n
                        table[n][inv] = c
                        if consistent(table, n + 1):
                            search(table, n + 1)
                        table[c][col] = None
                        table.pop()
                    return
        counts[n] += 1

    if k == 0:
        return tuple([1] + [0] * (max_index - 1))
    search([[None] * ncols], 1)
    return tuple(counts[1:])


@dataclass(frozen=True)
class PseudoPlaneGroup:
    presentation: GroupPresentation
    abelian: AbelianInvariants


def pseudo_plane_pi1(d: int, r: int) -> PseudoPlaneGroup:
    """Two generators with ``x^r = y^d = (xy)^d``."""
    if d < 2 or r < 1:
        raise ValueError("need d >= 2 and r >= 1")
    rels = (
        _word([("x", r), ("y", -d)]),
        _word([("y", d)] + [("y", -1), ("x", -1)] * d),
    )
    pres = GroupPresentation(("x", "y"), rels)
    return PseudoPlaneGroup(pres, abelianization(pres))


# --- Picard group, genus ---

@dataclass(frozen=True)
class PicInvariants:
    rank: int
    torsion: tuple | None


def pic_invariants(base: str, fibers, require_torsion: bool = False) -> PicInvariants:
    """Picard rank from fiber component counts; torsion when every fiber is irreducible over the affine line.

    ``fibers`` is a list of ``(component_count, multiplicity)``.
    """
    base = base.upper()
    if base not in ("A1", "P1"):
        raise ValueError("base must be A1 or P1")
    fibers = [(int(r), int(m)) for r, m in fibers]
    for r, m in fibers:
        if r < 1 or m < 1:
            raise ValueError("component counts and multiplicities must be positive")
    rank = sum(r - 1 for r, _ in fibers) + (1 if base == "P1" else 0)
    torsion = None
    if base == "A1" and all(r == 1 for r, _ in fibers):
        diag = smith_normal_form([[m if i == j else 0 for j in range(len(fibers))]
                                  for i, (_, m) in enumerate(fibers)]) if fibers else []
        torsion = tuple(x for x in diag if x > 1)
    elif require_torsion:
        raise ValueError("torsion is only determined for irreducible fibers over A1")
    return PicInvariants(rank, torsion)


@dataclass(frozen=True)
class CuspGenus:
    mult_sequence: tuple
    genus: int
    ell1: int
    n: int


def cusp_genus(m1: int, m2: int) -> CuspGenus:
    """Genus of ``X^m1 - Y^m2 = 1`` from its cusp at infinity.

    The cusp has type ``z^l1 = y^n`` with ``l1 = m2 - m1`` and ``n = m2``;
    its multiplicity sequence comes from the Euclidean algorithm on
    ``(n, l1)`` and the genus is ``(n-1)(n-l1-1)/2``.
    """
    if not 1 <= m1 < m2:
        raise ValueError("need 1 <= m1 < m2")
    if gcd(m1, m2) != 1:
        raise ValueError("m1 and m2 must be coprime")
    n, ell1 = m2, m2 - m1
    seq = []
    a, b = n, ell1
    while b > 1:
        seq.extend([b] * (a // b))
        a, b = b, a % b
    g = Fraction((n - 1) * (n - ell1 - 1), 2)
    if g.denominator != 1:
        raise ArithmeticError("genus formula gave a non-integer")
    return CuspGenus(tuple(seq), int(g), ell1, n)


def cusp_genus_oracle(m1: int, m2: int) -> int:
    """Plane-curve genus ``(n-1)(n-2)/2 - sum l(l-1)/2`` over the multiplicity sequence."""
    res = cusp_genus(m1, m2)
    n = res.n
    drop = sum(x * (x - 1) for x in res.mult_sequence) // 2
    return (n - 1) * (n - 2) // 2 - drop


# --- enumerations ---

def _need(bounds: dict, *names):
    missing = [k for k in names if k not in bounds]
    if missing:
        raise ValueError(f"missing bound(s): {', '.join(missing)}")
    return [int(bounds[k]) for k in names]


def rh_enumerate(mode: str, bounds: dict) -> list:
    """Exhaustive integer solutions of the ramification and Euler-number equations.

    Modes
    -----
    euler_zero
        sorted ``(m_1..m_r)`` with ``m_i >= 2``, ``r >= 3`` and ``sum 1/m_i = r - 2``.
        Bounds ``m_max``, ``r_max``.
    lemma2311
        ``(d, n, s)`` with ``1 - (n + s) = d(1 - n)`` and ``2s + n <= dn``.
        Bounds ``d_max``, ``n_max``, ``s_max``.
    platonic_eq
        ``(s, ms, N)`` with ``sum 1/m_i = (s - 1) + 1/N``, ``m_i >= 2``, ``N >= 2``.
        Bounds ``s_max``, ``m_max``, ``N_max``.
    platonic_ineq
        ``(ms, N)`` with ``2N - 2 = sum (N/m_i)(m_i - 1)``, ``m_i >= 2``.
        Bounds ``s``, ``m_max``, ``N_max``.
    thm256_box
        ``(h1, h2, h3, n)`` with ``h1/2 + h2/3 + h3/5 = n + 2`` and
        ``h1/4 + h2/9 + h3/25 > n``, ``h1 >= 4, h2 >= 6, h3 >= 10``.
        Bounds ``h_max``, ``n_max``.
    """
    if mode == "euler_zero":
        m_max, r_max = _need(bounds, "m_max", "r_max")
        out = []
        for r in range(3, r_max + 1):
            for ms in combinations_with_replacement(range(2, m_max + 1), r):
                if sum(Fraction(1, m) for m in ms) == r - 2:
                    out.append(ms)
        return out
    if mode == "lemma2311":
        d_max, n_max, s_max = _need(bounds, "d_max", "n_max", "s_max")
        out = []
        for d in range(1, d_max + 1):
            for n in range(1, n_max + 1):
                s = d * (n - 1) + 1 - n
                if 0 <= s <= s_max and 2 * s + n <= d * n:
                    out.append((d, n, s))
        return out
    if mode == "platonic_eq":
        s_max, m_max, n_max = _need(bounds, "s_max", "m_max", "N_max")
        out = []
        for s in range(1, s_max + 1):
            for ms in combinations_with_replacement(range(2, m_max + 1), s):
                rest = sum(Fraction(1, m) for m in ms) - (s - 1)
                if rest > 0 and rest.numerator == 1 and 2 <= rest.denominator <= n_max:
                    out.append((s, ms, rest.denominator))
        return out
    if mode == "platonic_ineq":
        s, m_max, n_max = _need(bounds, "s", "m_max", "N_max")
        out = []
        for ms in combinations_with_replacement(range(2, m_max + 1), s):
            # 2N - 2 = sum N(1 - 1/m)  <=>  2/N = sum 1/m - (s - 2)
            rest = sum(Fraction(1, m) for m in ms) - (s - 2)
            if rest > 0 and (2 / rest).denominator == 1:
                N = int(2 / rest)
                if 2 <= N <= n_max:
                    out.append((ms, N))
        return out
    if mode == "thm256_box":
        h_max, n_max = _need(bounds, "h_max", "n_max")
        return [tuple(p) for p in kernels.box_search(4, 6, 10, h_max, n_max)]
    raise ValueError(f"unknown enumeration mode {mode!r}")


# --- fiber coefficient solve ---

@dataclass(frozen=True)
class FiberSpec:
    """Components of a degenerate fiber and the section that meets it.

    ``components`` holds ``(self_intersection, multiplicity)``; ``edges``
    are index pairs; ``section`` lists the components the section meets
    once each; ``excluded`` components carry no unknown and no relation;
    ``ell`` is the index of the component whose coefficient is reported as
    ``alpha``.
    """

    components: tuple
    edges: tuple
    section: tuple
    excluded: tuple = ()
    ell: int = 0

    def __post_init__(self):
        comps = tuple((int(a), int(b)) for a, b in self.components)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "edges", tuple(tuple(sorted(map(int, e))) for e in self.edges))
        object.__setattr__(self, "section", tuple(int(i) for i in self.section))
        object.__setattr__(self, "excluded", tuple(int(i) for i in self.excluded))
        n = len(comps)
        for a, b in self.edges:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise ValueError("bad edge")
        for i in self.section + self.excluded + (self.ell,):
            if not 0 <= i < n:
                raise ValueError("component index out of range")
        if any(m < 1 for _, m in comps):
            raise ValueError("multiplicities must be positive")
        if self.ell in self.excluded:
            raise ValueError("the reported component cannot be excluded")

    def intersection(self, i: int, j: int) -> int:
        if i == j:
            return self.components[i][0]
        return 1 if tuple(sorted((i, j))) in self.edges else 0

    def to_json(self) -> dict:
        return {
            "components": [{"self": a, "mult": b} for a, b in self.components],
            "edges": [list(e) for e in self.edges],
            "section": list(self.section),
            "excluded": list(self.excluded),
            "ell": self.ell,
        }

    @classmethod
    def from_json(cls, data: dict) -> FiberSpec:
        comps = [(c["self"], c["mult"]) if isinstance(c, dict) else tuple(c) for c in data["components"]]
        return cls(comps, [tuple(e) for e in data.get("edges", [])], data.get("section", []),
                   data.get("excluded", []), data.get("ell", 0))


@dataclass(frozen=True)
class SectionCoefficients:
    alpha: Fraction
    betas: tuple
    unknowns: tuple


def _solve(a, b):
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularSystemError("the relation system is singular")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n] for row in m]


def section_coefficient(fiber: FiberSpec) -> SectionCoefficients:
    """Coefficients of ``A = M + alpha*l + sum beta_i E_i`` with ``(A.C) = 0`` for each kept component ``C``."""
    unknowns = [i for i in range(len(fiber.components)) if i not in fiber.excluded]
    a = [[Fraction(fiber.intersection(d, c)) for d in unknowns] for c in unknowns]
    b = [Fraction(-1 if c in fiber.section else 0) for c in unknowns]
    x = _solve(a, b)
    # re-substitute
    for c, row, rhs in zip(unknowns, a, b):
        if sum(p * q for p, q in zip(row, x)) != rhs:
            raise ArithmeticError(f"solution fails the relation at component {c}")
    sol = dict(zip(unknowns, x))
    betas = tuple(sol[i] for i in unknowns if i != fiber.ell)
    return SectionCoefficients(sol[fiber.ell], betas, tuple(unknowns))


def canonical_index(kind: str, params: dict) -> Fraction:
    """``(2a - n - 2) + sum k_i/m_i`` for ``thm256``; ``r - 2`` for ``pseudo_plane``."""
    if kind == "thm256":
        a, n = int(params["a"]), int(params["n"])
        total = Fraction(2 * a - n - 2)
        for k, m in params.get("fibers", []):
            if int(m) < 1:
                raise ValueError("multiplicities must be positive")
            total += Fraction(int(k), int(m))
        return total
    if kind == "pseudo_plane":
        return Fraction(int(params["r"]) - 2)
    raise ValueError(f"unknown index kind {kind!r}")


def boundary_lines_count(n: int, d, dprime) -> int:
    """``sum (n*d_i - d'_i)``; each summand must be non-negative."""
    d, dprime = list(d), list(dprime)
    if len(d) != len(dprime):
        raise ValueError("d and dprime must have equal length")
    total = 0
    for a, b in zip(d, dprime):
        if a < 0 or b < 0 or n < 0:
            raise ValueError("values must be non-negative")
        term = n * a - b
        if term < 0:
            raise ValueError("negative summand: inconsistent input")
        total += term
    return total
