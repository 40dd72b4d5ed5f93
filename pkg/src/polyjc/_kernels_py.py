"""Pure-Python implementations of the hot kernels.

These mirror ``_kernels.pyx`` function for function and are used whenever the
compiled extension is unavailable (or ``POLYJC_PURE=1`` is set).  Term maps are
plain dicts ``{exponent tuple: coefficient}`` with no zero coefficients.
"""
from operator import add

import numpy as np


def mul_terms(a, b):
    """Product of two term maps."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(map(add, ea, eb))
            v = get(e)
            out[e] = ca * cb if v is None else v + ca * cb
    return {e: c for e, c in out.items() if c}


def mul_terms_trunc(a, b, maxdeg):
    """Product of two term maps, dropping monomials of total degree > maxdeg."""
    out = {}
    get = out.get
    bd = [(eb, cb, sum(eb)) for eb, cb in b.items()]
    for ea, ca in a.items():
        da = sum(ea)
        if da > maxdeg:
            continue
        for eb, cb, db in bd:
            if da + db > maxdeg:
                continue
            e = tuple(map(add, ea, eb))
            v = get(e)
            out[e] = ca * cb if v is None else v + ca * cb
    return {e: c for e, c in out.items() if c}


def sub_mul_term(target, src, coeff, shift):
    """In place: ``target -= coeff * x**shift * src``."""
    get = target.get
    for e, c in src.items():
        k = tuple(map(add, e, shift))
        v = get(k)
        v = -coeff * c if v is None else v - coeff * c
        if v:
            target[k] = v
        else:
            target.pop(k, None)


def box_search(lo1, lo2, lo3, hmax, nmax):
    """Integer points of the canonical-class box problem.

    Returns every ``(h1, h2, h3, n)`` with ``lo_i <= h_i <= hmax``,
    ``0 <= n <= nmax``, ``15 h1 + 10 h2 + 6 h3 == 30 (n + 2)`` and
    ``225 h1 + 100 h2 + 36 h3 > 900 n`` (the two rational conditions scaled by
    30 and 900).
    """
    out = []
    if hmax < max(lo1, lo2, lo3):
        return out
    h2 = np.arange(lo2, hmax + 1, dtype=np.int64)[:, None]
    h3 = np.arange(lo3, hmax + 1, dtype=np.int64)[None, :]
    base = 10 * h2 + 6 * h3
    weak = 100 * h2 + 36 * h3
    for h1 in range(lo1, hmax + 1):
        num = 15 * h1 + base
        n = num // 30 - 2
        ok = (num % 30 == 0) & (n >= 0) & (n <= nmax) & (225 * h1 + weak > 900 * n)
        for i, j in zip(*np.nonzero(ok)):
            out.append((h1, int(lo2 + i), int(lo3 + j), int(n[i, j])))
    return out
