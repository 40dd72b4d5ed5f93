# cython: boundscheck=False, wraparound=False
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""


cdef tuple _add_exp(tuple a, tuple b, Py_ssize_t n):
    cdef Py_ssize_t i
    cdef list r = [None] * n
    for i in range(n):
        r[i] = <long>a[i] + <long>b[i]
    return tuple(r)


def mul_terms(dict a, dict b):
    cdef dict out = {}
    cdef tuple ea, eb, e
    cdef Py_ssize_t n
    cdef object ca, cb, v
    if len(a) > len(b):
        a, b = b, a
    if not a:
        return out
    n = len(next(iter(a)))
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = _add_exp(ea, eb, n)
            v = out.get(e)
            if v is None:
                out[e] = ca * cb
            else:
                out[e] = v + ca * cb
    return {e: v for e, v in out.items() if v}


def mul_terms_trunc(dict a, dict b, long maxdeg):
    cdef dict out = {}
    cdef list bd = []
    cdef tuple ea, eb, e
    cdef long da, db, d
    cdef Py_ssize_t n, i, nb
    cdef object ca, cb, v
    if not a or not b:
        return out
    n = len(next(iter(a)))
    for eb, cb in b.items():
        d = 0
        for i in range(n):
            d += <long>eb[i]
        bd.append((eb, cb, d))
    nb = len(bd)
    for ea, ca in a.items():
        da = 0
        for i in range(n):
            da += <long>ea[i]
        if da > maxdeg:
            continue
        for i in range(nb):
            eb, cb, db = bd[i]
            if da + db > maxdeg:
                continue
            e = _add_exp(ea, eb, n)
            v = out.get(e)
            if v is None:
                out[e] = ca * cb
            else:
                out[e] = v + ca * cb
    return {e: v for e, v in out.items() if v}


def sub_mul_term(dict target, dict src, object coeff, tuple shift):
    cdef tuple e, k
    cdef object c, v
    cdef Py_ssize_t n = len(shift)
    for e, c in src.items():
        k = _add_exp(e, shift, n)
        v = target.get(k)
        if v is None:
            v = -coeff * c
        else:
            v = v - coeff * c
        if v:
            target[k] = v
        else:
            target.pop(k, None)


def box_search(long lo1, long lo2, long lo3, long hmax, long nmax):
    cdef long h1, h2, h3, num, n
    cdef list out = []
    for h1 in range(lo1, hmax + 1):
        for h2 in range(lo2, hmax + 1):
            for h3 in range(lo3, hmax + 1):
                num = 15 * h1 + 10 * h2 + 6 * h3
                if num % 30 != 0:
                    continue
                n = num // 30 - 2
                if n < 0 or n > nmax:
                    continue
                if 225 * h1 + 100 * h2 + 36 * h3 > 900 * n:
                    out.append((h1, h2, h3, n))
    return out
