# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; same API and results as ``_kernels``."""

from math import gcd

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

from supertrace import _kernels as _py

BOS_BITS = _py.BOS_BITS

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

cdef object _LIMIT = 1 << 64


cdef inline int _parity64(uint64_t fa, uint64_t fb) noexcept nogil:
    cdef int p = 0
    cdef uint64_t low
    while fb:
        low = fb & (~fb + 1)
        p += __builtin_popcountll(fa & ~((low << 1) - 1))
        fb ^= low
    return p & 1


def merge_parity(fa, fb):
    if fa < _LIMIT and fb < _LIMIT:
        return _parity64(<uint64_t>fa, <uint64_t>fb)
    return _py.merge_parity(fa, fb)


cdef void* _alloc(Py_ssize_t n) except NULL:
    cdef void* p = malloc(max(n, 1) * sizeof(uint64_t))
    if p == NULL:
        raise MemoryError()
    return p


cdef void _free(void* p) noexcept:
    free(p)


def poly_mul(dict a, dict b, guard=0):
    if not a or not b:
        return {}
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    cdef list ka = list(a.keys()), kb = list(b.keys())
    cdef list ca = list(a.values()), cb = list(b.values())
    cdef object top = 0
    for key in ka:
        if key[1] > top:
            top = key[1]
    for key in kb:
        if key[1] > top:
            top = key[1]
    if top >= _LIMIT:
        return _py.poly_mul(a, b, guard)

    cdef uint64_t* fa = <uint64_t*>_alloc(na)
    cdef uint64_t* fb = <uint64_t*>_alloc(nb)
    cdef list ba = [k[0] for k in ka]
    cdef list bb = [k[0] for k in kb]
    for i in range(na):
        fa[i] = <uint64_t>ka[i][1]
    for j in range(nb):
        fb[j] = <uint64_t>kb[j][1]

    cdef dict out = {}
    cdef object c, prev, key2, boson, coeff_a
    cdef uint64_t x, y
    try:
        for i in range(na):
            x = fa[i]
            boson = ba[i]
            coeff_a = ca[i]
            for j in range(nb):
                y = fb[j]
                if x & y:
                    continue
                key2 = (boson + bb[j], x | y)
                c = coeff_a * cb[j]
                prev = out.get(key2)
                if _parity64(x, y):
                    out[key2] = -c if prev is None else prev - c
                else:
                    out[key2] = c if prev is None else prev + c
    finally:
        _free(fa)
        _free(fb)
    if guard:
        for key2 in out:
            if key2[0] & guard:
                raise OverflowError("bosonic exponent exceeds packed width")
    return {k: v for k, v in out.items() if v}


cdef dict _primitive(dict r):
    cdef object g = 0
    for v in r.values():
        g = gcd(g, v)
        if g == 1:
            return r
    if g > 1:
        return {k: v // g for k, v in r.items()}
    return r


def rank_exact(rows):
    cdef dict colindex = {}
    cdef dict pivots = {}
    cdef dict r, p, new
    cdef Py_ssize_t c
    cdef object a, b, g, w
    for row in rows:
        r = _py._integral(row, colindex)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = _primitive(r)
                break
            a = r[c]
            b = p[c]
            g = gcd(a, b)
            a = a // g
            b = b // g
            new = {k: b * v for k, v in r.items()}
            for k, v in p.items():
                w = new.get(k, 0) - a * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            r = _primitive(new)
    return len(pivots)
