"""Pure-Python hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, or when
``SUPERTRACE_PURE=1`` is set. The compiled module mirrors this API exactly.

Polynomial terms are dicts ``{(bosonic_key, fermionic_mask): coeff}`` where
``bosonic_key`` packs an exponent vector into an int (``BOS_BITS`` bits per
generator) and ``fermionic_mask`` is the bitset of odd generators, which
stays in ascending order by construction.
"""

from __future__ import annotations

from math import gcd

BOS_BITS = 16


def merge_parity(fa: int, fb: int) -> int:
    """Parity of #{(i, j) : i in fa, j in fb, i > j}."""
    p = 0
    while fb:
        low = fb & -fb
        p += (fa & ~((low << 1) - 1)).bit_count()
        fb ^= low
    return p & 1


def poly_mul(a: dict, b: dict, guard: int = 0) -> dict:
    """Product of two sparse super-polynomials.

    ``guard`` is a mask of the top bit of every packed bosonic exponent; a
    product touching it would overflow into the neighbouring generator.
    """
    if not a or not b:
        return {}
    if len(a) > len(b):
        # sign of the merge depends on operand order, so only loop order swaps
        items_outer, items_inner, swapped = list(b.items()), list(a.items()), True
    else:
        items_outer, items_inner, swapped = list(a.items()), list(b.items()), False
    out: dict = {}
    get = out.get
    for (bo, fo), co in items_outer:
        for (bi, fi), ci in items_inner:
            if fo & fi:
                continue
            if swapped:
                odd = merge_parity(fi, fo)
            else:
                odd = merge_parity(fo, fi)
            key = (bo + bi, fo | fi)
            c = co * ci
            prev = get(key)
            if odd:
                out[key] = -c if prev is None else prev - c
            else:
                out[key] = c if prev is None else prev + c
    if guard:
        for bk, _ in out:
            if bk & guard:
                raise OverflowError("bosonic exponent exceeds packed width")
    return {k: v for k, v in out.items() if v}


def _integral(row: dict, colindex: dict) -> dict:
    den = 1
    for v in row.values():
        d = getattr(v, "denominator", 1)
        if d != 1:
            den = den * d // gcd(den, d)
    r = {}
    for k, v in row.items():
        if not v:
            continue
        j = colindex.get(k)
        if j is None:
            j = colindex[k] = len(colindex)
        r[j] = int(v * den)
    return r


def _primitive(r: dict) -> dict:
    g = 0
    for v in r.values():
        g = gcd(g, v)
        if g == 1:
            return r
    if g > 1:
        return {k: v // g for k, v in r.items()}
    return r


def rank_exact(rows) -> int:
    """Exact rank over Q of sparse rows given as ``{column: coeff}`` dicts.

    Fraction-free elimination: rows are scaled to primitive integer vectors
    and reduced against pivots keyed by their leading column index, where
    columns are numbered in order of first appearance.
    """
    colindex: dict = {}
    pivots: dict = {}
    for row in rows:
        r = _integral(row, colindex)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = _primitive(r)
                break
            a, b = r[c], p[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {k: b * v for k, v in r.items()}
            for k, v in p.items():
                w = new.get(k, 0) - a * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            r = _primitive(new)
    return len(pivots)
