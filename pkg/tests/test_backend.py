from __future__ import annotations

import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supertrace import _backend, _kernels

try:
    from supertrace import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")

coeffs = st.one_of(st.integers(-9, 9), st.fractions(min_value=-3, max_value=3, max_denominator=5))
polys = st.dictionaries(
    st.tuples(st.integers(0, 3).map(lambda a: a << _kernels.BOS_BITS | 1), st.integers(0, (1 << 10) - 1)),
    coeffs,
    max_size=6,
).map(lambda d: {k: v for k, v in d.items() if v})


def naive_mul(a, b):
    out = {}
    for (ba, fa), ca in a.items():
        for (bb, fb), cb in b.items():
            if fa & fb:
                continue
            sign = _kernels.merge_parity(fa, fb)
            k = (ba + bb, fa | fb)
            out[k] = out.get(k, 0) + (-1 if sign else 1) * ca * cb
    return {k: v for k, v in out.items() if v}


def brute_parity(a, b):
    # inversions: bits of a above bits of b
    return sum(1 for i in range(32) if a >> i & 1 for j in range(32) if b >> j & 1 and j < i) & 1


@given(st.integers(0, (1 << 12) - 1), st.integers(0, (1 << 12) - 1))
def test_merge_parity_oracle(a, b):
    assert _kernels.merge_parity(a, b) == brute_parity(a, b)


@given(polys, polys)
def test_pure_mul_matches_naive(a, b):
    assert _kernels.poly_mul(a, b, 0) == naive_mul(a, b)


def brute_rank(rows):
    cols = sorted({k for r in rows for k in r}, key=repr)
    mat = [[Fraction(r.get(c, 0)) for c in cols] for r in rows]
    rank = 0
    for c in range(len(cols)):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c] / mat[rank][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


rows_st = st.lists(st.dictionaries(st.integers(0, 5), coeffs, max_size=4), max_size=6)


@given(rows_st)
def test_pure_rank_matches_gauss(rows):
    assert _kernels.rank_exact(rows) == brute_rank(rows)


@needs_ext
@given(polys, polys)
def test_backends_agree_mul(a, b):
    assert _ckernels.poly_mul(a, b, 0) == _kernels.poly_mul(a, b, 0)


@needs_ext
@given(rows_st)
def test_backends_agree_rank(rows):
    assert _ckernels.rank_exact(rows) == _kernels.rank_exact(rows)


@needs_ext
@given(st.integers(0, (1 << 31) - 1), st.integers(0, (1 << 31) - 1))
def test_backends_agree_parity(a, b):
    assert _ckernels.merge_parity(a, b) == _kernels.merge_parity(a, b)


def test_default_backend_reported():
    assert _backend.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert _backend.BACKEND == "cython"


def test_pure_backend_selectable():
    env = dict(os.environ, SUPERTRACE_PURE="1")
    res = subprocess.run(
        [sys.executable, "-c", "import supertrace; print(supertrace.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert res.stdout.strip() == "python"
