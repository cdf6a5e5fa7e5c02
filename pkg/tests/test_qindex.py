from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supertrace.identities import charge_table
from supertrace.qindex import (
    QMonomial,
    QSeries,
    TorusQSeries,
    andrews_ct_check,
    compare_equivariant_readings,
    constant_term,
    dynkin_series,
    equivariant_readings,
    euler_function,
    first_deficit,
    format_series,
    free_index,
    free_index_identity_check,
    hilbert_series_by_rank,
    matrix_shape,
    molien_weyl_index,
    pochhammer,
    traceless_rank_profile,
)

ORDER = 6
series = st.lists(st.integers(-4, 4), min_size=ORDER + 1, max_size=ORDER + 1).map(lambda c: QSeries(c, ORDER))


@given(series, series, series)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + QSeries(order=ORDER) == a
    assert a - a == QSeries(order=ORDER)


@given(series)
def test_inverse(a):
    a = a + (1 - a[0])  # unit constant term
    assert a * a.inverse() == QSeries.one(ORDER)
    assert a ** -2 * a ** 2 == QSeries.one(ORDER)


def brute_euler(order):
    c = [1] + [0] * order
    for k in range(1, order + 1):
        c = [c[i] - (c[i - k] if i >= k else 0) for i in range(order + 1)]
    return c


def test_euler_and_pochhammer():
    assert str(euler_function(7)) == "1 - q - q^2 + q^5 + q^7"
    assert euler_function(12).coeffs == brute_euler(12)
    assert pochhammer(QMonomial(0), 5) == QSeries.one(5)
    # (q; q)_2 = (1 - q)(1 - q^2)
    assert pochhammer(QMonomial(1, None, 1), 5, length=2).coeffs == [1, -1, -1, 1, 0, 0]
    torus = pochhammer(QMonomial(1, (-1, 1), 1), 4)
    assert isinstance(torus, TorusQSeries)
    assert constant_term(torus) == QSeries.one(4)


def test_constant_term_basics():
    assert constant_term(TorusQSeries.one(2, 3)) == QSeries.one(3)
    assert constant_term(TorusQSeries.monomial(2, 3, (-1, 1))) == QSeries(order=3)
    s = TorusQSeries.monomial(2, 3, (-1, 1)) * TorusQSeries.monomial(2, 3, (1, -1), 2, 5)
    assert constant_term(s) == QSeries.monomial(2, 3, 5)


@given(st.lists(st.tuples(st.integers(-1, 1), st.integers(-1, 1), st.integers(0, 3), st.integers(-2, 2)),
                max_size=5), series)
def test_constant_term_commutes_with_z_free(terms, a):
    s = TorusQSeries(2, ORDER)
    for z1, z2, k, c in terms:
        s = s + TorusQSeries.monomial(2, ORDER, (z1, z2), k, c)
    assert constant_term(s * a) == constant_term(s) * a


def test_molien_weyl_small():
    assert molien_weyl_index(1, 10) == euler_function(10)
    assert molien_weyl_index(2, 6) == euler_function(6)


def test_andrews():
    assert andrews_ct_check(1, 6).ok
    v = andrews_ct_check(2, 6)
    assert v.ok
    assert v.series["target"] == euler_function(6).inverse()


def test_free_index():
    assert free_index([], 6) == QSeries.one(6)
    for shape in ([(1, 1)], [(2, 3)], matrix_shape(2, [1, 3]), [(1, 2), (4, 1)]):
        assert free_index_identity_check(shape, 6).ok
    # the other sign convention does not telescope
    assert free_index([(2, 1)], 6, literal=True) != QSeries.one(6)


def test_dynkin_series():
    assert str(dynkin_series(2, 8)) == "1 + q + q^3 + q^4"
    assert hilbert_series_by_rank(1, "invariants", 4) == dynkin_series(1, 4)
    assert hilbert_series_by_rank(2, "invariants", 6) == dynkin_series(2, 6)


def test_equivariant_readings():
    r = equivariant_readings(1)
    assert r["free_module"] == {0: 1, 1: 1}
    assert -1 in equivariant_readings(2)["literal"]
    for n in (1, 2):
        cmp = compare_equivariant_readings(n)
        assert cmp["matches"]["free_module"]


def test_free_series_matches_charge_table():
    s = hilbert_series_by_rank(0, "free", 7)
    assert str(s) == "1 + q^3 + q^4 + 3*q^5 + 6*q^6 + 11*q^7"
    rows = charge_table(7)
    assert s.coeffs[1:] == [r.free_dim[0] for r in rows]


def test_traceless_profile_n2():
    profile = traceless_rank_profile(2, 6)
    assert first_deficit(profile) == 5
    assert all(not any(r["deficit"]) for r in profile[:4])


def test_format_and_json():
    assert format_series([0, Fraction(1, 2), -3]) == "1/2*q - 3*q^2"
    assert format_series([]) == "0"
    assert QSeries([1, -1, 0, 2], 3).to_json() == ["1", "-1", "0", "2"]
    with pytest.raises(ValueError):
        QSeries.one(3) + QSeries.one(4)
