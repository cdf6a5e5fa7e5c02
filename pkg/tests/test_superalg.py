from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supertrace.superalg import (
    BOSONIC,
    FERMIONIC,
    Registry,
    RegistryFrozen,
    RegistryMismatch,
    NonHomogeneous,
    UnknownGenerator,
    supercommutator,
)

NB, NF = 3, 32


def make_registry(nb: int = NB, nf: int = NF) -> Registry:
    reg = Registry()
    for i in range(nb):
        reg.allocate(BOSONIC, f"e{i}")
    for j in range(nf):
        reg.allocate(FERMIONIC, f"o{j}")
    return reg


# naive oracle: a term is (bosonic exponent tuple, fermionic id list in product order)

def naive_normal(bos, ferm, c):
    ferm = list(ferm)
    if len(set(ferm)) != len(ferm):
        return None
    sign = 1
    for i in range(len(ferm)):
        for j in range(len(ferm) - 1 - i):
            if ferm[j] > ferm[j + 1]:
                ferm[j], ferm[j + 1] = ferm[j + 1], ferm[j]
                sign = -sign
    return (tuple(bos), tuple(ferm)), sign * c


def naive_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (ba, fa), ca in a.items():
        for (bb, fb), cb in b.items():
            r = naive_normal([x + y for x, y in zip(ba, bb)], list(fa) + list(fb), ca * cb)
            if r is None:
                continue
            k, v = r
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def to_poly(reg: Registry, d: dict):
    p = reg.zero()
    for (bos, ferm), c in d.items():
        p = p + reg.monomial(dict(enumerate(bos)), list(ferm), c)
    return p


def from_poly(p) -> dict:
    out = {}
    for mono, c in p.monomials():
        bos = [0] * NB
        for i, e in mono.bosonic:
            bos[i] = e
        out[(tuple(bos), mono.fermionic)] = c
    return out


coeffs = st.one_of(st.integers(-5, 5), st.fractions(min_value=-5, max_value=5, max_denominator=4))
terms = st.tuples(
    st.lists(st.integers(0, 2), min_size=NB, max_size=NB).map(tuple),
    st.lists(st.integers(0, NF - 1), max_size=4, unique=True).map(lambda l: tuple(sorted(l))),
)
raw_polys = st.dictionaries(terms, coeffs, max_size=4).map(lambda d: {k: v for k, v in d.items() if v})


def homogeneous(parity):
    t = st.tuples(
        st.lists(st.integers(0, 2), min_size=NB, max_size=NB).map(tuple),
        st.lists(st.integers(0, NF - 1), max_size=5, unique=True)
        .filter(lambda l: len(l) % 2 == parity)
        .map(lambda l: tuple(sorted(l))),
    )
    return st.dictionaries(t, st.integers(-4, 4).filter(bool), min_size=1, max_size=3)


@given(raw_polys, raw_polys)
def test_mul_matches_naive_oracle(a, b):
    reg = make_registry()
    assert from_poly(to_poly(reg, a) * to_poly(reg, b)) == naive_mul(a, b)


@given(raw_polys, raw_polys, raw_polys)
def test_associative_and_distributive(a, b, c):
    reg = make_registry()
    pa, pb, pc = (to_poly(reg, x) for x in (a, b, c))
    assert (pa * pb) * pc == pa * (pb * pc)
    assert pa * (pb + pc) == pa * pb + pa * pc


@given(st.integers(0, 1), st.integers(0, 1), st.data())
def test_supercommutative(p, q, data):
    reg = make_registry()
    a = to_poly(reg, data.draw(homogeneous(p)))
    b = to_poly(reg, data.draw(homogeneous(q)))
    sign = -1 if p and q else 1
    assert a * b == (b * a).scale(sign)
    assert supercommutator(a, b).is_zero()
    prod = a * b
    assert prod.is_zero() or prod.parity == (p + q) % 2


def test_fermionic_square_and_merge_sign():
    reg = make_registry(0, 3)
    a, b = reg.var(reg.lookup(FERMIONIC, "o0")), reg.var(reg.lookup(FERMIONIC, "o1"))
    assert (a * a).is_zero()
    assert a * b == -(b * a)
    # b * a with a < b is the sorted monomial {a, b} with coefficient -1
    assert (b * a).terms == {(0, 0b11): -1}
    assert reg.monomial({}, [1, 0, 1]).is_zero()


def test_add_scale_exact():
    reg = make_registry(2, 2)
    m = reg.monomial({0: 1}, [1])
    assert m + reg.zero() == m
    assert (m + m.scale(-1)).is_zero()
    assert m.scale(3).scale(Fraction(2, 3)) == m.scale(2)
    assert m.scale(2).terms[next(iter(m.terms))] == 2 and isinstance(m.scale(Fraction(4, 2)).constant(), int)
    with pytest.raises(TypeError):
        m.scale(0.5)


def test_supercommutator_needs_homogeneous():
    reg = make_registry(1, 1)
    mixed = reg.var(reg.lookup(BOSONIC, "e0")) + reg.var(reg.lookup(FERMIONIC, "o0"))
    assert mixed.parity is None
    assert reg.zero().parity == 0
    with pytest.raises(NonHomogeneous):
        supercommutator(mixed, mixed)


def test_registry_rules():
    reg = Registry()
    g = reg.allocate(BOSONIC, "a")
    assert reg.lookup(BOSONIC, "a") is g and g.index == 0
    assert reg.allocate(FERMIONIC, "a").index == 0
    assert reg.allocate(FERMIONIC, "b").index == 1
    with pytest.raises(ValueError):
        reg.allocate(BOSONIC, "a")
    with pytest.raises(ValueError):
        reg.allocate(BOSONIC, "bad label")
    with pytest.raises(UnknownGenerator):
        reg.lookup(BOSONIC, "zzz")
    reg.freeze()
    with pytest.raises(RegistryFrozen):
        reg.allocate(BOSONIC, "c")
    other = Registry()
    x = other.bosonic("a")
    with pytest.raises(RegistryMismatch):
        reg.var(g) + x
    with pytest.raises(RegistryMismatch):
        reg.var(other.lookup(BOSONIC, "a"))


def test_bosonic_overflow_detected():
    reg = make_registry(2, 0)
    y = reg.var(reg.lookup(BOSONIC, "e0"))
    big = y ** (2 ** 14)
    with pytest.raises(OverflowError):
        big * big


@given(raw_polys)
def test_text_round_trip(d):
    reg = make_registry()
    p = to_poly(reg, d)
    assert reg.parse(str(p)) == p


def test_parser_normalizes_fermion_order():
    reg = make_registry(1, 3)
    p = reg.parse("2 * f[o2] * f[o0] - 1/2 * b[e0]^2")
    q = reg.monomial({}, [0, 2], -2) + reg.monomial({0: 2}, [], Fraction(-1, 2))
    assert p == q
    assert str(reg.parse("0")) == "0"
    with pytest.raises(ValueError):
        reg.parse("2 * ")
