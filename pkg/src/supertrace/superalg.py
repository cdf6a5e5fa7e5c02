"""Exact arithmetic in the free supercommutative algebra S(V0) (x) Lambda(V1).

Generators live in an explicit :class:`Registry`; polynomials remember their
registry and refuse to mix with polynomials from another one. Coefficients
are Python ints or :class:`fractions.Fraction` (integral fractions are
stored as ints), never floats.

Internally a monomial is the pair ``(bosonic_key, fermionic_mask)``: the
bosonic exponent vector packed ``BOS_BITS`` bits per generator, and the set
of odd generators as a bitmask read in ascending order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from ._backend import BOS_BITS, merge_parity, poly_mul

BOSONIC = "bosonic"
FERMIONIC = "fermionic"
KINDS = (BOSONIC, FERMIONIC)

_EXP_MASK = (1 << BOS_BITS) - 1


class SuperAlgebraError(Exception):
    """Base class for errors raised by this package's algebra layer."""


class RegistryMismatch(SuperAlgebraError):
    pass


class NonHomogeneous(SuperAlgebraError):
    pass


class RegistryFrozen(SuperAlgebraError):
    pass


class UnknownGenerator(SuperAlgebraError, KeyError):
    pass


def normalize_coeff(c):
    """Return ``c`` as an int when integral, else as a Fraction."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not allowed")
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


@dataclass(frozen=True)
class GeneratorId:
    kind: str
    label: str
    index: int

    @property
    def parity(self) -> int:
        return 1 if self.kind == FERMIONIC else 0


@dataclass(frozen=True)
class SuperMonomial:
    """Readable view of a monomial: sorted ``(id, exponent)`` pairs and
    strictly increasing fermionic ids."""

    bosonic: tuple[tuple[int, int], ...]
    fermionic: tuple[int, ...]

    @property
    def parity(self) -> int:
        return len(self.fermionic) % 2

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.bosonic) + len(self.fermionic)


def _unpack_bosonic(key: int) -> tuple[tuple[int, int], ...]:
    out = []
    i = 0
    while key:
        e = key & _EXP_MASK
        if e:
            out.append((i, e))
        key >>= BOS_BITS
        i += 1
    return tuple(out)


def _mask_ids(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


class Registry:
    """Allocator of bosonic and fermionic generators with dense ids per kind."""

    def __init__(self) -> None:
        self._gens: dict[str, list[GeneratorId]] = {BOSONIC: [], FERMIONIC: []}
        self._by_label: dict[tuple[str, str], GeneratorId] = {}
        self.frozen = False
        self.groups: set[str] = set()

    def __repr__(self) -> str:
        nb, nf = len(self._gens[BOSONIC]), len(self._gens[FERMIONIC])
        return f"Registry(bosonic={nb}, fermionic={nf}, frozen={self.frozen})"

    def allocate(self, kind: str, label: str) -> GeneratorId:
        if kind not in KINDS:
            raise ValueError(f"unknown generator kind {kind!r}")
        if self.frozen:
            raise RegistryFrozen("registry is frozen")
        label = str(label)
        if any(ch in label for ch in " []*^+"):
            raise ValueError(f"label {label!r} contains a reserved character")
        if (kind, label) in self._by_label:
            raise ValueError(f"{kind} generator {label!r} already exists")
        gen = GeneratorId(kind, label, len(self._gens[kind]))
        self._gens[kind].append(gen)
        self._by_label[(kind, label)] = gen
        return gen

    def freeze(self) -> None:
        self.frozen = True

    def lookup(self, kind: str, label: str) -> GeneratorId:
        try:
            return self._by_label[(kind, label)]
        except KeyError:
            raise UnknownGenerator(f"no {kind} generator {label!r}") from None

    def generators(self, kind: str) -> list[GeneratorId]:
        return list(self._gens[kind])

    def count(self, kind: str) -> int:
        return len(self._gens[kind])

    @property
    def guard(self) -> int:
        top = 1 << (BOS_BITS - 1)
        return sum(top << (BOS_BITS * i) for i in range(len(self._gens[BOSONIC])))

    # constructors

    def var(self, gen: GeneratorId) -> "SuperPolynomial":
        if self._by_label.get((gen.kind, gen.label)) is not gen:
            raise RegistryMismatch("generator belongs to another registry")
        if gen.kind == BOSONIC:
            key = (1 << (BOS_BITS * gen.index), 0)
        else:
            key = (0, 1 << gen.index)
        return SuperPolynomial(self, {key: 1})

    def bosonic(self, label: str) -> "SuperPolynomial":
        return self.var(self.allocate(BOSONIC, label))

    def fermionic(self, label: str) -> "SuperPolynomial":
        return self.var(self.allocate(FERMIONIC, label))

    def const(self, c) -> "SuperPolynomial":
        c = normalize_coeff(c)
        return SuperPolynomial(self, {(0, 0): c} if c else {})

    def zero(self) -> "SuperPolynomial":
        return SuperPolynomial(self, {})

    def one(self) -> "SuperPolynomial":
        return self.const(1)

    def monomial(
        self,
        bosonic: Mapping[int, int] | None = None,
        fermionic: Sequence[int] = (),
        coeff=1,
    ) -> "SuperPolynomial":
        """Monomial from an exponent map and a fermionic id sequence in any
        order; the sequence is sorted with the matching sign."""
        bkey = 0
        for i, e in (bosonic or {}).items():
            if e < 0 or e >= (1 << (BOS_BITS - 1)):
                raise ValueError(f"exponent {e} out of range")
            if not 0 <= i < self.count(BOSONIC):
                raise UnknownGenerator(f"bosonic id {i}")
            bkey += e << (BOS_BITS * i)
        mask = 0
        sign = 1
        for j in fermionic:
            if not 0 <= j < self.count(FERMIONIC):
                raise UnknownGenerator(f"fermionic id {j}")
            bit = 1 << j
            if mask & bit:
                return self.zero()
            if merge_parity(mask, bit):
                sign = -sign
            mask |= bit
        c = normalize_coeff(coeff) * sign
        return SuperPolynomial(self, {(bkey, mask): c} if c else {})

    def parse(self, text: str) -> "SuperPolynomial":
        return parse_polynomial(self, text)


class SuperPolynomial:
    """Immutable element of the free supercommutative algebra."""

    __slots__ = ("registry", "terms")

    def __init__(self, registry: Registry, terms: dict | None = None) -> None:
        self.registry = registry
        self.terms = terms if terms is not None else {}

    # helpers

    def _check(self, other: "SuperPolynomial") -> None:
        if other.registry is not self.registry:
            raise RegistryMismatch("polynomials come from different registries")

    def _coerce(self, other) -> "SuperPolynomial":
        if isinstance(other, SuperPolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.registry.const(other)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return SuperPolynomial(self.registry, add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self) -> "SuperPolynomial":
        return SuperPolynomial(self.registry, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return SuperPolynomial(self.registry, add_terms(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return SuperPolynomial(
            self.registry, poly_mul(self.terms, other.terms, self.registry.guard)
        )

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, r) -> "SuperPolynomial":
        r = normalize_coeff(r)
        if not r:
            return self.registry.zero()
        return SuperPolynomial(
            self.registry, {k: normalize_coeff(v * r) for k, v in self.terms.items()}
        )

    def __pow__(self, k: int) -> "SuperPolynomial":
        if k < 0:
            raise ValueError("negative power")
        result = self.registry.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # queries

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.registry.const(other)
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return self.registry is other.registry and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def parity(self) -> int | None:
        """0 or 1 when homogeneous (zero counts as even), ``None`` if mixed."""
        ps = {mask.bit_count() & 1 for _, mask in self.terms}
        if not ps:
            return 0
        if len(ps) == 1:
            return ps.pop()
        return None

    def is_homogeneous(self) -> bool:
        return self.parity is not None

    def monomials(self) -> Iterator[tuple[SuperMonomial, object]]:
        for (bkey, mask), c in self.terms.items():
            yield SuperMonomial(_unpack_bosonic(bkey), _mask_ids(mask)), c

    def constant(self):
        return self.terms.get((0, 0), 0)

    def __repr__(self) -> str:
        return f"SuperPolynomial({self})"

    def __str__(self) -> str:
        return format_polynomial(self)


def add_terms(a: dict, b: dict, sign: int = 1) -> dict:
    if not b:
        return dict(a)
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + (v if sign == 1 else -v)
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def accumulate(out: dict, d: dict, sign: int = 1) -> None:
    """In-place ``out += sign * d``; zero entries are removed."""
    for k, v in d.items():
        w = out.get(k, 0) + (v if sign == 1 else -v)
        if w:
            out[k] = w
        else:
            del out[k]


def supercommutator(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    """``ab - (-1)^(d(a) d(b)) ba`` for parity-homogeneous operands."""
    a._check(b)
    pa, pb = a.parity, b.parity
    if pa is None or pb is None:
        raise NonHomogeneous("supercommutator needs parity-homogeneous operands")
    ab, ba = a * b, b * a
    return ab + ba if pa and pb else ab - ba


def mul(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    return a * b


def add(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    return a + b


def scale(a: SuperPolynomial, r) -> SuperPolynomial:
    return a.scale(r)


# text format


def _coeff_str(c) -> str:
    return str(c)


def _sort_key(item):
    (bkey, mask), _ = item
    mono_b = _unpack_bosonic(bkey)
    mono_f = _mask_ids(mask)
    deg = sum(e for _, e in mono_b) + len(mono_f)
    return (deg, mono_b, mono_f)


def format_polynomial(p: SuperPolynomial) -> str:
    if not p.terms:
        return "0"
    bos = p.registry.generators(BOSONIC)
    ferm = p.registry.generators(FERMIONIC)
    pieces = []
    for (bkey, mask), c in sorted(p.terms.items(), key=_sort_key):
        factors = []
        for i, e in _unpack_bosonic(bkey):
            f = f"b[{bos[i].label}]"
            factors.append(f if e == 1 else f"{f}^{e}")
        factors.extend(f"f[{ferm[j].label}]" for j in _mask_ids(mask))
        neg = c < 0
        body = " * ".join([_coeff_str(abs(c))] + factors)
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<gen>[bf])\[(?P<label>[^\]\s]+)\]"
    r"|(?P<op>[\^*+\-]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        pos = m.end()
        if m.group("num"):
            out.append(("num", m.group("num")))
        elif m.group("gen"):
            out.append((m.group("gen"), m.group("label")))
        else:
            out.append(("op", m.group("op")))
    return out


def parse_polynomial(registry: Registry, text: str) -> SuperPolynomial:
    """Parse the ``coeff * b[label]^e * f[label]`` format; fermionic factors
    may come in any order and are normalized with sign."""
    toks = _tokenize(text)
    if toks == [("num", "0")]:
        return registry.zero()
    result = registry.zero()
    i = 0
    sign = 1
    expect_term = True
    while i < len(toks):
        kind, val = toks[i]
        if expect_term and kind == "op" and val in "+-":
            sign = -sign if val == "-" else sign
            i += 1
            continue
        term = registry.const(sign)
        while True:
            if i >= len(toks):
                raise ValueError("dangling operator")
            kind, val = toks[i]
            if kind == "num":
                factor = registry.const(Fraction(val))
                i += 1
            elif kind in ("b", "f"):
                gen = registry.lookup(BOSONIC if kind == "b" else FERMIONIC, val)
                factor = registry.var(gen)
                i += 1
                if i < len(toks) and toks[i] == ("op", "^"):
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num":
                        raise ValueError("exponent must be an integer")
                    factor = factor ** int(toks[i + 1][1])
                    i += 2
            else:
                raise ValueError(f"unexpected token {val!r}")
            term = term * factor
            if i < len(toks) and toks[i] == ("op", "*"):
                i += 1
                continue
            break
        result = result + term
        sign = 1
        if i < len(toks):
            kind, val = toks[i]
            if kind != "op" or val not in "+-":
                raise ValueError(f"unexpected token {val!r}")
            sign = -1 if val == "-" else 1
            i += 1
            if i >= len(toks):
                raise ValueError("dangling operator")
        expect_term = False
    return result


def product(polys: Iterable[SuperPolynomial], registry: Registry) -> SuperPolynomial:
    result = registry.one()
    for p in polys:
        result = result * p
    return result
