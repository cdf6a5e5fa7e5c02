"""Truncated q-series, q-series with Laurent coefficients in torus variables,
constant terms, Molien-Weyl indices and rank-computed Hilbert series.

Everything is exact: a series truncated at order ``N`` keeps the
coefficients of ``q^0 .. q^N`` and infinite products stop at the first
factor that is ``1 mod q^(N+1)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .superalg import normalize_coeff

Exp = tuple[int, ...]


class QSeries:
    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable = (), order: int | None = None) -> None:
        cs = [normalize_coeff(c) for c in coeffs]
        if order is None:
            order = max(len(cs) - 1, 0)
        cs = cs[: order + 1]
        cs += [0] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = cs

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls([1], order)

    @classmethod
    def monomial(cls, k: int, order: int, c=1) -> "QSeries":
        cs = [0] * (order + 1)
        if 0 <= k <= order:
            cs[k] = c
        return cls(cs, order)

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            if other.order != self.order:
                raise ValueError(f"truncation orders {self.order} and {other.order} differ")
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries([other], self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries([a * other for a in self.coeffs], self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        N = self.order
        out = [0] * (N + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(N + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return QSeries(out, N)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("constant coefficient is zero")
        N = self.order
        inv = [Fraction(0)] * (N + 1)
        inv[0] = Fraction(1) / c0
        for k in range(1, N + 1):
            s = sum(self.coeffs[j] * inv[k - j] for j in range(1, k + 1))
            inv[k] = -s / c0
        return QSeries(inv, N)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries([Fraction(a) / other for a in self.coeffs], self.order)
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = QSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QSeries([other], self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, tuple(self.coeffs)))

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __str__(self) -> str:
        return format_series(self.coeffs)

    def __repr__(self) -> str:
        return f"QSeries({self}, order={self.order})"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def format_series(coeffs: Sequence, start: int = 0) -> str:
    """``1 - q - q^2 + q^5`` style text; ``start`` is the exponent of
    ``coeffs[0]``."""
    out = ""
    for i, c in enumerate(coeffs):
        if not c:
            continue
        k = i + start
        mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out or "0"


class TorusQSeries:
    """Series in ``q`` truncated at ``order`` whose coefficients are Laurent
    polynomials in ``z_1..z_n``, stored as ``{exponent tuple: coeff}``."""

    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs: list[dict] | None = None) -> None:
        self.nvars = nvars
        self.order = order
        if coeffs is None:
            coeffs = [{} for _ in range(order + 1)]
        self.coeffs = coeffs

    @classmethod
    def one(cls, nvars: int, order: int) -> "TorusQSeries":
        s = cls(nvars, order)
        s.coeffs[0][(0,) * nvars] = 1
        return s

    @classmethod
    def monomial(cls, nvars: int, order: int, z: Exp, qpow: int = 0, c=1) -> "TorusQSeries":
        s = cls(nvars, order)
        if qpow <= order:
            s.coeffs[qpow][tuple(z)] = normalize_coeff(c)
        return s

    def copy(self) -> "TorusQSeries":
        return TorusQSeries(self.nvars, self.order, [dict(d) for d in self.coeffs])

    def __add__(self, other: "TorusQSeries") -> "TorusQSeries":
        out = self.copy()
        for k, d in enumerate(other.coeffs):
            _acc(out.coeffs[k], d, 1)
        return out

    def scale(self, r) -> "TorusQSeries":
        r = normalize_coeff(r)
        return TorusQSeries(self.nvars, self.order,
                            [{e: normalize_coeff(c * r) for e, c in d.items()} for d in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, QSeries):
            other = TorusQSeries(self.nvars, self.order,
                                 [({(0,) * self.nvars: c} if c else {}) for c in other.coeffs])
        N = self.order
        out = [{} for _ in range(N + 1)]
        for i, da in enumerate(self.coeffs):
            if not da:
                continue
            for j in range(N + 1 - i):
                db = other.coeffs[j]
                if not db:
                    continue
                tgt = out[i + j]
                for ea, ca in da.items():
                    for eb, cb in db.items():
                        e = tuple(a + b for a, b in zip(ea, eb))
                        v = tgt.get(e, 0) + ca * cb
                        if v:
                            tgt[e] = v
                        else:
                            tgt.pop(e, None)
        return TorusQSeries(self.nvars, N, out)

    def mul_binomial(self, c, z: Exp, qpow: int) -> "TorusQSeries":
        """Multiply by ``1 + c z^z q^qpow``."""
        N = self.order
        out = [dict(d) for d in self.coeffs]
        if qpow > N or not c:
            return TorusQSeries(self.nvars, N, out)
        for k in range(N, qpow - 1, -1):
            src = self.coeffs[k - qpow]
            if not src:
                continue
            tgt = out[k]
            for e, v in src.items():
                e2 = tuple(a + b for a, b in zip(e, z))
                w = tgt.get(e2, 0) + c * v
                if w:
                    tgt[e2] = w
                else:
                    tgt.pop(e2, None)
        return TorusQSeries(self.nvars, N, out)

    def prune(self, bound: Sequence[int]) -> None:
        """Drop terms with ``|e_i| > bound[i]`` for some ``i``."""
        for d in self.coeffs:
            for e in [e for e in d if any(abs(a) > b for a, b in zip(e, bound))]:
                del d[e]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusQSeries):
            return NotImplemented
        return (self.nvars, self.order) == (other.nvars, other.order) and self.coeffs == other.coeffs

    def constant_term(self) -> QSeries:
        zero = (0,) * self.nvars
        return QSeries([d.get(zero, 0) for d in self.coeffs], self.order)


def _acc(out: dict, d: dict, sign: int) -> None:
    for k, v in d.items():
        w = out.get(k, 0) + (v if sign > 0 else -v)
        if w:
            out[k] = w
        else:
            out.pop(k, None)


def constant_term(s: TorusQSeries) -> QSeries:
    return s.constant_term()


@dataclass(frozen=True)
class QMonomial:
    """``coeff * z^z * q^qpow``; ``z`` is None for a pure q-monomial."""

    coeff: object = 1
    z: Exp | None = None
    qpow: int = 0


def _binomials(x: QMonomial, order: int, length: int | None) -> list[tuple[object, Exp | None, int]]:
    """Factors ``1 - x q^i`` as ``(c, z, qpow)`` meaning ``1 + c z^z q^qpow``;
    factors beyond ``q^order`` are 1 and are skipped."""
    if not x.coeff:
        return []
    stop = order - x.qpow + 1 if length is None else min(length, order - x.qpow + 1)
    return [(-x.coeff, x.z, x.qpow + i) for i in range(max(stop, 0))]


def pochhammer(x: QMonomial, order: int, length: int | None = None) -> QSeries | TorusQSeries:
    """``(x; q)_length`` (infinite when ``length`` is None) truncated at
    ``order``. Returns a TorusQSeries when ``x`` carries torus exponents."""
    factors = _binomials(x, order, length)
    if x.z is None:
        s = QSeries.one(order)
        for c, _, qp in factors:
            s = s * (QSeries.one(order) + QSeries.monomial(qp, order, c))
        return s
    s = TorusQSeries.one(len(x.z), order)
    for c, z, qp in factors:
        s = s.mul_binomial(c, z, qp)
    return s


def euler_function(order: int) -> QSeries:
    """``(q; q)_inf`` truncated at ``order``."""
    return pochhammer(QMonomial(1, None, 1), order)


def _root(n: int, i: int, j: int) -> Exp:
    """Exponent of ``z_i^-1 z_j``."""
    e = [0] * n
    e[i] -= 1
    e[j] += 1
    return tuple(e)


def _product_ct(n: int, order: int, factors: list[tuple[object, Exp, int]]) -> QSeries:
    """Constant term of a product of binomials ``1 + c z^e q^k``, pruning
    terms that the remaining factors can no longer bring back to z-degree 0."""
    remaining = [0] * n
    for _, e, k in factors:
        if k <= order:
            for a in range(n):
                remaining[a] += abs(e[a])
    s = TorusQSeries.one(n, order)
    for c, e, k in factors:
        if k > order:
            continue
        s = s.mul_binomial(c, e, k)
        for a in range(n):
            remaining[a] -= abs(e[a])
        s.prune(remaining)
    return s.constant_term()


def molien_weyl_index(n: int, order: int) -> QSeries:
    """``(1/n!) CT[ prod_{i!=j}(1 - z_i^-1 z_j) prod_{k>=1} prod_{i,j}(1 - z_i^-1 z_j q^k) ]``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    factors = [(-1, _root(n, i, j), 0) for i in range(n) for j in range(n) if i != j]
    for k in range(1, order + 1):
        for i in range(n):
            for j in range(n):
                factors.append((-1, _root(n, i, j), k))
    ct = _product_ct(n, order, factors)
    return ct * Fraction(1, math.factorial(n))


@dataclass
class IndexVerdict:
    ok: bool
    detail: str
    series: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def _weyl_average_identity(n: int) -> bool:
    """``sum_sigma prod_{i<j}(1 - z_s(i)^-1 z_s(j)) == prod_{i!=j}(1 - z_i^-1 z_j)``
    as Laurent polynomials."""
    lhs = TorusQSeries(n, 0)
    for perm in itertools.permutations(range(n)):
        t = TorusQSeries.one(n, 0)
        for a in range(n):
            for b in range(a + 1, n):
                t = t.mul_binomial(-1, _root(n, perm[a], perm[b]), 0)
        lhs = lhs + t
    rhs = TorusQSeries.one(n, 0)
    for i in range(n):
        for j in range(n):
            if i != j:
                rhs = rhs.mul_binomial(-1, _root(n, i, j), 0)
    return lhs == rhs


def andrews_ct_check(n: int, order: int) -> IndexVerdict:
    """Constant terms of the ordered form
    ``prod_{i<j}(z_i^-1 z_j;q) (q z_j^-1 z_i;q)`` and of the symmetrized form
    ``(1/n!) prod_{i!=j}(z_i^-1 z_j;q)`` against ``(q;q)^(1-n)``."""
    target = euler_function(order) ** (1 - n)
    ordered = []
    sym = []
    for i in range(n):
        for j in range(n):
            if i < j:
                for k in range(order + 1):
                    ordered.append((-1, _root(n, i, j), k))
                for k in range(1, order + 1):
                    ordered.append((-1, _root(n, j, i), k))
            if i != j:
                for k in range(order + 1):
                    sym.append((-1, _root(n, i, j), k))
    ct_ordered = _product_ct(n, order, ordered)
    ct_sym = _product_ct(n, order, sym) * Fraction(1, math.factorial(n))
    averaging = _weyl_average_identity(n)
    ok = ct_ordered == target and ct_sym == target and averaging
    detail = (
        f"ordered={ct_ordered}; symmetrized={ct_sym}; target={target}; "
        f"averaging identity {'holds' if averaging else 'fails'}"
    )
    return IndexVerdict(ok, detail, {"ordered": ct_ordered, "symmetrized": ct_sym, "target": target})


def matrix_shape(n: int, charges: Sequence[int]) -> list[tuple[int, int]]:
    """Doubled generator shape of matrix variables: ``n^2`` coordinates of
    each charge."""
    return [(c, n * n) for c in charges]


def free_index(shape: Sequence[tuple[int, int]], order: int, literal: bool = False) -> QSeries:
    """Index of ``S(V) (x) Lambda(V)`` with ``u = t`` for ``V`` of the given
    ``(charge, dim)`` shape. Each fermionic generator counts with sign -1;
    ``literal`` instead uses ``(1 + (-t)^c)`` per fermionic generator."""
    s = QSeries.one(order)
    for c, dim in shape:
        if c < 1:
            raise ValueError("charges must be positive")
        bos = (QSeries.one(order) - QSeries.monomial(c, order)).inverse() ** dim
        ferm_factor = QSeries.one(order) + QSeries.monomial(c, order, (-1) ** c if literal else -1)
        s = s * bos * ferm_factor ** dim
    return s


def free_index_identity_check(shape: Sequence[tuple[int, int]], order: int) -> IndexVerdict:
    idx = free_index(shape, order)
    lit = free_index(shape, order, literal=True)
    ok = idx == QSeries.one(order)
    return IndexVerdict(ok, f"index={idx}; literal sign reading={lit}", {"index": idx, "literal": lit})


# Hilbert series computed by exact ranks


def _odd_trace_subsets(degree: int, max_odd: int | None) -> list[tuple[int, ...]]:
    """Sets of distinct odd exponents summing to ``degree``."""
    odds = [k for k in range(1, degree + 1, 2) if max_odd is None or k <= max_odd]
    out = []
    for r in range(len(odds) + 1):
        for combo in itertools.combinations(odds, r):
            if sum(combo) == degree:
                out.append(combo)
    return out


def hilbert_series_by_rank(n: int, mode: str, order: int, traceless: bool = False,
                           max_index: int | None = None) -> QSeries:
    """Series whose ``q^l`` coefficient is a dimension computed by exact rank.

    Modes: ``invariants`` (trace polynomials in one fermionic matrix),
    ``equivariants`` (matrices ``t_S * xi^i`` in one fermionic matrix),
    ``free`` (bosonic trace monomials of the free algebra by charge) and
    ``traceless`` (ranks of the bosonic charge-graded monomials on
    ``n x n`` traceless fermionic matrices)."""
    from ._backend import rank_exact
    from .freetrace import FERM, tr
    from .identities import Evaluator, charge_table, generic_assignment

    if mode == "free":
        rows = charge_table(order, force=True, max_index=max_index)
        return QSeries([1] + [r.free_dim[0] for r in rows], order)
    if mode == "traceless":
        rows = charge_table(order, with_rank_at=n, traceless=True, force=True, max_index=max_index)
        return QSeries([1] + [r.rank_at_n[n][0] for r in rows], order)
    if mode not in ("invariants", "equivariants"):
        raise ValueError(f"unknown mode {mode!r}")
    x = (FERM, 1)
    reg, assignment = generic_assignment([x], n, traceless=traceless)
    ev = Evaluator(assignment, n, reg)
    first = 3 if traceless else 1
    coeffs = []
    for d in range(order + 1):
        if mode == "invariants":
            rows = []
            for combo in _odd_trace_subsets(d, None):
                if combo and combo[0] < first:
                    continue
                expr = _trace_product(combo, x)
                rows.append(ev.polynomial(expr).terms)
        else:
            rows = []
            for i in range(d + 1):
                for combo in _odd_trace_subsets(d - i, None):
                    if combo and combo[0] < first:
                        continue
                    expr = _trace_product(combo, x) * _power_word(x, i)
                    mat = ev.matrix(expr)
                    flat = {}
                    for a, row in enumerate(mat._rows):
                        for b, entry in enumerate(row):
                            for key, c in entry.items():
                                flat[(a, b, key)] = c
                    rows.append(flat)
        coeffs.append(rank_exact(rows))
    return QSeries(coeffs, order)


def _trace_product(exponents: Sequence[int], x):
    from .freetrace import TraceExpression, tr

    expr = TraceExpression.scalar(1)
    for k in exponents:
        expr = expr * tr([x] * k)
    return expr


def _power_word(x, i: int):
    from .freetrace import wordexpr

    return wordexpr([x] * i)


def dynkin_series(n: int, order: int) -> QSeries:
    """``prod_{i=1}^n (1 + q^(2i-1))`` truncated."""
    s = QSeries.one(order)
    for i in range(1, n + 1):
        s = s * (QSeries.one(order) + QSeries.monomial(2 * i - 1, order))
    return s


def equivariant_readings(n: int) -> dict[str, dict[int, int]]:
    """Two candidate closed forms for the graded dimension of the equivariants, as
    Laurent polynomials ``{exponent: coeff}``: the literal product
    ``prod_{i=0}^{n-1}(1+q^(2i-1)) * sum_{i=0}^{2n-1}(1+q^i)`` and the
    free-module reading ``prod_{i=1}^{n-1}(1+q^(2i-1)) * sum_{i=0}^{2n-1} q^i``."""

    def mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                out[i + j] = out.get(i + j, 0) + x * y
        return {k: v for k, v in out.items() if v}

    literal = {0: 1}
    for i in range(n):
        literal = mul(literal, {0: 1, 2 * i - 1: 1} if 2 * i - 1 != 0 else {0: 2})
    summ: dict = {}
    for i in range(2 * n):
        summ[0] = summ.get(0, 0) + 1
        summ[i] = summ.get(i, 0) + 1
    literal = mul(literal, summ)
    module = {0: 1}
    for i in range(1, n):
        module = mul(module, {0: 1, 2 * i - 1: 1})
    module = mul(module, {i: 1 for i in range(2 * n)})
    return {"literal": dict(sorted(literal.items())), "free_module": dict(sorted(module.items()))}


def compare_equivariant_readings(n: int) -> dict:
    """Rank-computed equivariant series of one fermionic matrix against both
    readings; the series is computed up to degree ``4n`` which covers both."""
    order = 4 * n
    computed = hilbert_series_by_rank(n, "equivariants", order)
    got = {k: c for k, c in enumerate(computed.coeffs) if c}
    readings = equivariant_readings(n)
    return {
        "computed": got,
        "readings": readings,
        "matches": {name: got == poly for name, poly in readings.items()},
    }


def traceless_rank_profile(n: int, order: int, max_index: int | None = None) -> list[dict]:
    """Per charge: free and evaluated dimensions of both parities on ``n x n``
    traceless fermionic matrices, with the first deficit flagged."""
    from .identities import charge_table

    rows = charge_table(order, with_rank_at=n, traceless=True, force=True, max_index=max_index)
    out = []
    for r in rows:
        fb, ff = r.free_dim
        rb, rf = r.rank_at_n[n]
        out.append({"charge": r.charge, "free": [fb, ff], "rank": [rb, rf],
                    "deficit": [fb - rb, ff - rf]})
    return out


def first_deficit(profile: Sequence[dict]) -> int | None:
    for row in profile:
        if any(row["deficit"]):
            return row["charge"]
    return None
