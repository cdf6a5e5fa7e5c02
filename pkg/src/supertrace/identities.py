"""Super Cayley-Hamilton identities, evaluation into generic matrices, and
the exact rank computations built on it.

Conventions: ``gen_T(e, f, n)`` and ``gen_CH(e, f, n)`` use the standard
coloring ``C_{e,f}`` on the ``n+1`` points of ``S_{n+1}``. ``gen_CH`` strips
the last point, i.e. ``x_f`` when ``f >= 1`` and ``y_e`` otherwise, so that
``tr(gen_CH(e, f, n) * stripped) == gen_T(e, f, n)``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._backend import poly_mul, rank_exact
from .freetrace import (
    BOS,
    FERM,
    Coloring,
    ColoredPermutation,
    Letter,
    NotHomogeneous,
    ParityMismatch,
    TraceExpression,
    Word,
    all_permutations,
    canonical_trace,
    compose,
    cycles_of,
    encode_phi,
    encode_psi,
    letter_name,
    make_term,
    perm_sign,
    tau_pstring,
    tau_string,
    tr,
    word_parity,
    wordexpr,
)
from .gmatrix import SizeMismatch, SuperMatrix, generic_matrix
from .superalg import (
    BOSONIC,
    FERMIONIC,
    Registry,
    RegistryMismatch,
    SuperAlgebraError,
    SuperPolynomial,
    accumulate,
)


class BadArity(SuperAlgebraError, ValueError):
    pass


class TooLarge(SuperAlgebraError):
    pass


CAPS = {"m": 6, "n": 3, "ell": 8}


def _guard(name: str, value: int, force: bool) -> None:
    if value > CAPS[name] and not force:
        raise TooLarge(f"{name}={value} exceeds the cap {CAPS[name]}; pass force=True to override")


def _sum(exprs: Iterable[TraceExpression]) -> TraceExpression:
    out: dict = {}
    for ex in exprs:
        accumulate(out, ex.terms)
    return TraceExpression(out)


# generation


@dataclass(frozen=True)
class IdentitySpec:
    e: int
    f: int
    n: int
    kind: str = "T"
    size: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("T", "CH"):
            raise ValueError(f"kind must be 'T' or 'CH', got {self.kind!r}")
        if self.e < 0 or self.f < 0 or self.e + self.f != self.n + 1:
            raise BadArity(f"need e + f = n + 1, got e={self.e}, f={self.f}, n={self.n}")

    @property
    def matrix_size(self) -> int:
        return self.size if self.size is not None else self.n


def _check_arity(e: int, f: int, n: int | None) -> int:
    if n is None:
        n = e + f - 1
    if e < 0 or f < 0 or e + f != n + 1 or n < 0:
        raise BadArity(f"need e + f = n + 1, got e={e}, f={f}, n={n}")
    return n


def stripped_letter(e: int, f: int) -> Letter:
    return (FERM, f) if f >= 1 else (BOS, e)


def free_letters(e: int, f: int, kind: str = "T") -> list[Letter]:
    letters = list(Coloring.standard(e, f).letters)
    if kind == "CH":
        letters.remove(stripped_letter(e, f))
    return letters


def gen_T(e: int, f: int, n: int | None = None) -> TraceExpression:
    """``sum_{sigma in S_{n+1}} sgn(sigma) Phi_sigma`` for ``C_{e,f}``."""
    n = _check_arity(e, f, n)
    col = Coloring.standard(e, f)
    return _sum(
        encode_phi(ColoredPermutation(p, col)).scale(perm_sign(p))
        for p in all_permutations(n + 1)
    )


def gen_CH(e: int, f: int, n: int | None = None) -> TraceExpression:
    """``sum_{sigma in S_{n+1}} sgn(sigma) Psi_sigma`` for ``C_{e,f}``; the
    last point is stripped."""
    n = _check_arity(e, f, n)
    col = Coloring.standard(e, f)
    return _sum(
        encode_psi(ColoredPermutation(p, col)).scale(perm_sign(p))
        for p in all_permutations(n + 1)
    )


def generate(spec: IdentitySpec) -> TraceExpression:
    return gen_T(spec.e, spec.f, spec.n) if spec.kind == "T" else gen_CH(spec.e, spec.f, spec.n)


def ch_contract(e: int, f: int, n: int | None = None) -> bool:
    """``tr(gen_CH * stripped) == gen_T`` in the free algebra."""
    n = _check_arity(e, f, n)
    z = wordexpr((stripped_letter(e, f),))
    return (gen_CH(e, f, n) * z).trace() == gen_T(e, f, n)


def classical_cayley_hamilton(n: int, letter: Letter = (BOS, 1)) -> TraceExpression:
    """``sum_k (-1)^k e_k(y) y^(n-k)`` with ``e_k`` written through power
    traces by Newton's identities."""
    p = [None] + [tr([letter] * i) for i in range(1, n + 1)]
    e = [TraceExpression.scalar(1)]
    for k in range(1, n + 1):
        acc = TraceExpression()
        for i in range(1, k + 1):
            term = e[k - i] * p[i]
            acc = acc + (term if i % 2 else -term)
        e.append(acc.scale(Fraction(1, k)))
    out = TraceExpression()
    for k in range(n + 1):
        term = e[k] * wordexpr([letter] * (n - k))
        out = out + (term if k % 2 == 0 else -term)
    return out


def restitution_ratio(n: int) -> Fraction:
    """``c`` with ``gen_CH(n+1, 0, n)|_{y_i -> y} == c * CH_n(y)``."""
    y = wordexpr(((BOS, 1),))
    ch = gen_CH(n + 1, 0, n).substitute({(BOS, i): y for i in range(1, n + 1)})
    ref = classical_cayley_hamilton(n)
    key = ((), ((BOS, 1),) * n)
    c = Fraction(ch.terms.get(key, 0), ref.terms[key])
    if ch != ref.scale(c):
        raise AssertionError("restituted identity is not proportional to the classical one")
    return c


# evaluation


class Evaluator:
    """Evaluation homomorphism ``letter -> matrix`` with cached word products."""

    def __init__(self, assignment: Mapping[Letter, SuperMatrix], n: int | None = None,
                 registry: Registry | None = None) -> None:
        mats = list(assignment.values())
        if mats:
            registry = mats[0].registry
            n = mats[0].n
        if registry is None or n is None:
            raise ValueError("need at least one matrix or explicit registry and size")
        for letter, mat in assignment.items():
            if mat.registry is not registry:
                raise RegistryMismatch("matrices come from different registries")
            if mat.n != n:
                raise SizeMismatch(f"matrix for {letter_name(letter)} has size {mat.n}, expected {n}")
            d = mat.degree
            if not mat.is_zero() and d != letter[0]:
                raise ParityMismatch(
                    f"{letter_name(letter)} needs a {'fermionic' if letter[0] else 'bosonic'} matrix"
                )
        self.registry = registry
        self.n = n
        self.assignment = dict(assignment)
        self._words: dict[Word, SuperMatrix] = {}
        self._traces: dict[Word, dict] = {(): {(0, 0): n}}

    def word(self, w: Word) -> SuperMatrix:
        got = self._words.get(w)
        if got is not None:
            return got
        if not w:
            res = SuperMatrix.identity(self.registry, self.n)
        elif len(w) == 1:
            try:
                res = self.assignment[w[0]]
            except KeyError:
                raise KeyError(f"no matrix assigned to {letter_name(w[0])}") from None
        else:
            res = self.word(w[:-1]) @ self.word(w[-1:])
        self._words[w] = res
        return res

    def trace_word(self, w: Word) -> dict:
        got = self._traces.get(w)
        if got is None:
            got = self._traces[w] = self.word(w).trace().terms
        return got

    def scalar_part(self, factors: tuple[Word, ...], coeff) -> dict:
        guard = self.registry.guard
        acc = {(0, 0): coeff}
        for w in factors:
            acc = poly_mul(acc, self.trace_word(w), guard)
            if not acc:
                break
        return acc

    def polynomial(self, expr: TraceExpression) -> SuperPolynomial:
        if not expr.is_trace_element():
            raise ValueError("expression has untraced terms; use matrix()")
        out: dict = {}
        for (fs, _), c in expr.terms.items():
            accumulate(out, self.scalar_part(fs, c))
        return SuperPolynomial(self.registry, out)

    def matrix(self, expr: TraceExpression) -> SuperMatrix:
        n = self.n
        grid = [[{} for _ in range(n)] for _ in range(n)]
        guard = self.registry.guard
        for (fs, outer), c in expr.terms.items():
            s = self.scalar_part(fs, c)
            if not s:
                continue
            m = self.word(outer)
            for i in range(n):
                row = m._rows[i]
                for j in range(n):
                    if row[j]:
                        accumulate(grid[i][j], poly_mul(s, row[j], guard))
        return SuperMatrix._raw(self.registry, grid)

    def __call__(self, expr: TraceExpression):
        if expr.is_trace_element():
            return self.polynomial(expr)
        return self.matrix(expr)


def evaluate(expr: TraceExpression, assignment: Mapping[Letter, SuperMatrix], n: int | None = None):
    """Trace elements map to a SuperPolynomial, anything with an outer word to
    a SuperMatrix; ``t(1)`` maps to the matrix size."""
    return Evaluator(assignment, n)(expr)


def generic_assignment(letters: Iterable[Letter], n: int, registry: Registry | None = None,
                       traceless: bool = False) -> tuple[Registry, dict[Letter, SuperMatrix]]:
    reg = registry or Registry()
    out = {}
    for letter in sorted(set(letters)):
        kind = FERMIONIC if letter[0] == FERM else BOSONIC
        label = ("X" if letter[0] == FERM else "Y") + str(letter[1])
        out[letter] = generic_matrix(reg, kind, label, n, traceless)
    return reg, out


# verification


@dataclass
class Verdict:
    ok: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def _witness(value) -> str:
    if isinstance(value, SuperPolynomial):
        (k, c), = itertools.islice(value.terms.items(), 1)
        return str(SuperPolynomial(value.registry, {k: c}))
    for i, row in enumerate(value.entries()):
        for j, e in enumerate(row):
            if e:
                (k, c), = itertools.islice(e.terms.items(), 1)
                return f"entry ({i + 1},{j + 1}) contains {SuperPolynomial(value.registry, {k: c})}"
    return ""


def verify_identity(spec: IdentitySpec, expr: TraceExpression | None = None) -> Verdict:
    """Evaluate ``gen_T``/``gen_CH`` on fresh generic matrices of size
    ``spec.matrix_size``; ok iff the result is exactly zero."""
    if expr is None:
        expr = generate(spec)
    letters = free_letters(spec.e, spec.f, spec.kind)
    reg, assignment = generic_assignment(letters, spec.matrix_size)
    ev = Evaluator(assignment, spec.matrix_size, reg)
    value = ev.matrix(expr) if spec.kind == "CH" else ev.polynomial(expr)
    zero = value.is_zero()
    return Verdict(
        zero,
        "zero" if zero else "nonzero: " + _witness(value),
        {"spec": spec, "expression": expr, "terms": len(expr)},
    )


def deduce_one_matrix_relations(n: int) -> dict[str, Verdict]:
    """Specialize the bosonic Cayley-Hamilton identity at ``y_i <- x^2`` and
    the one with a single free fermionic slot at ``y_i <- x^2, x <- x``;
    both must vanish on one generic fermionic matrix of size ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x = (FERM, 1)
    x2 = wordexpr((x, x))
    out = {}
    ch0 = gen_CH(n + 1, 0, n).substitute({(BOS, i): x2 for i in range(1, n + 1)})
    ch1 = gen_CH(n - 1, 2, n).substitute({(BOS, i): x2 for i in range(1, n)})
    for name, expr in (("CH_n0", ch0), ("CH_n1", ch1)):
        reg, assignment = generic_assignment([x], n)
        value = Evaluator(assignment, n, reg).matrix(expr)
        zero = value.is_zero()
        out[name] = Verdict(zero, "zero" if zero else "nonzero: " + _witness(value),
                            {"expression": expr})
    return out


# ranks


def relation_rank(m: int, e: int, f: int, n: int, force: bool = False) -> tuple[int, int]:
    """Rank of ``{Phi_sigma : sigma in S_m}`` evaluated on generic ``n x n``
    matrices, and the kernel dimension ``m! - rank``."""
    if e + f != m or e < 0 or f < 0:
        raise BadArity(f"need e + f = m, got e={e}, f={f}, m={m}")
    _guard("m", m, force)
    _guard("n", n, force)
    col = Coloring.standard(e, f)
    reg, assignment = generic_assignment(col.letters, n)
    ev = Evaluator(assignment, n, reg)
    rows = [ev.polynomial(encode_phi(ColoredPermutation(p, col))).terms for p in all_permutations(m)]
    r = rank_exact(rows)
    return r, math.factorial(m) - r


# charge-graded trace monomials


def _compositions(total: int, min_parts: int = 2) -> Iterable[tuple[int, ...]]:
    if total == 0:
        if min_parts <= 0:
            yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first, min_parts - 1):
            yield (first,) + rest


def trace_words(charge: int, max_index: int | None = None, include_single: bool = False) -> list[Word]:
    """Canonical nonzero trace words in ``x_k`` (charge ``k``) of the given
    charge, sorted."""
    out = set()
    for comp in _compositions(charge, 1 if include_single else 2):
        if max_index is not None and max(comp) > max_index:
            continue
        s, w = canonical_trace(tuple((FERM, k) for k in comp))
        if s:
            out.add(w)
    return sorted(out)


def trace_monomials(charge: int, max_index: int | None = None, include_single: bool = False) -> list[TraceExpression]:
    """Canonical nonzero products of trace words with total charge ``charge``."""
    pool = []
    for c in range(1, charge + 1):
        pool.extend((w, c) for w in trace_words(c, max_index, include_single))
    pool.sort()
    out = []

    def rec(start: int, remaining: int, chosen: list[Word]) -> None:
        if remaining == 0:
            s, key = make_term(chosen)
            if s:
                out.append(TraceExpression({key: 1}))
            return
        for i in range(start, len(pool)):
            w, c = pool[i]
            if c > remaining:
                continue
            odd = word_parity(w)
            rec(i + 1 if odd else i, remaining - c, chosen + [w])

    rec(0, charge, [])
    return out


@dataclass
class ChargeTableRow:
    charge: int
    bosonic: list[TraceExpression]
    fermionic: list[TraceExpression]
    rank_at_n: dict[int, tuple[int, int]] = field(default_factory=dict)

    @property
    def free_dim(self) -> tuple[int, int]:
        return len(self.bosonic), len(self.fermionic)


def _rank_of(monomials: Sequence[TraceExpression], ev: Evaluator) -> int:
    return rank_exact([ev.polynomial(mono).terms for mono in monomials])


def charge_table(lmax: int, with_rank_at: int | None = None, traceless: bool = True,
                 force: bool = False, max_index: int | None = None) -> list[ChargeTableRow]:
    """Rows for charges ``1..lmax``. Single-letter traces ``t(x_k)`` are not
    listed (they vanish on traceless matrices). With ``with_rank_at`` each
    row also records the ranks of both parities evaluated on generic
    (traceless, per flag) fermionic matrices of that size."""
    _guard("ell", lmax, force)
    if with_rank_at is not None:
        _guard("n", with_rank_at, force)
    ev = None
    if with_rank_at is not None:
        top = lmax if max_index is None else min(lmax, max_index)
        reg, assignment = generic_assignment([(FERM, k) for k in range(1, top + 1)], with_rank_at,
                                             traceless=traceless)
        ev = Evaluator(assignment, with_rank_at, reg)
    rows = []
    for ell in range(1, lmax + 1):
        monos = trace_monomials(ell, max_index)
        bos = [mono for mono in monos if mono.parity == 0]
        ferm = [mono for mono in monos if mono.parity == 1]
        row = ChargeTableRow(ell, bos, ferm)
        if ev is not None:
            row.rank_at_n[with_rank_at] = (_rank_of(bos, ev), _rank_of(ferm, ev))
        rows.append(row)
    return rows


def format_charge_table(rows: Sequence[ChargeTableRow]) -> str:
    lines = []
    for row in rows:
        nb, nf = row.free_dim
        head = f"l={row.charge} dim={nb}/{nf}"
        for n, (rb, rf) in sorted(row.rank_at_n.items()):
            head += f" rank@{n}={rb}/{rf}"
        lines.append(head)
        lines.append("  bosonic:   " + (", ".join(str(m) for m in row.bosonic) or "-"))
        lines.append("  fermionic: " + (", ".join(str(m) for m in row.fermionic) or "-"))
    return "\n".join(lines)


def specialize_traceless(expr: TraceExpression) -> TraceExpression:
    """Drop every term containing a single-letter trace factor."""
    return TraceExpression({
        k: c for k, c in expr.terms.items() if not any(len(w) == 1 for w in k[0])
    })


def charge7_relation_check() -> Verdict:
    """The charge-7 relations of traceless fermionic 3 x 3 matrices."""
    x1, x2 = (FERM, 1), (FERM, 2)
    rel = tr([x1] * 5 + [x2]).scale(3) + tr([x1, x1, x2]) * tr([x1] * 3)
    reg, assignment = generic_assignment([x1, x2], 3, traceless=True)
    ev = Evaluator(assignment, 3, reg)
    checks = {}
    checks["t(x1^7) = 0"] = ev.polynomial(tr([x1] * 7)).is_zero()
    checks["3t(x1^5x2) + t(x1^2x2)t(x1^3) = 0"] = ev.polynomial(rel).is_zero()
    checks["t(x1^5x2) != 0"] = not ev.polynomial(tr([x1] * 5 + [x2])).is_zero()
    checks["t(x1x2)t(x1^4) = 0 formally"] = (tr([x1, x2]) * tr([x1] * 4)).is_zero()
    x1sq = wordexpr((x1, x1))
    t22 = gen_T(2, 2, 3).substitute({(BOS, 1): x1sq, (BOS, 2): x1sq, x1: wordexpr((x1,)), x2: wordexpr((x2,))})
    reduced = specialize_traceless(t22)
    key = next(iter(rel.terms))
    ratio = Fraction(reduced.terms.get(key, 0), rel.terms[key])
    checks["T22 expansion = c * relation"] = bool(ratio) and reduced == rel.scale(ratio)
    checks["T22 vanishes at n=3"] = ev.polynomial(t22).is_zero()
    ok = all(checks.values())
    return Verdict(ok, "; ".join(f"{k}: {'ok' if v else 'FAIL'}" for k, v in checks.items()),
                   {"checks": checks, "T22": t22, "T22_traceless": reduced, "ratio": ratio})


# sign and polarization checks


def _fulton_gamma_formula(A, B, i, E, colors, colors2) -> int:
    fermi = {p: c for p, c in colors.items()}
    g = perm_sign([p for p in sorted(A) + sorted(B) if fermi[p]])
    g *= perm_sign([p for p in E if fermi[p]])
    g *= perm_sign([p for p in [i] + list(E) if fermi[p]])
    if colors[i] != colors2[i]:
        count = sum(1 for j in A if j != i and j > i and fermi[j])
        g *= (-1) ** count
    return g


def _fulton_gamma_brute(sigma: dict, A, i, E, colors, colors2) -> Fraction:
    letter = {p: (c, p) for p, c in colors.items()}
    letter2 = {p: (c, p) for p, c in colors2.items()}
    c = {p: p for p in colors}
    cyc = [i] + list(E)
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        c[a] = b
    full = {p: p for p in colors}
    full.update(sigma)
    lhs = tau_pstring(cycles_of(compose(full, c)), (), letter)
    rhs = tau_pstring(cycles_of(sigma), (), {p: letter2[p] for p in A})
    rhs = rhs.substitute({letter2[i]: tau_string(cyc, letter)})
    (k1, c1), = lhs.terms.items()
    (k2, c2), = rhs.terms.items()
    if k1 != k2:
        raise AssertionError("substituted monomial differs from the composed one")
    return Fraction(c1, c2)


def fulton_sign_check(trials: int = 50, seed: int = 0, max_points: int = 7) -> Verdict:
    """Compare the closed-form sign ``gamma`` with brute force for random
    ``A, B, i, E``, colorings and at least two permutations of ``A``."""
    rng = random.Random(seed)
    failures = []
    for _ in range(trials):
        m = rng.randint(2, max_points)
        pts = list(range(1, m + 1))
        rng.shuffle(pts)
        a_size = rng.randint(1, m)
        A, B = sorted(pts[:a_size]), sorted(pts[a_size:])
        colors = {p: rng.randint(0, 1) for p in range(1, m + 1)}
        i = rng.choice(A)
        E = list(B)
        rng.shuffle(E)
        colors2 = dict(colors)
        colors2[i] = sum(colors[p] for p in [i] + E) & 1
        expected = _fulton_gamma_formula(A, B, i, E, colors, colors2)
        seen = set()
        for _ in range(3):
            img = list(A)
            rng.shuffle(img)
            sigma = dict(zip(A, img))
            g = _fulton_gamma_brute(sigma, A, i, E, colors, colors2)
            seen.add(g)
            if g != expected:
                failures.append({"A": A, "B": B, "i": i, "E": E, "sigma": sigma, "got": g, "want": expected})
        if len(seen) > 1:
            failures.append({"A": A, "i": i, "E": E, "depends_on_sigma": sorted(seen)})
    ok = not failures
    return Verdict(ok, f"{trials} configurations, {len(failures)} failures", {"failures": failures[:5]})


def _fresh_letters(expr: TraceExpression, kind: int, count: int) -> list[Letter]:
    top = max((l[1] for l in expr.letters() if l[0] == kind), default=0)
    return [(kind, top + 1 + j) for j in range(count)]


def polarize(expr: TraceExpression, var: Letter, h: int, new_vars: Sequence[Letter] | None = None) -> TraceExpression:
    """Full polarization: every term of degree ``h`` in ``var`` becomes the
    sum over all ways of replacing its occurrences by ``new_vars``."""
    if new_vars is None:
        new_vars = _fresh_letters(expr, var[0], h)
    if len(new_vars) != h or any(v[0] != var[0] for v in new_vars):
        raise ValueError("need h new variables of the same parity")
    out: dict = {}
    for (fs, outer), c in expr.terms.items():
        pieces = list(fs) + [outer]
        positions = [(a, b) for a, w in enumerate(pieces) for b, l in enumerate(w) if l == var]
        if len(positions) != h:
            raise NotHomogeneous(f"term has degree {len(positions)} in {letter_name(var)}, expected {h}")
        for perm in itertools.permutations(range(h)):
            new = [list(w) for w in pieces]
            for (a, b), k in zip(positions, perm):
                new[a][b] = new_vars[k]
            s, key = make_term(new[:-1], new[-1])
            if s:
                accumulate(out, {key: c if s > 0 else -c})
    return TraceExpression(out)


def polarization_roundtrip(expr: TraceExpression, var: Letter, h: int | None = None) -> Verdict:
    degs = expr.occurrences(var)
    if h is None:
        if len(degs) != 1:
            raise NotHomogeneous(f"not homogeneous in {letter_name(var)}")
        h = degs.pop()
    elif degs and degs != {h}:
        raise NotHomogeneous(f"not homogeneous of degree {h} in {letter_name(var)}")
    new_vars = _fresh_letters(expr, var[0], h)
    pol = polarize(expr, var, h, new_vars)
    back = pol.substitute({v: wordexpr((var,)) for v in new_vars})
    target = expr.scale(math.factorial(h))
    ok = back == target
    return Verdict(ok, "restitution gives h! * expr" if ok else "restitution mismatch",
                   {"polarized": pol, "restituted": back, "h": h})


def rank1_oracle_check(perm: Sequence[int], e: int, f: int, n: int) -> Verdict:
    """Evaluate ``Phi_sigma`` at rank-one matrices ``u_i (x) phi_i`` and
    compare with the ordered pairing product and with the cycle form."""
    m = e + f
    if sorted(perm) != list(range(1, m + 1)):
        raise ValueError("perm must be a permutation of 1..e+f")
    reg = Registry()
    u = {}
    phi = {}
    for i in range(1, m + 1):
        kind = BOSONIC if i <= e else FERMIONIC
        u[i] = [reg.var(reg.allocate(kind, f"u{i}.{h}")) for h in range(1, n + 1)]
        phi[i] = [reg.var(reg.allocate(BOSONIC, f"phi{i}.{h}")) for h in range(1, n + 1)]
    col = Coloring.standard(e, f)
    assignment = {}
    for i in range(1, m + 1):
        rows = [[u[i][h] * phi[i][k] for k in range(n)] for h in range(n)]
        assignment[col.letter(i)] = SuperMatrix(reg, rows)

    def pair(j: int, i: int) -> SuperPolynomial:
        acc = reg.zero()
        for h in range(n):
            acc = acc + phi[j][h] * u[i][h]
        return acc

    sigma = ColoredPermutation(tuple(perm), col)
    lhs = Evaluator(assignment, n, reg).polynomial(encode_phi(sigma))
    inv = {v: k for k, v in sigma.as_map().items()}
    ordered = reg.one()
    for i in range(1, m + 1):
        ordered = ordered * pair(inv[i], i)
    cyc = reg.one()
    lam = sigma.lambda_string()
    for c in lam:
        k = len(c)
        for a in range(k):
            cyc = cyc * pair(c[a - 1], c[a])
    flat = [p for c in lam for p in c]
    cyc = cyc.scale(perm_sign([p for p in flat if col.color(p)]))
    ok = lhs == ordered == cyc
    return Verdict(ok, "match" if ok else "mismatch", {"lhs": lhs, "ordered": ordered, "cycle_form": cyc})


def rank1_oracle_random(count: int, seed: int = 0, max_m: int = 5, max_n: int = 3) -> Verdict:
    rng = random.Random(seed)
    bad = []
    for _ in range(count):
        m = rng.randint(1, max_m)
        e = rng.randint(0, m)
        n = rng.randint(1, max_n)
        perm = list(range(1, m + 1))
        rng.shuffle(perm)
        v = rank1_oracle_check(perm, e, m - e, n)
        if not v:
            bad.append((tuple(perm), e, m - e, n))
    return Verdict(not bad, f"{count} cases, {len(bad)} failures", {"failures": bad[:5]})


__all__ = [
    "BadArity", "TooLarge", "IdentitySpec", "Verdict", "Evaluator", "ChargeTableRow",
    "gen_T", "gen_CH", "generate", "ch_contract", "stripped_letter", "free_letters",
    "classical_cayley_hamilton", "restitution_ratio", "evaluate", "generic_assignment",
    "verify_identity", "deduce_one_matrix_relations", "relation_rank", "trace_words",
    "trace_monomials", "charge_table", "format_charge_table", "specialize_traceless",
    "charge7_relation_check", "fulton_sign_check", "polarize", "polarization_roundtrip",
    "rank1_oracle_check", "rank1_oracle_random",
]
