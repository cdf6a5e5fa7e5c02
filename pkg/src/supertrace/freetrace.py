"""The free superalgebra with trace and its trace algebra.

Letters are pairs ``(kind, index)`` with kind 0 for a bosonic ``y`` and 1 for
a fermionic ``x``; the tuple order puts every ``y`` before every ``x``. A
term of a :class:`TraceExpression` is keyed by ``(factors, outer)``: a sorted
tuple of canonical trace words followed by an untraced outer word, with the
trace factors written to the left. ``t(1)`` is the factor ``()`` and stays a
free symbol here.

Canonical forms:

* a trace word is the lexicographically least rotation of its signed cyclic
  class, the sign obtained from ``t(AB) = (-1)^(d(A) d(B)) t(BA)``; a class
  that meets itself with the opposite sign is zero;
* trace factors are sorted, odd factors anticommute and a repeated odd
  factor kills the term.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .superalg import SuperAlgebraError, normalize_coeff

Letter = tuple[int, int]
Word = tuple[Letter, ...]
Key = tuple[tuple[Word, ...], Word]

BOS, FERM = 0, 1


class ParityMismatch(SuperAlgebraError):
    pass


class NotMultilinear(SuperAlgebraError):
    pass


class NotHomogeneous(SuperAlgebraError):
    pass


# letters and words

_LETTER = re.compile(r"^([xy])(\d+)$")


def y(i: int) -> Letter:
    return (BOS, i)


def x(i: int) -> Letter:
    return (FERM, i)


def letter_name(letter: Letter) -> str:
    return ("y" if letter[0] == BOS else "x") + str(letter[1])


def parse_letter(name: str) -> Letter:
    m = _LETTER.match(name.strip())
    if not m:
        raise ValueError(f"bad letter {name!r}")
    return (BOS if m.group(1) == "y" else FERM, int(m.group(2)))


def parse_word(text: str | Sequence[str] | Sequence[Letter]) -> Word:
    if isinstance(text, str):
        text = text.split()
    return tuple(parse_letter(t) if isinstance(t, str) else tuple(t) for t in text)


def word_parity(word: Word) -> int:
    return sum(letter[0] for letter in word) & 1


def word_name(word: Word) -> str:
    return " ".join(letter_name(letter) for letter in word)


@lru_cache(maxsize=1 << 16)
def canonical_trace(word: Word) -> tuple[int, Word]:
    """``(sign, representative)`` of the signed cyclic class; sign 0 when
    the trace vanishes."""
    n = len(word)
    if n == 0:
        return 1, word
    period = n
    for d in range(1, n):
        if n % d == 0 and word[d:] + word[:d] == word:
            period = d
            break
    if (n // period) % 2 == 0 and word_parity(word[:period]):
        return 0, word
    best_k, best = 0, word
    for k in range(1, period):
        rot = word[k:] + word[:k]
        if rot < best:
            best_k, best = k, rot
    if best_k and word_parity(word[:best_k]) and word_parity(word[best_k:]):
        return -1, best
    return 1, best


def trace_vanishes(word: Word) -> bool:
    return canonical_trace(tuple(word))[0] == 0


def _sort_factors(factors: Sequence[Word]) -> tuple[int, tuple[Word, ...]]:
    """Sort canonical trace words; sign from permuting the odd ones."""
    if len(factors) < 2:
        return 1, tuple(factors)
    order = sorted(range(len(factors)), key=factors.__getitem__)
    odd_positions = [i for i in order if word_parity(factors[i])]
    sign = 1
    for a in range(len(odd_positions)):
        for b in range(a + 1, len(odd_positions)):
            if odd_positions[a] > odd_positions[b]:
                sign = -sign
    out = tuple(factors[i] for i in order)
    for a, b in zip(out, out[1:]):
        if a == b and word_parity(a):
            return 0, out
    return sign, out


def make_term(raw_factors: Iterable[Sequence[Letter]], outer: Sequence[Letter] = ()) -> tuple[int, Key]:
    """Canonicalize ``t(w1) t(w2) ... outer`` into ``(sign, key)``."""
    sign = 1
    canon = []
    for w in raw_factors:
        s, cw = canonical_trace(tuple(w))
        if not s:
            return 0, ((), ())
        sign *= s
        canon.append(cw)
    s, fs = _sort_factors(canon)
    return sign * s, (fs, tuple(outer))


def _factors_parity(factors: Iterable[Word]) -> int:
    return sum(word_parity(f) for f in factors) & 1


@lru_cache(maxsize=1 << 18)
def _mul_keys(k1: Key, k2: Key) -> tuple[int, Key]:
    f1, o1 = k1
    f2, o2 = k2
    sign = -1 if (word_parity(o1) and _factors_parity(f2)) else 1
    s, fs = _sort_factors(f1 + f2)
    return sign * s, (fs, o1 + o2)


@lru_cache(maxsize=1 << 16)
def _trace_key(k: Key) -> tuple[int, Key]:
    fs, outer = k
    s, cw = canonical_trace(outer)
    if not s:
        return 0, k
    s2, fs2 = _sort_factors(fs + (cw,))
    return s * s2, (fs2, ())


class TraceExpression:
    """Rational combination of canonical terms ``t(w1)...t(wr) * outer``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None) -> None:
        self.terms: dict[Key, object] = terms if terms is not None else {}

    # construction

    @classmethod
    def term(cls, coeff, factors: Iterable[Sequence[Letter]] = (), outer: Sequence[Letter] = ()) -> "TraceExpression":
        s, key = make_term(factors, outer)
        c = normalize_coeff(coeff) * s
        return cls({key: c} if c else {})

    @classmethod
    def scalar(cls, c) -> "TraceExpression":
        c = normalize_coeff(c)
        return cls({((), ()): c} if c else {})

    @classmethod
    def zero(cls) -> "TraceExpression":
        return cls({})

    # arithmetic

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TraceExpression.scalar(other)
        if not isinstance(other, TraceExpression):
            return NotImplemented
        out = dict(self.terms)
        _accumulate(out, other.terms, 1)
        return TraceExpression(out)

    __radd__ = __add__

    def __neg__(self) -> "TraceExpression":
        return TraceExpression({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TraceExpression.scalar(other)
        if not isinstance(other, TraceExpression):
            return NotImplemented
        out = dict(self.terms)
        _accumulate(out, other.terms, -1)
        return TraceExpression(out)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, r) -> "TraceExpression":
        r = normalize_coeff(r)
        if not r:
            return TraceExpression()
        return TraceExpression({k: normalize_coeff(v * r) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TraceExpression):
            return NotImplemented
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                s, k = _mul_keys(k1, k2)
                if not s:
                    continue
                v = out.get(k, 0) + (c1 * c2 if s > 0 else -(c1 * c2))
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return TraceExpression(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def trace(self) -> "TraceExpression":
        out: dict = {}
        for k, c in self.terms.items():
            s, k2 = _trace_key(k)
            if not s:
                continue
            v = out.get(k2, 0) + (c if s > 0 else -c)
            if v:
                out[k2] = v
            else:
                out.pop(k2, None)
        return TraceExpression(out)

    # queries

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TraceExpression.scalar(other)
        if not isinstance(other, TraceExpression):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_trace_element(self) -> bool:
        return all(not outer for (_, outer) in self.terms)

    @property
    def parity(self) -> int | None:
        ps = {(_factors_parity(fs) + word_parity(o)) & 1 for fs, o in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def letters(self) -> set[Letter]:
        out: set[Letter] = set()
        for fs, outer in self.terms:
            for w in fs:
                out.update(w)
            out.update(outer)
        return out

    def occurrences(self, letter: Letter) -> set[int]:
        """Degrees in ``letter`` over all terms."""
        return {
            sum(w.count(letter) for w in fs) + outer.count(letter)
            for fs, outer in self.terms
        }

    def is_multilinear_in(self, letters: Iterable[Letter]) -> bool:
        letters = set(letters)
        for fs, outer in self.terms:
            seen = [l for w in fs for l in w] + list(outer)
            if len(seen) != len(set(seen)) or set(seen) != letters or () in fs:
                return False
        return True

    def coefficient(self, other: "TraceExpression"):
        """Coefficient of the single-term ``other`` in ``self``."""
        if len(other.terms) != 1:
            raise ValueError("need a single-term expression")
        (k, c), = other.terms.items()
        return Fraction(self.terms.get(k, 0)) / Fraction(c)

    # substitution

    def substitute(self, mapping: Mapping[Letter, "TraceExpression"]) -> "TraceExpression":
        """Apply the trace-algebra homomorphism sending each letter in
        ``mapping`` to its image; the image must have the letter's parity."""
        images: dict[Letter, TraceExpression] = {}
        for letter, repl in mapping.items():
            if isinstance(repl, tuple) and len(repl) == 2 and isinstance(repl[0], int):
                repl = wordexpr((repl,))
            p = repl.parity
            if p is None:
                raise ParityMismatch(f"replacement for {letter_name(letter)} is not homogeneous")
            if repl and p != letter[0]:
                raise ParityMismatch(
                    f"replacement for {letter_name(letter)} has parity {p}, expected {letter[0]}"
                )
            images[letter] = repl
        word_cache: dict[Word, TraceExpression] = {}

        def image(word: Word) -> TraceExpression:
            got = word_cache.get(word)
            if got is not None:
                return got
            if not word:
                res = TraceExpression.scalar(1)
            elif len(word) == 1:
                res = images.get(word[0]) or (
                    TraceExpression({((), word): 1}) if word[0] not in images else TraceExpression()
                )
            else:
                res = image(word[:-1]) * image(word[-1:])
            word_cache[word] = res
            return res

        out = TraceExpression()
        for (fs, outer), c in self.terms.items():
            acc = TraceExpression.scalar(c)
            for w in fs:
                if not w:
                    acc = acc * TraceExpression({(((),), ()): 1})
                else:
                    acc = acc * image(w).trace()
                if not acc:
                    break
            if acc:
                acc = acc * image(outer)
            out = out + acc
        return out

    def relabel(self, mapping: Mapping[Letter, Letter]) -> "TraceExpression":
        return self.substitute({a: wordexpr((b,)) for a, b in mapping.items()})

    # output

    def __str__(self) -> str:
        return format_expression(self)

    def __repr__(self) -> str:
        return f"TraceExpression({self})"

    def to_sexpr(self) -> str:
        return to_sexpr(self)

    def to_json_terms(self) -> list[dict]:
        return [
            {
                "coeff": str(c),
                "traces": [[letter_name(l) for l in w] for w in fs],
                "outer": [letter_name(l) for l in outer],
            }
            for (fs, outer), c in self.terms.items()
        ]

    @classmethod
    def from_json_terms(cls, data: list[dict]) -> "TraceExpression":
        out = cls()
        for item in data:
            out = out + cls.term(
                Fraction(item["coeff"]),
                [parse_word(w) for w in item["traces"]],
                parse_word(item["outer"]),
            )
        return out


def _accumulate(out: dict, d: dict, sign: int) -> None:
    for k, v in d.items():
        w = out.get(k, 0) + (v if sign > 0 else -v)
        if w:
            out[k] = w
        else:
            out.pop(k, None)


def wordexpr(word: str | Sequence) -> TraceExpression:
    """The untraced monomial ``word``."""
    return TraceExpression({((), parse_word(word)): 1})


def tr(word: str | Sequence = ()) -> TraceExpression:
    """``t(word)``; the empty word gives ``t(1)``."""
    return TraceExpression.term(1, [parse_word(word)])


def t_one() -> TraceExpression:
    return TraceExpression({(((),), ()): 1})


def multiply(a: TraceExpression, b: TraceExpression) -> TraceExpression:
    return a * b


def substitute(expr: TraceExpression, var: Letter | str, replacement: TraceExpression) -> TraceExpression:
    if isinstance(var, str):
        var = parse_letter(var)
    return expr.substitute({var: replacement})


def _term_str(key: Key, c) -> str:
    fs, outer = key
    parts = []
    for w in fs:
        parts.append("tr(1)" if not w else f"tr({word_name(w)})")
    if outer:
        parts.append(word_name(outer))
    body = " ".join(parts)
    if not body:
        return str(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c} {body}"


def format_expression(expr: TraceExpression) -> str:
    if not expr.terms:
        return "0"
    out = ""
    for k, c in expr.terms.items():
        s = _term_str(k, c)
        if not out:
            out = s
        elif s.startswith("-"):
            out += " - " + s[1:]
        else:
            out += " + " + s
    return out


# S-expression format


def _term_sexpr(key: Key, c) -> str:
    fs, outer = key
    parts = ["*", str(c)]
    parts.extend("(t" + "".join(" " + letter_name(l) for l in w) + ")" for w in fs)
    parts.extend(letter_name(l) for l in outer)
    return "(" + " ".join(parts) + ")"


def to_sexpr(expr: TraceExpression) -> str:
    terms = [_term_sexpr(k, c) for k, c in expr.terms.items()]
    if len(terms) == 1:
        return terms[0]
    return "(+" + "".join(" " + t for t in terms) + ")"


def _sexpr_tokens(text: str) -> list[str]:
    return re.findall(r"\(|\)|[^\s()]+", text)


def _sexpr_tree(tokens: list[str]):
    stack: list[list] = [[]]
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) < 2:
                raise ValueError("unbalanced parentheses")
            node = stack.pop()
            stack[-1].append(node)
        else:
            stack[-1].append(tok)
    if len(stack) != 1 or len(stack[0]) != 1:
        raise ValueError("malformed s-expression")
    return stack[0][0]


def parse_sexpr(text: str) -> tuple[TraceExpression, list[int]]:
    """Parse ``(* c (t w) ... outer)`` or ``(+ term ...)``.

    Returns the canonical expression and, per input term, the sign picked
    up by normalization (0 when the term vanished)."""
    tree = _sexpr_tree(_sexpr_tokens(text))
    if not isinstance(tree, list) or not tree:
        raise ValueError("expected a parenthesized expression")
    items = tree[1:] if tree[0] == "+" else [tree]
    out = TraceExpression()
    signs = []
    for node in items:
        if not isinstance(node, list) or not node or node[0] != "*":
            raise ValueError(f"expected (* ...) term, got {node!r}")
        rest = node[1:]
        coeff = Fraction(1)
        if rest and isinstance(rest[0], str) and re.match(r"^-?\d+(/\d+)?$", rest[0]):
            coeff = Fraction(rest[0])
            rest = rest[1:]
        factors = []
        outer = []
        for piece in rest:
            if isinstance(piece, list):
                if not piece or piece[0] != "t":
                    raise ValueError(f"expected (t ...) factor, got {piece!r}")
                if outer:
                    raise ValueError("trace factors must precede the outer word")
                factors.append(parse_word(piece[1:]))
            else:
                outer.append(parse_letter(piece))
        s, key = make_term(factors, outer)
        signs.append(s)
        if s:
            out = out + TraceExpression({key: normalize_coeff(coeff * s)})
    return out, signs


# colorings and permutations


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    s = 1
    n = len(seq)
    for i in range(n):
        for j in range(i + 1, n):
            if seq[i] > seq[j]:
                s = -s
    return s


@dataclass(frozen=True)
class Coloring:
    """Colors of the points ``1..m`` (0 bosonic, 1 fermionic) and the letter
    each point evaluates to."""

    colors: tuple[int, ...]
    letters: tuple[Letter, ...]

    @classmethod
    def standard(cls, e: int, f: int) -> "Coloring":
        """``C_{e,f}``: points ``1..e`` are ``y_1..y_e``, point ``e+j`` is ``x_j``."""
        colors = (BOS,) * e + (FERM,) * f
        letters = tuple((BOS, i + 1) for i in range(e)) + tuple((FERM, j + 1) for j in range(f))
        return cls(colors, letters)

    @classmethod
    def labeled(cls, colors: Sequence[int]) -> "Coloring":
        """Point ``h`` evaluates to ``y_h`` or ``x_h`` by its color."""
        colors = tuple(colors)
        return cls(colors, tuple((c, h + 1) for h, c in enumerate(colors)))

    @property
    def m(self) -> int:
        return len(self.colors)

    def color(self, point: int) -> int:
        return self.colors[point - 1]

    def letter(self, point: int) -> Letter:
        return self.letters[point - 1]


def epsilon(word: Sequence[int], coloring: Coloring | Mapping[int, int]) -> int:
    """Sign of the permutation that sorts the fermionic subsequence of
    ``word``."""
    if isinstance(coloring, Coloring):
        ferm = [p for p in word if coloring.color(p)]
    else:
        ferm = [p for p in word if coloring[p]]
    return perm_sign(ferm)


def cycles_of(perm: Mapping[int, int] | Sequence[int]) -> list[list[int]]:
    """Canonical cycle display: each cycle starts at its least element and
    cycles are ordered by that element. Sequences are one-line notation on
    ``1..m``."""
    if not isinstance(perm, Mapping):
        perm = {i + 1: v for i, v in enumerate(perm)}
    seen: set[int] = set()
    out = []
    for start in sorted(perm):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        out.append(cyc)
    return out


def perm_from_cycles(cycles: Iterable[Sequence[int]]) -> dict[int, int]:
    perm: dict[int, int] = {}
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            if a in perm:
                raise ValueError(f"point {a} appears twice")
            perm[a] = b
    return perm


def compose(s: Mapping[int, int], t: Mapping[int, int]) -> dict[int, int]:
    """``s o t``: apply ``t`` first. Points missing from a map are fixed."""
    pts = set(s) | set(t)
    return {p: s.get(t.get(p, p), t.get(p, p)) for p in pts}


def inverse(s: Mapping[int, int]) -> dict[int, int]:
    return {v: k for k, v in s.items()}


def tau_pstring(
    cycles: Sequence[Sequence[int]],
    tail: Sequence[int],
    letter: Mapping[int, Letter] | Coloring,
) -> TraceExpression:
    """Colored evaluation of a (partial) p-string ``(w1)...(wr) tail``."""
    if isinstance(letter, Coloring):
        col = letter
        lmap = {p: col.letter(p) for p in range(1, col.m + 1)}
    else:
        lmap = dict(letter)
    flat = [p for c in cycles for p in c] + list(tail)
    sign = perm_sign([p for p in flat if lmap[p][0] == FERM])
    return TraceExpression.term(
        sign, [[lmap[p] for p in c] for c in cycles], [lmap[p] for p in tail]
    )


def tau_string(points: Sequence[int], letter: Mapping[int, Letter] | Coloring) -> TraceExpression:
    """Colored evaluation of a plain string: signed untraced word."""
    return tau_pstring([], points, letter)


@dataclass(frozen=True)
class ColoredPermutation:
    """Permutation of ``1..m`` in one-line notation together with a coloring."""

    perm: tuple[int, ...]
    coloring: Coloring

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError(f"{self.perm} is not a permutation of 1..m")
        if self.coloring.m != len(self.perm):
            raise ValueError("coloring size differs from permutation size")

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], coloring: Coloring) -> "ColoredPermutation":
        perm = perm_from_cycles(cycles)
        m = coloring.m
        return cls(tuple(perm.get(i, i) for i in range(1, m + 1)), coloring)

    @property
    def m(self) -> int:
        return len(self.perm)

    def as_map(self) -> dict[int, int]:
        return {i + 1: v for i, v in enumerate(self.perm)}

    def lambda_string(self) -> list[list[int]]:
        return cycles_of(self.perm)

    def mu_string(self) -> tuple[list[list[int]], list[int]]:
        """Cycles of ``lambda`` without the one through ``m``, and that cycle
        rotated to end at ``m`` with ``m`` dropped."""
        last = self.m
        cyc = []
        tail: list[int] = []
        for c in self.lambda_string():
            if last in c:
                k = c.index(last)
                rot = c[k + 1:] + c[:k + 1]
                tail = rot[:-1]
            else:
                cyc.append(c)
        return cyc, tail

    def sign(self) -> int:
        return perm_sign(self.perm)

    def __str__(self) -> str:
        return "".join("(" + ",".join(map(str, c)) + ")" for c in self.lambda_string())


def encode_phi(sigma: ColoredPermutation) -> TraceExpression:
    """Trace monomial of the canonical p-string, signed by the fermionic
    reordering."""
    return tau_pstring(sigma.lambda_string(), (), sigma.coloring)


def encode_psi(sigma: ColoredPermutation) -> TraceExpression:
    """Equivariant monomial: the cycle through the last point becomes the
    outer word with that point removed."""
    cyc, tail = sigma.mu_string()
    return tau_pstring(cyc, tail, sigma.coloring)


def encode_from_display(cycles: Sequence[Sequence[int]], coloring: Coloring) -> TraceExpression:
    """Encoding computed from an arbitrary cycle display."""
    return tau_pstring(cycles, (), coloring)


def decode(expr: TraceExpression, coloring: Coloring, psi: bool = False) -> tuple[ColoredPermutation, Fraction]:
    """Invert the encoding on a single multilinear term.

    With ``psi`` the last point of ``coloring`` is the stripped one and the
    outer word closes its cycle. Returns ``(sigma, c)`` with
    ``expr == c * encode(sigma)``."""
    if len(expr.terms) != 1:
        raise NotMultilinear("decode needs a single term")
    (key, coeff), = expr.terms.items()
    fs, outer = key
    m = coloring.m
    point = {coloring.letter(p): p for p in range(1, m + 1)}
    expected = set(range(1, m + 1)) - ({m} if psi else set())
    cycles = []
    used = []
    for w in fs:
        if not w:
            raise NotMultilinear("t(1) factor")
        try:
            c = [point[l] for l in w]
        except KeyError as exc:
            raise NotMultilinear(f"letter {exc} outside the coloring") from None
        cycles.append(c)
        used.extend(c)
    if outer and not psi:
        raise NotMultilinear("outer word present; decode with psi=True")
    if psi:
        try:
            tail = [point[l] for l in outer]
        except KeyError as exc:
            raise NotMultilinear(f"letter {exc} outside the coloring") from None
        used.extend(tail)
        cycles.append(tail + [m])
    if sorted(used) != sorted(expected) or len(used) != len(set(used)):
        raise NotMultilinear("term is not multilinear in the colored letters")
    sigma = ColoredPermutation.from_cycles(cycles, coloring)
    enc = encode_psi(sigma) if psi else encode_phi(sigma)
    (ekey, ec), = enc.terms.items()
    assert ekey == key
    return sigma, Fraction(coeff) / Fraction(ec)


def relabel_symmetry_check(
    expr: TraceExpression, alpha: Sequence[int], beta: Sequence[int], e: int, f: int
) -> bool:
    """Check ``Phi_{tau sigma tau^-1} = sgn(beta) * Phi_sigma`` relabelled by
    ``y_i -> y_alpha(i)``, ``x_j -> x_beta(j)``, extended linearly."""
    col = Coloring.standard(e, f)
    tau = {i + 1: a for i, a in enumerate(alpha)}
    tau.update({e + j + 1: e + b for j, b in enumerate(beta)})
    lhs = TraceExpression()
    for key, c in expr.terms.items():
        sigma, s = decode(TraceExpression({key: c}), col)
        conj = compose(compose(tau, sigma.as_map()), inverse(tau))
        cp = ColoredPermutation(tuple(conj[i] for i in range(1, e + f + 1)), col)
        lhs = lhs + encode_phi(cp).scale(s)
    mapping = {(BOS, i + 1): (BOS, a) for i, a in enumerate(alpha)}
    mapping.update({(FERM, j + 1): (FERM, b) for j, b in enumerate(beta)})
    rhs = expr.relabel(mapping).scale(perm_sign(beta))
    return lhs == rhs


def all_permutations(m: int) -> Iterable[tuple[int, ...]]:
    """``S_m`` in lexicographic one-line order."""
    return itertools.permutations(range(1, m + 1))


def multilinear_basis_phi(e: int, f: int) -> list[TraceExpression]:
    col = Coloring.standard(e, f)
    return [encode_phi(ColoredPermutation(p, col)) for p in all_permutations(e + f)]


def expression_to_json(expr: TraceExpression, **meta) -> str:
    return json.dumps({**meta, "terms": expr.to_json_terms()})
