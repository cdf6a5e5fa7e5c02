"""Square matrices over the supercommutative algebra.

The scalar matrices sit in even degree, so matrix arithmetic is ordinary
arithmetic with supercommutative entry products; no extra signs appear at
the matrix level.
"""

from __future__ import annotations

import json
from typing import Sequence

from ._backend import poly_mul
from .superalg import (
    BOSONIC,
    FERMIONIC,
    Registry,
    RegistryMismatch,
    SuperAlgebraError,
    SuperPolynomial,
    accumulate,
    normalize_coeff,
)


class SizeMismatch(SuperAlgebraError):
    pass


class LabelReused(SuperAlgebraError):
    pass


EVEN, ODD, MIXED = "even", "odd", "mixed"


class SuperMatrix:
    """n x n grid of :class:`SuperPolynomial` entries sharing one registry."""

    __slots__ = ("registry", "n", "_rows")

    def __init__(self, registry: Registry, rows: Sequence[Sequence[SuperPolynomial | dict]]):
        self.registry = registry
        self.n = len(rows)
        grid = []
        for row in rows:
            if len(row) != self.n:
                raise SizeMismatch("matrix must be square")
            out = []
            for e in row:
                if isinstance(e, SuperPolynomial):
                    if e.registry is not registry:
                        raise RegistryMismatch("entry from a different registry")
                    out.append(e.terms)
                else:
                    out.append(e)
            grid.append(out)
        self._rows = grid

    @classmethod
    def _raw(cls, registry: Registry, grid: list[list[dict]]) -> "SuperMatrix":
        m = cls.__new__(cls)
        m.registry = registry
        m.n = len(grid)
        m._rows = grid
        return m

    @classmethod
    def identity(cls, registry: Registry, n: int) -> "SuperMatrix":
        return cls._raw(
            registry, [[{(0, 0): 1} if i == j else {} for j in range(n)] for i in range(n)]
        )

    @classmethod
    def zeros(cls, registry: Registry, n: int) -> "SuperMatrix":
        return cls._raw(registry, [[{} for _ in range(n)] for _ in range(n)])

    @classmethod
    def scalar(cls, value: SuperPolynomial, n: int) -> "SuperMatrix":
        return cls._raw(
            value.registry,
            [[dict(value.terms) if i == j else {} for j in range(n)] for i in range(n)],
        )

    def entry(self, i: int, j: int) -> SuperPolynomial:
        return SuperPolynomial(self.registry, self._rows[i][j])

    def entries(self) -> list[list[SuperPolynomial]]:
        return [[SuperPolynomial(self.registry, e) for e in row] for row in self._rows]

    # parity

    @property
    def parity(self) -> str:
        seen = set()
        for row in self._rows:
            for e in row:
                for _, mask in e:
                    seen.add(mask.bit_count() & 1)
                    if len(seen) > 1:
                        return MIXED
        return ODD if seen == {1} else EVEN

    @property
    def degree(self) -> int | None:
        p = self.parity
        return None if p == MIXED else (1 if p == ODD else 0)

    # arithmetic

    def _check(self, other: "SuperMatrix") -> None:
        if not isinstance(other, SuperMatrix):
            raise TypeError("expected a SuperMatrix")
        if other.registry is not self.registry:
            raise RegistryMismatch("matrices come from different registries")
        if other.n != self.n:
            raise SizeMismatch(f"sizes {self.n} and {other.n} differ")

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._check(other)
        grid = []
        for ra, rb in zip(self._rows, other._rows):
            row = []
            for a, b in zip(ra, rb):
                out = dict(a)
                accumulate(out, b)
                row.append(out)
            grid.append(row)
        return SuperMatrix._raw(self.registry, grid)

    def __neg__(self) -> "SuperMatrix":
        return self.scale(-1)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + (-other)

    def scale(self, r) -> "SuperMatrix":
        r = normalize_coeff(r)
        if not r:
            return SuperMatrix.zeros(self.registry, self.n)
        return SuperMatrix._raw(
            self.registry,
            [[{k: v * r for k, v in e.items()} for e in row] for row in self._rows],
        )

    def lmul_scalar(self, s: SuperPolynomial) -> "SuperMatrix":
        """``s * A`` with the scalar on the left (order matters for odd s)."""
        if s.registry is not self.registry:
            raise RegistryMismatch("scalar from a different registry")
        guard = self.registry.guard
        return SuperMatrix._raw(
            self.registry,
            [[poly_mul(s.terms, e, guard) for e in row] for row in self._rows],
        )

    def rmul_scalar(self, s: SuperPolynomial) -> "SuperMatrix":
        if s.registry is not self.registry:
            raise RegistryMismatch("scalar from a different registry")
        guard = self.registry.guard
        return SuperMatrix._raw(
            self.registry,
            [[poly_mul(e, s.terms, guard) for e in row] for row in self._rows],
        )

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._check(other)
        n = self.n
        guard = self.registry.guard
        cols = [[other._rows[k][j] for k in range(n)] for j in range(n)]
        grid = []
        for row in self._rows:
            out_row = []
            for col in cols:
                acc: dict = {}
                for a, b in zip(row, col):
                    if a and b:
                        accumulate(acc, poly_mul(a, b, guard))
                out_row.append(acc)
            grid.append(out_row)
        return SuperMatrix._raw(self.registry, grid)

    __mul__ = __matmul__

    def __pow__(self, k: int) -> "SuperMatrix":
        return matpower(self, k)

    def trace(self) -> SuperPolynomial:
        acc: dict = {}
        for i in range(self.n):
            accumulate(acc, self._rows[i][i])
        return SuperPolynomial(self.registry, acc)

    def is_zero(self) -> bool:
        return not any(e for row in self._rows for e in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (
            self.registry is other.registry
            and self.n == other.n
            and self._rows == other._rows
        )

    __hash__ = None  # type: ignore[assignment]

    def nnz_terms(self) -> int:
        return sum(len(e) for row in self._rows for e in row)

    # output

    def __str__(self) -> str:
        return format_matrix(self)

    def __repr__(self) -> str:
        return f"SuperMatrix(n={self.n}, parity={self.parity})"

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "parity": self.parity,
                "entries": [[str(e) for e in row] for row in self.entries()],
            }
        )

    @classmethod
    def from_json(cls, registry: Registry, text: str) -> "SuperMatrix":
        data = json.loads(text)
        rows = [[registry.parse(s) for s in row] for row in data["entries"]]
        m = cls(registry, rows)
        if m.n != data["n"]:
            raise SizeMismatch("declared size does not match entries")
        return m


def generic_matrix(
    registry: Registry, kind: str, label: str, n: int, traceless: bool = False
) -> SuperMatrix:
    """Matrix of fresh generators ``label.h.k``; with ``traceless`` the last
    diagonal entry is minus the sum of the others."""
    if kind not in (BOSONIC, FERMIONIC):
        raise ValueError(f"unknown kind {kind!r}")
    if n < 1:
        raise ValueError("size must be positive")
    if label in registry.groups:
        raise LabelReused(f"matrix label {label!r} already used")
    registry.groups.add(label)
    rows: list[list] = [[None] * n for _ in range(n)]
    for h in range(n):
        for k in range(n):
            if traceless and h == k == n - 1:
                continue
            rows[h][k] = registry.var(registry.allocate(kind, f"{label}.{h + 1}.{k + 1}"))
    if traceless:
        last = registry.zero()
        for i in range(n - 1):
            last = last - rows[i][i]
        rows[n - 1][n - 1] = last
    return SuperMatrix(registry, rows)


def matmul(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    return a @ b


def matadd(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    return a + b


def matscale(a: SuperMatrix, r) -> SuperMatrix:
    return a.scale(r)


def matpower(a: SuperMatrix, k: int) -> SuperMatrix:
    if k < 0:
        raise ValueError("negative power")
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else result @ base
        k >>= 1
        if k:
            base = base @ base
    return result if result is not None else SuperMatrix.identity(a.registry, a.n)


def trace(a: SuperMatrix) -> SuperPolynomial:
    return a.trace()


def format_matrix(a: SuperMatrix) -> str:
    cells = [[str(e) for e in row] for row in a.entries()]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[ " + "  ".join(c.ljust(width) for c in row) + " ]" for row in cells)


def dynkin_relation_check(n: int) -> SuperMatrix:
    """Residual ``n xi^(2n-1) - sum_{i<n} xi^(2i) t_(n-i)`` for a generic odd
    matrix ``xi`` with ``t_i = tr(xi^(2i-1))``; zero when the relation holds."""
    if n < 1:
        raise ValueError("n must be >= 1")
    reg = Registry()
    xi = generic_matrix(reg, FERMIONIC, "X", n)
    powers = [SuperMatrix.identity(reg, n)]
    for _ in range(2 * n - 1):
        powers.append(powers[-1] @ xi)
    t = {i: powers[2 * i - 1].trace() for i in range(1, n + 1)}
    residual = powers[2 * n - 1].scale(n)
    for i in range(n):
        residual = residual - powers[2 * i].rmul_scalar(t[n - i])
    return residual
