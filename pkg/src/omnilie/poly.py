"""Exact multivariate polynomials over the rationals.

A :class:`Poly` is a finite map from exponent tuples to nonzero rational
coefficients.  Coefficients with denominator 1 are stored as plain ``int``
(they are still exact rationals) because integer arithmetic is much faster
than :class:`fractions.Fraction` and most of the calculus stays integral.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import InputError


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def as_rational(value) -> int | Fraction:
    """Coerce ints, Fractions and rational strings; reject floats."""
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return _norm(value)
    if isinstance(value, Rational):
        return _norm(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        try:
            return _norm(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {value!r}") from exc
    raise InputError(f"not a rational number: {value!r}")


@dataclass(frozen=True)
class Patch:
    """A coordinate patch: ``dim_m`` base coordinates and fiber rank ``rank_e``."""

    dim_m: int
    rank_e: int
    var_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.dim_m < 0:
            raise InputError("dim_m must be non-negative")
        if self.rank_e < 1:
            raise InputError("rank_e must be at least 1")
        names = tuple(self.var_names) or tuple(f"x{i + 1}" for i in range(self.dim_m))
        if len(names) != self.dim_m:
            raise InputError(f"expected {self.dim_m} variable names, got {len(names)}")
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names: {names}")
        object.__setattr__(self, "var_names", names)

    def zero(self) -> "Poly":
        return Poly.zero(self.dim_m)

    def const(self, c) -> "Poly":
        return Poly.const(c, self.dim_m)

    def var(self, i: int) -> "Poly":
        return Poly.var(i, self.dim_m)


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class Poly:
    """Immutable polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None, nvars: int = 0):
        clean = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise InputError(f"exponent {exp} does not have {nvars} entries")
                c = as_rational(c)
                if c:
                    clean[tuple(exp)] = c
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Poly":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw({}, nvars)

    @classmethod
    def const(cls, c, nvars: int) -> "Poly":
        c = as_rational(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        if not 0 <= i < nvars:
            raise InputError(f"variable index {i} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw({tuple(exp): 1}, nvars)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "Poly":
        exp = tuple(exp)
        return cls({exp: coeff}, len(exp))

    # -- inspection -------------------------------------------------------
    def terms(self) -> list[tuple[tuple[int, ...], int | Fraction]]:
        """Terms in canonical graded-lex order, leading term first."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def coeff(self, exp: Sequence[int]):
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self.nvars}

    def constant_value(self):
        return self._terms.get((0,) * self.nvars, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def __len__(self):
        return len(self._terms)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise InputError(f"patch mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        return Poly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return Poly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_rational(other)
            if not c:
                return Poly.zero(self.nvars)
            return Poly._raw({e: _norm(v * c) for e, v in self._terms.items()}, self.nvars)
        other = self._coerce(other)
        if not self._terms or not other._terms:
            return Poly.zero(self.nvars)
        out: dict = {}
        get = out.get
        items2 = list(other._terms.items())
        for e1, c1 in self._terms.items():
            for e2, c2 in items2:
                e = tuple([a + b for a, b in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
        return Poly._raw({e: _norm(c) for e, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InputError("exponent must be a natural number")
        result = Poly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, c):
        c = as_rational(c)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * _norm(Fraction(1) / c)

    # -- calculus ---------------------------------------------------------
    def diff(self, i: int) -> "Poly":
        """Formal partial derivative with respect to variable ``i`` (0-based)."""
        if not 0 <= i < self.nvars:
            raise InputError(f"coordinate index {i} out of range for {self.nvars} variables")
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Poly._raw(out, self.nvars)

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> int | Fraction:
        point = tuple(point)
        if len(point) != self.nvars:
            raise InputError(f"point has {len(point)} coordinates, expected {self.nvars}")
        vals = [as_rational(v) for v in point]
        total = 0
        for e, c in self._terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t = t * v**k
            total += t
        return _norm(Fraction(total)) if not isinstance(total, int) else total

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({(0,) * self.nvars: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else [f"x{i + 1}" for i in range(self.nvars)]
        if len(names) != self.nvars:
            raise InputError("wrong number of variable names")
        if not self._terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.terms()):
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if idx == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r}, nvars={self.nvars})"


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise InputError(f"unknown ring operation {op!r}")


def partial(p: Poly, i: int) -> Poly:
    return p.diff(i)


def evaluate(p: Poly, point: Sequence) -> int | Fraction:
    return p.evaluate(point)


def monomials_up_to(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= ``degree`` in graded-lex ascending order."""
    out: list[tuple[int, ...]] = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, slots - 1)

    rec([], degree, nvars)
    return sorted(set(out), key=_grlex_key)


class PolyMatrix:
    """Immutable ``rows x cols`` matrix of :class:`Poly` entries."""

    __slots__ = ("rows", "cols", "nvars", "_e")

    def __init__(self, entries: Iterable[Iterable[Poly]], rows: int | None = None,
                 cols: int | None = None, nvars: int | None = None):
        e = tuple(tuple(r) for r in entries)
        r = len(e) if rows is None else rows
        c = (len(e[0]) if e else 0) if cols is None else cols
        if len(e) != r or any(len(row) != c for row in e):
            raise InputError(f"matrix entries do not form a {r}x{c} array")
        if nvars is None:
            nv = {p.nvars for row in e for p in row}
            if len(nv) > 1:
                raise InputError("matrix entries live on different patches")
            nvars = nv.pop() if nv else 0
        elif any(p.nvars != nvars for row in e for p in row):
            raise InputError("matrix entries live on different patches")
        self.rows, self.cols, self.nvars, self._e = r, c, nvars, e

    @classmethod
    def zeros(cls, rows: int, cols: int, nvars: int) -> "PolyMatrix":
        z = Poly.zero(nvars)
        return cls([[z] * cols for _ in range(rows)], rows, cols, nvars)

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        one, z = Poly.const(1, nvars), Poly.zero(nvars)
        return cls([[one if i == j else z for j in range(n)] for i in range(n)], n, n, nvars)

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int, nvars: int) -> "PolyMatrix":
        one, z = Poly.const(1, nvars), Poly.zero(nvars)
        return cls([[one if (a, b) == (i, j) else z for b in range(cols)] for a in range(rows)],
                   rows, cols, nvars)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple[Poly, ...]:
        return self._e[i]

    def col(self, j: int) -> tuple[Poly, ...]:
        return tuple(r[j] for r in self._e)

    def tolist(self) -> list[list[Poly]]:
        return [list(r) for r in self._e]

    def _same_shape(self, other: "PolyMatrix"):
        if self.shape != other.shape or self.nvars != other.nvars:
            raise InputError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._e, other._e)],
                          self.rows, self.cols, self.nvars)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self._e, other._e)],
                          self.rows, self.cols, self.nvars)

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix([[-a for a in r] for r in self._e], self.rows, self.cols, self.nvars)

    def scale(self, f) -> "PolyMatrix":
        return PolyMatrix([[a * f for a in r] for r in self._e], self.rows, self.cols, self.nvars)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        z = Poly.zero(self.nvars)
        out = []
        ocols = [other.col(j) for j in range(other.cols)]
        for r in self._e:
            out.append([_dot(r, c, z) for c in ocols])
        return PolyMatrix(out, self.rows, other.cols, self.nvars)

    def apply(self, vec: Sequence[Poly]) -> tuple[Poly, ...]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise InputError(f"cannot apply {self.shape} matrix to a vector of length {len(vec)}")
        z = Poly.zero(self.nvars)
        return tuple(_dot(r, vec, z) for r in self._e)

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix([list(self.col(j)) for j in range(self.cols)], self.cols, self.rows,
                          self.nvars)

    def diff(self, i: int) -> "PolyMatrix":
        return PolyMatrix([[a.diff(i) for a in r] for r in self._e], self.rows, self.cols,
                          self.nvars)

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self._e for a in r)

    def is_antisymmetric(self) -> bool:
        return self.rows == self.cols and all(
            (self._e[i][j] + self._e[j][i]).is_zero()
            for i in range(self.rows) for j in range(i, self.cols))

    def evaluate(self, point) -> list[list]:
        return [[a.evaluate(point) for a in r] for r in self._e]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.nvars == other.nvars and self._e == other._e

    def __hash__(self):
        return hash((self.shape, self._e))

    def __repr__(self):
        return f"PolyMatrix({[[str(a) for a in r] for r in self._e]})"


def _dot(a: Sequence[Poly], b: Sequence[Poly], zero: Poly) -> Poly:
    acc = zero
    for x, y in zip(a, b):
        if x._terms and y._terms:
            acc = acc + x * y
    return acc


def det(rows: list[list]) -> int | Fraction:
    """Exact determinant of a square matrix of rationals (fraction-free Bareiss)."""
    m = [[Fraction(v) for v in r] for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise InputError("determinant of a non-square matrix")
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return _norm(sign * m[n - 1][n - 1]) if n else 1
