"""Sections of E, the gauge algebroid DE and the jet bundle JE on a trivialized patch.

Everything is written in the global frame ``e_1..e_k`` of ``E = M x R^k`` and the
coordinate fields ``d/dx_1..d/dx_n``:

* a derivation ``d = (Phi, x)`` acts by ``d(u) = Phi u + x(u)``;
* a jet ``mu = (y, w)`` has a Hom(TM, E) part ``y`` (k x n) and a value ``w``;
* the E-valued pairing is ``<mu, d>_E = Phi w + y x``.

Indices are 0-based throughout the Python API.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import InputError
from .poly import Patch, Poly, PolyMatrix


@dataclass(frozen=True)
class _Vec:
    comps: tuple[Poly, ...]
    nvars: int

    def __post_init__(self):
        comps = tuple(self.comps)
        if any(c.nvars != self.nvars for c in comps):
            raise InputError("vector components live on different patches")
        object.__setattr__(self, "comps", comps)

    @classmethod
    def of(cls, comps: Sequence[Poly], nvars: int | None = None):
        comps = tuple(comps)
        if nvars is None:
            if not comps:
                raise InputError("cannot infer the patch of an empty vector")
            nvars = comps[0].nvars
        return cls(comps, nvars)

    @classmethod
    def zero(cls, size: int, nvars: int):
        return cls((Poly.zero(nvars),) * size, nvars)

    @classmethod
    def basis(cls, size: int, i: int, nvars: int):
        return cls(tuple(Poly.const(1 if j == i else 0, nvars) for j in range(size)), nvars)

    def __len__(self):
        return len(self.comps)

    def __iter__(self) -> Iterator[Poly]:
        return iter(self.comps)

    def __getitem__(self, i) -> Poly:
        return self.comps[i]

    def _check(self, other):
        if type(other) is not type(self) or len(other) != len(self) or other.nvars != self.nvars:
            raise InputError(f"shape mismatch between {self!r} and {other!r}")

    def __add__(self, other):
        self._check(other)
        return type(self)(tuple(a + b for a, b in zip(self.comps, other.comps)), self.nvars)

    def __sub__(self, other):
        self._check(other)
        return type(self)(tuple(a - b for a, b in zip(self.comps, other.comps)), self.nvars)

    def __neg__(self):
        return type(self)(tuple(-a for a in self.comps), self.nvars)

    def scale(self, f) -> "_Vec":
        return type(self)(tuple(a * f for a in self.comps), self.nvars)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.comps)

    def evaluate(self, point) -> list:
        return [a.evaluate(point) for a in self.comps]

    def __repr__(self):
        return f"{type(self).__name__}({[str(a) for a in self.comps]})"


class SectionE(_Vec):
    """Section of E (or, by role, of E*): k polynomial components in the frame."""


class VectorField(_Vec):
    """Vector field ``sum_i comps[i] d/dx_i``."""

    def apply(self, f: Poly) -> Poly:
        if f.nvars != self.nvars:
            raise InputError("vector field and function live on different patches")
        acc = Poly.zero(self.nvars)
        for i, xi in enumerate(self.comps):
            if not xi.is_zero():
                acc = acc + xi * f.diff(i)
        return acc

    def bracket(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(tuple(self.apply(b) - other.apply(a)
                                 for a, b in zip(self.comps, other.comps)), self.nvars)


def vf_apply_matrix(x: VectorField, m: PolyMatrix) -> PolyMatrix:
    """Differentiate every entry of ``m`` along ``x``."""
    return PolyMatrix([[x.apply(a) for a in m.row(i)] for i in range(m.rows)],
                      m.rows, m.cols, m.nvars)


def vf_apply_section(x: VectorField, u: _Vec):
    return type(u)(tuple(x.apply(a) for a in u.comps), u.nvars)


@dataclass(frozen=True)
class DerivationDE:
    """Section ``(Phi, x)`` of DE = gl(E) + TM."""

    endo: PolyMatrix
    base: VectorField

    def __post_init__(self):
        k = self.endo.rows
        if self.endo.cols != k:
            raise InputError(f"endomorphism part must be square, got {self.endo.shape}")
        if self.endo.nvars != self.base.nvars:
            raise InputError("derivation parts live on different patches")

    @property
    def rank(self) -> int:
        return self.endo.rows

    @property
    def nvars(self) -> int:
        return self.base.nvars

    @classmethod
    def zero(cls, rank: int, nvars: int) -> "DerivationDE":
        return cls(PolyMatrix.zeros(rank, rank, nvars), VectorField.zero(nvars, nvars))

    @classmethod
    def from_endo(cls, m: PolyMatrix) -> "DerivationDE":
        return cls(m, VectorField.zero(m.nvars, m.nvars))

    @classmethod
    def from_field(cls, x: VectorField, rank: int) -> "DerivationDE":
        return cls(PolyMatrix.zeros(rank, rank, x.nvars), x)

    def _check(self, other: "DerivationDE"):
        if self.rank != other.rank or self.nvars != other.nvars:
            raise InputError("derivations over different bundles")

    def __add__(self, other: "DerivationDE") -> "DerivationDE":
        self._check(other)
        return DerivationDE(self.endo + other.endo, self.base + other.base)

    def __sub__(self, other: "DerivationDE") -> "DerivationDE":
        self._check(other)
        return DerivationDE(self.endo - other.endo, self.base - other.base)

    def __neg__(self) -> "DerivationDE":
        return DerivationDE(-self.endo, -self.base)

    def scale(self, f) -> "DerivationDE":
        return DerivationDE(self.endo.scale(f), self.base.scale(f))

    def is_zero(self) -> bool:
        return self.endo.is_zero() and self.base.is_zero()

    def __call__(self, u: SectionE) -> SectionE:
        return apply_derivation(self, u)


@dataclass(frozen=True)
class JetSection:
    """Section ``(y, w)`` of JE = Hom(TM, E) + E; ``w`` is the projection p(mu)."""

    hom: PolyMatrix
    val: SectionE

    def __post_init__(self):
        if self.hom.rows != len(self.val):
            raise InputError(f"jet hom part {self.hom.shape} does not match rank {len(self.val)}")
        if self.hom.cols != self.val.nvars or self.hom.nvars != self.val.nvars:
            raise InputError("jet hom part must be k x n on the same patch")

    @property
    def rank(self) -> int:
        return len(self.val)

    @property
    def nvars(self) -> int:
        return self.val.nvars

    @classmethod
    def zero(cls, rank: int, nvars: int) -> "JetSection":
        return cls(PolyMatrix.zeros(rank, nvars, nvars), SectionE.zero(rank, nvars))

    @classmethod
    def from_hom(cls, y: PolyMatrix) -> "JetSection":
        """The embedding e: Hom(TM, E) -> JE."""
        return cls(y, SectionE.zero(y.rows, y.nvars))

    def _check(self, other: "JetSection"):
        if self.rank != other.rank or self.nvars != other.nvars:
            raise InputError("jets over different bundles")

    def __add__(self, other: "JetSection") -> "JetSection":
        self._check(other)
        return JetSection(self.hom + other.hom, self.val + other.val)

    def __sub__(self, other: "JetSection") -> "JetSection":
        self._check(other)
        return JetSection(self.hom - other.hom, self.val - other.val)

    def __neg__(self) -> "JetSection":
        return JetSection(-self.hom, -self.val)

    def scale(self, f) -> "JetSection":
        return JetSection(self.hom.scale(f), self.val.scale(f))

    def is_zero(self) -> bool:
        return self.hom.is_zero() and self.val.is_zero()


def _same_bundle(d: DerivationDE, u: _Vec):
    if d.rank != len(u) or d.nvars != u.nvars:
        raise InputError(f"derivation of rank {d.rank} cannot act on a section of length {len(u)}")


def apply_derivation(d: DerivationDE, u: SectionE) -> SectionE:
    """``d(u) = Phi u + x(u)``."""
    _same_bundle(d, u)
    phi_u = d.endo.apply(u.comps)
    return SectionE(tuple(a + d.base.apply(b) for a, b in zip(phi_u, u.comps)), u.nvars)


def bracket_de(d1: DerivationDE, d2: DerivationDE) -> DerivationDE:
    """Commutator of two derivations, in components."""
    d1._check(d2)
    endo = (d1.endo @ d2.endo - d2.endo @ d1.endo
            + vf_apply_matrix(d1.base, d2.endo) - vf_apply_matrix(d2.base, d1.endo))
    return DerivationDE(endo, d1.base.bracket(d2.base))


def anchor(d: DerivationDE) -> VectorField:
    return d.base


def jacobian(u: _Vec) -> PolyMatrix:
    n = u.nvars
    return PolyMatrix([[a.diff(j) for j in range(n)] for a in u.comps], len(u), n, n)


def jet_lift(u: SectionE) -> JetSection:
    """The canonical jet ``[u] = (Jac u, u)``."""
    return JetSection(jacobian(u), SectionE(u.comps, u.nvars))


def tensor_jet(omega: Sequence[Poly], u: SectionE) -> JetSection:
    """``omega (x) u`` embedded in JE (zero value part)."""
    n = u.nvars
    if len(omega) != n:
        raise InputError(f"1-form has {len(omega)} components, expected {n}")
    return JetSection.from_hom(PolyMatrix([[a * w for w in omega] for a in u.comps],
                                          len(u), n, n))


def pairing_e(mu: JetSection, d: DerivationDE) -> SectionE:
    """E-valued pairing ``<mu, d>_E = Phi p(mu) + y(alpha(d))``."""
    if mu.rank != d.rank or mu.nvars != d.nvars:
        raise InputError("jet and derivation belong to different bundles")
    a = d.endo.apply(mu.val.comps)
    b = mu.hom.apply(d.base.comps)
    return SectionE(tuple(p + q for p, q in zip(a, b)), mu.nvars)


def lie_derivative(d: DerivationDE, mu: JetSection) -> JetSection:
    """Lie derivative of a jet along a derivation.

    Closed form: hom column j is ``Phi y_j + x(y_j) + (d_j Phi) w + sum_i (d_j x^i) y_i``
    and the value is ``d(w)``.  Tests hold it to the defining pairing identity.
    """
    if mu.rank != d.rank or mu.nvars != d.nvars:
        raise InputError("jet and derivation belong to different bundles")
    k, n = mu.rank, mu.nvars
    w = mu.val.comps
    phi, x = d.endo, d.base
    cols = []
    for j in range(n):
        yj = mu.hom.col(j)
        c = list(phi.apply(yj))
        dphi_w = phi.diff(j).apply(w)
        for a in range(k):
            acc = c[a] + x.apply(yj[a]) + dphi_w[a]
            for i in range(n):
                dxi = x.comps[i].diff(j)
                if not dxi.is_zero():
                    acc = acc + dxi * mu.hom[a, i]
            c[a] = acc
        cols.append(c)
    hom = PolyMatrix([[cols[j][a] for j in range(n)] for a in range(k)], k, n, n)
    return JetSection(hom, apply_derivation(d, mu.val))


def dual_operator(d: DerivationDE) -> DerivationDE:
    """The same derivation seen on E*: ``(-Phi^T, x)``."""
    return DerivationDE(-d.endo.T, d.base)


def apply_dual(d: DerivationDE, phi: SectionE) -> SectionE:
    """Action of ``d`` on a section of E* through :func:`dual_operator`."""
    return apply_derivation(dual_operator(d), phi)


def dot(u: Sequence[Poly], v: Sequence[Poly]) -> Poly:
    if len(u) != len(v):
        raise InputError("pairing of vectors of different length")
    if not u:
        raise InputError("cannot pair empty vectors")
    acc = Poly.zero(u[0].nvars)
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


def pairing_tstar(mu: JetSection, sigma: JetSection) -> PolyMatrix:
    """T*M-valued pairing of a jet of E with a jet of E*, as a 1 x n row."""
    if mu.rank != sigma.rank or mu.nvars != sigma.nvars:
        raise InputError("jets of E and E* must have equal rank on the same patch")
    n = mu.nvars
    row = [dot(mu.hom.col(j), sigma.val.comps) + dot(mu.val.comps, sigma.hom.col(j))
           for j in range(n)]
    return PolyMatrix([row], 1, n, n)


def gradient(f: Poly) -> PolyMatrix:
    return PolyMatrix([[f.diff(j) for j in range(f.nvars)]], 1, f.nvars, f.nvars)


# -- frames --------------------------------------------------------------

def derivation_frame(patch: Patch) -> list[tuple[str, DerivationDE]]:
    """``(E_ab, 0)`` for all a, b followed by ``(0, d/dx_j)``."""
    k, n = patch.rank_e, patch.dim_m
    out = []
    for a in range(k):
        for b in range(k):
            out.append((f"E{a + 1}{b + 1}", DerivationDE.from_endo(PolyMatrix.unit(k, k, a, b, n))))
    for j in range(n):
        out.append((f"d/d{patch.var_names[j]}",
                    DerivationDE.from_field(VectorField.basis(n, j, n), k)))
    return out


def jet_frame(patch: Patch) -> list[tuple[str, JetSection]]:
    """``e_a (x) dx_j`` (row-major in a, j) followed by the constant jets ``(0, e_a)``."""
    k, n = patch.rank_e, patch.dim_m
    out = []
    for a in range(k):
        for j in range(n):
            out.append((f"e{a + 1}*d{patch.var_names[j]}",
                        JetSection.from_hom(PolyMatrix.unit(k, n, a, j, n))))
    for a in range(k):
        out.append((f"[e{a + 1}]", JetSection(PolyMatrix.zeros(k, n, n),
                                                SectionE.basis(k, a, n))))
    return out


def jet_from_pairings(patch: Patch, pair: Callable[[DerivationDE], SectionE]) -> JetSection:
    """Rebuild a jet from its pairings against the derivation frame."""
    k, n = patch.rank_e, patch.dim_m
    z = Poly.zero(n)
    val = [z] * k
    for b in range(k):
        # <mu, E_ab> = (E_ab w) = w_b e_a; read it off with a = 0
        val[b] = pair(DerivationDE.from_endo(PolyMatrix.unit(k, k, 0, b, n)))[0]
    cols = [pair(DerivationDE.from_field(VectorField.basis(n, j, n), k)).comps for j in range(n)]
    hom = PolyMatrix([[cols[j][a] for j in range(n)] for a in range(k)], k, n, n)
    return JetSection(hom, SectionE(tuple(val), n))


def derivation_from_pairings(patch: Patch, pair: Callable[[JetSection], SectionE]) -> DerivationDE:
    """Rebuild a derivation from its pairings against the jet frame."""
    k, n = patch.rank_e, patch.dim_m
    cols = [pair(JetSection(PolyMatrix.zeros(k, n, n), SectionE.basis(k, b, n))).comps
            for b in range(k)]
    endo = PolyMatrix([[cols[b][a] for b in range(k)] for a in range(k)], k, k, n)
    base = tuple(pair(JetSection.from_hom(PolyMatrix.unit(k, n, 0, j, n)))[0] for j in range(n))
    return DerivationDE(endo, VectorField(base, n))


def one_form_lie_derivative(x: VectorField, omega: Sequence[Poly]) -> tuple[Poly, ...]:
    """``(L_x omega)_j = x(omega_j) + sum_i omega_i d_j x^i``."""
    n = x.nvars
    out = []
    for j in range(n):
        acc = x.apply(omega[j])
        for i in range(n):
            acc = acc + omega[i] * x.comps[i].diff(j)
        out.append(acc)
    return tuple(out)
